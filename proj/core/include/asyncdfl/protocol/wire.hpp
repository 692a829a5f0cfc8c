#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "asyncdfl/protocol/node_state.hpp"

namespace asyncdfl::wire {

// Message record, little endian: sender u32, stamp u64, dim u32, payload f64 x dim.
void append_message(std::vector<std::uint8_t>& out, const StampedParameter& msg);

// Decodes one record starting at `offset` and advances it.
StampedParameter read_message(std::span<const std::uint8_t> bytes, std::size_t& offset);

// A delivery event in a trace dump: the slot at whose end the message was
// handed to `receiver`, followed by the message record.
struct DeliveryEvent {
  std::uint64_t slot = 0;
  NodeId receiver = 0;
  StampedParameter message;

  friend bool operator==(const DeliveryEvent&, const DeliveryEvent&) = default;
};

inline constexpr char kDumpMagic[8] = {'A', 'D', 'F', 'L', 'T', 'R', 'C', '1'};

// Dump file: 8-byte magic, node count u32, then per event slot u64,
// receiver u32 and the message record.
void write_dump(std::ostream& out, std::uint32_t node_count, std::span<const DeliveryEvent> events);

struct Dump {
  std::uint32_t node_count = 0;
  std::vector<DeliveryEvent> events;
};

Dump read_dump(std::istream& in);

}  // namespace asyncdfl::wire
