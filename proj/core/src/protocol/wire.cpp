#include "asyncdfl/protocol/wire.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>

#include "asyncdfl/errors.hpp"

namespace asyncdfl::wire {

namespace {

template <typename U>
void put_le(std::vector<std::uint8_t>& out, U value) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
}

template <typename U>
U get_le(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  if (offset + sizeof(U) > bytes.size()) throw ProtocolStateError("truncated wire record");
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) value |= static_cast<U>(bytes[offset + b]) << (8 * b);
  offset += sizeof(U);
  return value;
}

}  // namespace

void append_message(std::vector<std::uint8_t>& out, const StampedParameter& msg) {
  put_le<std::uint32_t>(out, msg.sender);
  put_le<std::uint64_t>(out, msg.stamp);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(msg.payload.dim()));
  for (double v : msg.payload) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

StampedParameter read_message(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  StampedParameter msg;
  msg.sender = get_le<std::uint32_t>(bytes, offset);
  msg.stamp = get_le<std::uint64_t>(bytes, offset);
  const auto dim = get_le<std::uint32_t>(bytes, offset);
  if (offset + std::size_t{dim} * 8 > bytes.size()) throw ProtocolStateError("truncated wire payload");
  std::vector<double> payload(dim);
  for (auto& v : payload) v = std::bit_cast<double>(get_le<std::uint64_t>(bytes, offset));
  msg.payload = ParameterVector(std::move(payload));
  return msg;
}

void write_dump(std::ostream& out, std::uint32_t node_count, std::span<const DeliveryEvent> events) {
  std::vector<std::uint8_t> bytes(std::begin(kDumpMagic), std::end(kDumpMagic));
  put_le<std::uint32_t>(bytes, node_count);
  for (const auto& e : events) {
    put_le<std::uint64_t>(bytes, e.slot);
    put_le<std::uint32_t>(bytes, e.receiver);
    append_message(bytes, e.message);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ProtocolStateError("failed writing trace dump");
}

Dump read_dump(std::istream& in) {
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kDumpMagic) + 4 ||
      std::memcmp(bytes.data(), kDumpMagic, sizeof(kDumpMagic)) != 0) {
    throw ProtocolStateError("not a trace dump (bad magic)");
  }
  std::size_t offset = sizeof(kDumpMagic);
  Dump dump;
  dump.node_count = get_le<std::uint32_t>(bytes, offset);
  while (offset < bytes.size()) {
    DeliveryEvent e;
    e.slot = get_le<std::uint64_t>(bytes, offset);
    e.receiver = get_le<std::uint32_t>(bytes, offset);
    e.message = read_message(bytes, offset);
    dump.events.push_back(std::move(e));
  }
  return dump;
}

}  // namespace asyncdfl::wire
