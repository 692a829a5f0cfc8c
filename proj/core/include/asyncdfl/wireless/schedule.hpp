#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "asyncdfl/wireless/radio.hpp"

namespace asyncdfl {

struct Schedule {
  std::vector<std::vector<std::size_t>> receivers;  // Y_i, ascending
  std::vector<std::size_t> scheduled;               // I-bar, ascending

  bool is_scheduled(std::size_t i) const;
};

// Y_i = {j != i : SINR_{j,i} > gamma}, where SINR_{j,i} is the SINR at
// receiver j of transmitter i.
Schedule build_schedule(const SinrMatrix& sinr, double gamma_linear);

// R_i = min over receivers of log2(1 + SINR); 0 for unscheduled nodes.
std::vector<double> min_rates(const Schedule& schedule, const SinrMatrix& sinr);

struct Allocation {
  Schedule schedule;              // after dropping zero-rate nodes
  std::vector<double> rates;      // R_i
  std::vector<double> bandwidths; // B_i, zero when unscheduled
};

// Max-min optimal split: B_i = (B / R_i) / sum_k (1 / R_k).
Allocation allocate_bandwidth(const Schedule& schedule, const SinrMatrix& sinr, double total_bandwidth);

// B / |I-bar| for every scheduled node.
Allocation uniform_allocation(const Schedule& schedule, const SinrMatrix& sinr, double total_bandwidth);

// Uniform draw from the simplex over scheduled nodes.
Allocation random_allocation(const Schedule& schedule, const SinrMatrix& sinr, double total_bandwidth,
                             std::mt19937_64& rng);

// min over scheduled i and j in Y_i of B_i log2(1 + SINR_{j,i}).
double min_rate_objective(const Schedule& schedule, const SinrMatrix& sinr,
                          const std::vector<double>& bandwidths);

struct Durations {
  std::map<std::pair<std::size_t, std::size_t>, double> exact;          // (rx, tx) -> slots, real
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> slots;   // ceiled
  std::uint64_t gamma_t = 0;
};

// Gamma_{j,i} = q S / (T B_i log2(1 + SINR_{j,i})), ceiled to whole slots.
Durations transmission_durations(const Schedule& schedule, const std::vector<double>& bandwidths,
                                 const SinrMatrix& sinr, double q, double payload_bits,
                                 double slot_seconds);

// w0 slots per unscheduled node.
std::uint64_t waiting_duration(const Schedule& schedule, std::size_t node_count, double w0_slots);

struct ScheduleOutcome {
  Schedule schedule;
  std::vector<double> rates;
  std::vector<double> bandwidths;
  Durations durations;
  std::uint64_t gamma_t = 0;
  std::uint64_t gamma_w = 0;
  std::uint64_t gamma = 0;
  double objective = 0.0;  // min-rate objective, 0 when nothing is scheduled
};

enum class AllocationPolicy { Optimal, Uniform, Random };

// Full epoch computation: schedule, allocation and durations.
ScheduleOutcome plan_epoch(const SinrMatrix& sinr, const WirelessConfig& config, double q,
                           double payload_bits, AllocationPolicy policy, std::mt19937_64& rng);

}  // namespace asyncdfl
