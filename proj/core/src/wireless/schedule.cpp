#include "asyncdfl/wireless/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "asyncdfl/errors.hpp"
#include "asyncdfl/log.hpp"

namespace asyncdfl {

bool Schedule::is_scheduled(std::size_t i) const {
  return std::binary_search(scheduled.begin(), scheduled.end(), i);
}

Schedule build_schedule(const SinrMatrix& sinr, double gamma_linear) {
  if (!(gamma_linear > 0.0)) throw ContractViolation("build_schedule: gamma must be positive");
  const std::size_t n = sinr.size();
  Schedule s;
  s.receivers.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && sinr.at(j, i) > gamma_linear) s.receivers[i].push_back(j);
    }
    if (!s.receivers[i].empty()) s.scheduled.push_back(i);
  }
  return s;
}

std::vector<double> min_rates(const Schedule& schedule, const SinrMatrix& sinr) {
  std::vector<double> r(sinr.size(), 0.0);
  for (std::size_t i : schedule.scheduled) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j : schedule.receivers[i]) best = std::min(best, std::log2(1.0 + sinr.at(j, i)));
    r[i] = best;
  }
  return r;
}

namespace {

// Computes rates and removes scheduled nodes whose rate underflowed to zero.
Allocation prepare(const Schedule& schedule, const SinrMatrix& sinr) {
  Allocation a;
  a.schedule = schedule;
  a.rates = min_rates(schedule, sinr);
  std::vector<std::size_t> kept;
  for (std::size_t i : schedule.scheduled) {
    if (a.rates[i] > 0.0 && std::isfinite(a.rates[i])) {
      kept.push_back(i);
    } else {
      log::warn("node " + std::to_string(i) + " has rate " + std::to_string(a.rates[i]) +
                "; excluded from the scheduled set");
      a.schedule.receivers[i].clear();
      a.rates[i] = 0.0;
    }
  }
  a.schedule.scheduled = std::move(kept);
  if (a.schedule.scheduled.empty()) throw ContractViolation("bandwidth allocation needs a scheduled node");
  a.bandwidths.assign(sinr.size(), 0.0);
  return a;
}

}  // namespace

Allocation allocate_bandwidth(const Schedule& schedule, const SinrMatrix& sinr, double total_bandwidth) {
  Allocation a = prepare(schedule, sinr);
  double inv_sum = 0.0;
  for (std::size_t i : a.schedule.scheduled) inv_sum += 1.0 / a.rates[i];
  for (std::size_t i : a.schedule.scheduled) a.bandwidths[i] = (total_bandwidth / a.rates[i]) / inv_sum;
  return a;
}

Allocation uniform_allocation(const Schedule& schedule, const SinrMatrix& sinr, double total_bandwidth) {
  Allocation a = prepare(schedule, sinr);
  const double share = total_bandwidth / static_cast<double>(a.schedule.scheduled.size());
  for (std::size_t i : a.schedule.scheduled) a.bandwidths[i] = share;
  return a;
}

Allocation random_allocation(const Schedule& schedule, const SinrMatrix& sinr, double total_bandwidth,
                             std::mt19937_64& rng) {
  Allocation a = prepare(schedule, sinr);
  std::exponential_distribution<double> expo(1.0);
  double sum = 0.0;
  for (std::size_t i : a.schedule.scheduled) {
    double e = 0.0;
    while (!(e > 0.0)) e = expo(rng);
    a.bandwidths[i] = e;
    sum += e;
  }
  for (std::size_t i : a.schedule.scheduled) a.bandwidths[i] *= total_bandwidth / sum;
  return a;
}

double min_rate_objective(const Schedule& schedule, const SinrMatrix& sinr,
                          const std::vector<double>& bandwidths) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : schedule.scheduled) {
    for (std::size_t j : schedule.receivers[i]) {
      best = std::min(best, bandwidths[i] * std::log2(1.0 + sinr.at(j, i)));
    }
  }
  return std::isfinite(best) ? best : 0.0;
}

Durations transmission_durations(const Schedule& schedule, const std::vector<double>& bandwidths,
                                 const SinrMatrix& sinr, double q, double payload_bits,
                                 double slot_seconds) {
  if (!(slot_seconds > 0.0) || !(payload_bits > 0.0) || !(q > 0.0)) {
    throw ContractViolation("transmission_durations: q, S and T must be positive");
  }
  Durations d;
  for (std::size_t i : schedule.scheduled) {
    if (!(bandwidths.at(i) > 0.0)) {
      throw ContractViolation("scheduled node " + std::to_string(i) + " has no bandwidth");
    }
    for (std::size_t j : schedule.receivers[i]) {
      const double exact = q * payload_bits / (slot_seconds * bandwidths[i] * std::log2(1.0 + sinr.at(j, i)));
      // Relative slack keeps exact integers from rounding up a whole slot.
      const auto slots = static_cast<std::uint64_t>(std::max(1.0, std::ceil(exact * (1.0 - 1e-12))));
      d.exact[{j, i}] = exact;
      d.slots[{j, i}] = slots;
      d.gamma_t = std::max(d.gamma_t, slots);
    }
  }
  return d;
}

std::uint64_t waiting_duration(const Schedule& schedule, std::size_t node_count, double w0_slots) {
  const std::size_t idle = node_count - schedule.scheduled.size();
  return static_cast<std::uint64_t>(std::ceil(w0_slots * static_cast<double>(idle)));
}

ScheduleOutcome plan_epoch(const SinrMatrix& sinr, const WirelessConfig& config, double q,
                           double payload_bits, AllocationPolicy policy, std::mt19937_64& rng) {
  ScheduleOutcome out;
  const Schedule raw = build_schedule(sinr, db_to_linear(config.gamma_db));
  out.schedule = raw;
  out.rates.assign(sinr.size(), 0.0);
  out.bandwidths.assign(sinr.size(), 0.0);
  bool any_rate = false;
  for (double r : min_rates(raw, sinr)) any_rate = any_rate || r > 0.0;
  if (!raw.scheduled.empty() && any_rate) {
    Allocation a;
    switch (policy) {
      case AllocationPolicy::Optimal: a = allocate_bandwidth(raw, sinr, config.bandwidth_hz); break;
      case AllocationPolicy::Uniform: a = uniform_allocation(raw, sinr, config.bandwidth_hz); break;
      case AllocationPolicy::Random: a = random_allocation(raw, sinr, config.bandwidth_hz, rng); break;
    }
    out.schedule = std::move(a.schedule);
    out.rates = std::move(a.rates);
    out.bandwidths = std::move(a.bandwidths);
    out.durations = transmission_durations(out.schedule, out.bandwidths, sinr, q, payload_bits,
                                           config.training_latency_s);
    out.objective = min_rate_objective(out.schedule, sinr, out.bandwidths);
  } else {
    out.schedule.scheduled.clear();
    for (auto& r : out.schedule.receivers) r.clear();
  }
  out.gamma_t = out.durations.gamma_t;
  out.gamma_w = waiting_duration(out.schedule, sinr.size(), config.w0_slots);
  out.gamma = out.gamma_t + out.gamma_w;
  return out;
}

}  // namespace asyncdfl
