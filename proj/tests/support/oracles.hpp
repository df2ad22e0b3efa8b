// Independent reference implementations the test suites check the library
// against. Everything here is deliberately naive; none of it shares code with
// the implementations under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qkdplan/keypool.hpp"
#include "qkdplan/planner.hpp"
#include "qkdplan/rskr.hpp"
#include "qkdplan/spectrum.hpp"

namespace qkdplan_test {

// Counts channels by walking a 1 MHz cursor left to right through each
// segment, placing a channel whenever one fits at the cursor.
inline std::int64_t pack_count_oracle(const qkdplan::Band& band, qkdplan::Mhz occupancy_mhz) {
  std::int64_t placed = 0;
  for (const qkdplan::Segment& seg : band.segments()) {
    qkdplan::Mhz cursor = seg.lower_mhz;
    while (cursor < seg.upper_mhz) {
      if (cursor + occupancy_mhz <= seg.upper_mhz) {
        ++placed;
        cursor += occupancy_mhz;
      } else {
        cursor += 1;
      }
    }
  }
  return placed;
}

// Materializes every rekey event, sorts the whole list, and walks it.
inline qkdplan::SimResult simulate_oracle(const qkdplan::SimConfig& config) {
  struct Event {
    double time_s;
    std::string id;
    std::size_t channel;
    double bits;
  };
  std::vector<Event> events;
  const auto& channels = config.link.channels();
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const double rate = channels[i].policy().refresh_rate_hz();
    if (rate <= 0.0) continue;
    const auto bits = static_cast<double>(channels[i].policy().key_length_bits());
    for (std::int64_t n = 1; static_cast<double>(n) / rate <= config.horizon_s; ++n) {
      events.push_back({static_cast<double>(n) / rate, channels[i].id(), i, bits});
    }
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time_s != b.time_s) return a.time_s < b.time_s;
    return a.id < b.id;
  });

  qkdplan::SimResult result;
  result.min_pool_bits = config.initial_pool_bits;
  double consumed = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& ev = events[i];
    const double pool_before = config.initial_pool_bits + config.skr_bps * ev.time_s - consumed;
    const double pool_after = pool_before - ev.bits;
    consumed += ev.bits;
    if (i == 0 || pool_after < result.min_pool_bits) result.min_pool_bits = pool_after;
    if (!result.underflow_time_s && pool_after < -qkdplan::kUnderflowTolBits) {
      result.underflow_time_s = ev.time_s;
    }
    ++result.events_processed;
  }
  result.final_pool_bits =
      config.initial_pool_bits + config.skr_bps * config.horizon_s - consumed;
  return result;
}

// Full enumeration of channel mixes: every count vector bounded by the
// per-capacity channel limit and the band width.
struct EnumPlan {
  std::vector<std::int64_t> counts;  // aligned with the table's entries
  std::int64_t total_count = 0;
  qkdplan::Mhz total_occupancy_mhz = 0;
  double total_capacity_gbps = 0.0;
};

// Returns true when `a` is the better plan: fewer channels, then less
// spectrum, then lexicographically fewer low-capacity channels.
inline bool plan_key_less(const EnumPlan& a, const EnumPlan& b) {
  if (a.total_count != b.total_count) return a.total_count < b.total_count;
  if (a.total_occupancy_mhz != b.total_occupancy_mhz)
    return a.total_occupancy_mhz < b.total_occupancy_mhz;
  return std::lexicographical_compare(a.counts.begin(), a.counts.end(), b.counts.begin(),
                                      b.counts.end());
}

template <typename Visit>
inline void enumerate_mixes(const qkdplan::Band& band, const qkdplan::CapacityOccupancyTable& table,
                            Visit&& visit) {
  const qkdplan::Mhz width = qkdplan::band_width_mhz(band);
  const auto& entries = table.entries();
  std::vector<std::int64_t> limits(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    limits[i] = qkdplan::max_channels(band, entries[i].occupancy_mhz);
  }
  EnumPlan current;
  current.counts.assign(entries.size(), 0);
  auto recurse = [&](auto&& self, std::size_t idx) -> void {
    if (idx == entries.size()) {
      visit(current);
      return;
    }
    for (std::int64_t n = 0; n <= limits[idx]; ++n) {
      const qkdplan::Mhz occupancy = n * entries[idx].occupancy_mhz;
      if (current.total_occupancy_mhz + occupancy > width) break;
      current.counts[idx] = n;
      current.total_count += n;
      current.total_occupancy_mhz += occupancy;
      current.total_capacity_gbps += static_cast<double>(n) * entries[idx].capacity_gbps;
      self(self, idx + 1);
      current.total_capacity_gbps -= static_cast<double>(n) * entries[idx].capacity_gbps;
      current.total_occupancy_mhz -= occupancy;
      current.total_count -= n;
      current.counts[idx] = 0;
    }
  };
  recurse(recurse, 0);
}

inline std::optional<EnumPlan> plan_oracle(double demand_gbps, const qkdplan::Band& band,
                                           const qkdplan::CapacityOccupancyTable& table) {
  std::optional<EnumPlan> best;
  enumerate_mixes(band, table, [&](const EnumPlan& mix) {
    if (mix.total_capacity_gbps < demand_gbps) return;
    if (!best || plan_key_less(mix, *best)) best = mix;
  });
  return best;
}

// Best plan for every integer demand in [lo, hi], computed from one
// enumeration pass. Requires integer-valued table capacities.
inline std::vector<std::optional<EnumPlan>> plan_oracle_sweep(
    std::int64_t lo, std::int64_t hi, const qkdplan::Band& band,
    const qkdplan::CapacityOccupancyTable& table) {
  std::int64_t max_capacity = 0;
  enumerate_mixes(band, table, [&](const EnumPlan& mix) {
    max_capacity = std::max<std::int64_t>(max_capacity, std::llround(mix.total_capacity_gbps));
  });
  std::vector<std::optional<EnumPlan>> best_at(static_cast<std::size_t>(max_capacity) + 1);
  enumerate_mixes(band, table, [&](const EnumPlan& mix) {
    const auto capacity = std::llround(mix.total_capacity_gbps);
    auto& slot = best_at[static_cast<std::size_t>(capacity)];
    if (!slot || plan_key_less(mix, *slot)) slot = mix;
  });
  // best for demand D = best over exact capacities >= D
  for (std::int64_t c = max_capacity - 1; c >= 0; --c) {
    const auto& above = best_at[static_cast<std::size_t>(c) + 1];
    auto& slot = best_at[static_cast<std::size_t>(c)];
    if (above && (!slot || plan_key_less(*above, *slot))) slot = above;
  }
  std::vector<std::optional<EnumPlan>> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t d = lo; d <= hi; ++d) {
    out.push_back(d <= max_capacity ? best_at[static_cast<std::size_t>(d)] : std::nullopt);
  }
  return out;
}

// Rekeying rate expressed as an exact fraction, for tests that need the true
// common period of a channel set.
struct RationalRate {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Common rekey period: the smallest time containing a whole number of rekey
// intervals of every channel. Periods are den/num; their lcm is
// lcm(dens) / gcd(nums) after reduction.
inline double common_period_s(const std::vector<RationalRate>& rates) {
  std::int64_t lcm_den = 1;
  std::int64_t gcd_num = 0;
  for (const RationalRate& r : rates) {
    const std::int64_t g = std::gcd(r.num, r.den);
    lcm_den = std::lcm(lcm_den, r.den / g);
    gcd_num = std::gcd(gcd_num, r.num / g);
  }
  return static_cast<double>(lcm_den) / static_cast<double>(gcd_num);
}

// Random band of 1-3 disjoint segments with total width in [1, max_width].
inline qkdplan::Band random_band(std::mt19937_64& rng, qkdplan::Mhz max_width) {
  std::uniform_int_distribution<int> segment_count(1, 3);
  std::uniform_int_distribution<qkdplan::Mhz> width_dist(1, std::max<qkdplan::Mhz>(1, max_width / 3));
  std::uniform_int_distribution<qkdplan::Mhz> gap_dist(1, 1000);
  std::vector<qkdplan::Segment> segments;
  qkdplan::Mhz cursor = gap_dist(rng);
  const int n = segment_count(rng);
  for (int i = 0; i < n; ++i) {
    const qkdplan::Mhz width = width_dist(rng);
    segments.push_back({cursor, cursor + width});
    cursor += width + gap_dist(rng);
  }
  return qkdplan::Band(segments);
}

}  // namespace qkdplan_test
