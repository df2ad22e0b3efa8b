#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qkdplan/errors.hpp"
#include "qkdplan/rskr.hpp"
#include "qkdplan/spectrum.hpp"

namespace qkdplan {

// A throughput target to be met with channels drawn from `table`, packed into
// `band`, every planned channel keyed under the one `policy`.
class Demand {
 public:
  Demand(double throughput_gbps, Band band, KeyPolicy policy, CapacityOccupancyTable table)
      : throughput_gbps_(throughput_gbps),
        band_(std::move(band)),
        policy_(policy),
        table_(std::move(table)) {
    if (!(throughput_gbps > 0.0) || !std::isfinite(throughput_gbps)) {
      throw ValidationError("throughput_gbps must be finite and > 0");
    }
  }

  double throughput_gbps() const { return throughput_gbps_; }
  const Band& band() const { return band_; }
  const KeyPolicy& policy() const { return policy_; }
  const CapacityOccupancyTable& table() const { return table_; }

 private:
  double throughput_gbps_;
  Band band_;
  KeyPolicy policy_;
  CapacityOccupancyTable table_;
};

struct Plan {
  struct Item {
    double capacity_gbps = 0.0;
    std::int64_t count = 0;

    friend bool operator==(const Item&, const Item&) = default;
  };

  // Ascending by capacity; capacities with a zero count are omitted.
  std::vector<Item> counts;
  double total_capacity_gbps = 0.0;
  Mhz total_occupancy_mhz = 0;
  double rskr_bps = 0.0;

  std::int64_t channel_count() const {
    std::int64_t n = 0;
    for (const Item& item : counts) n += item.count;
    return n;
  }

  friend bool operator==(const Plan&, const Plan&) = default;
};

// Picks the channel mix that meets the demanded throughput within the band's
// spectrum using the fewest channels, which minimizes the link's key demand
// under a uniform policy. Ties go to the smaller total occupancy, then to the
// count vector that is lexicographically smallest in ascending capacity order
// (fewer low-capacity channels). Bounded exhaustive search over channel
// counts, growing the channel total until a mix fits.
inline Plan plan_min_rskr(const Demand& demand) {
  struct Option {
    double capacity_gbps;
    Mhz occupancy_mhz;
    std::int64_t max_count;
  };

  const Mhz width = band_width_mhz(demand.band());
  std::vector<Option> options;  // ascending capacity, only capacities that fit at all
  for (const CapacityOccupancyTable::Entry& e : demand.table().entries()) {
    const std::int64_t fit = max_channels(demand.band(), e.occupancy_mhz);
    if (fit >= 1) options.push_back({e.capacity_gbps, e.occupancy_mhz, fit});
  }
  if (options.empty()) {
    throw InfeasibleError("no table capacity fits in the band");
  }

  const double target = demand.throughput_gbps();
  const double top_capacity = options.back().capacity_gbps;   // capacities ascend
  const Mhz min_occupancy = options.front().occupancy_mhz;    // occupancies ascend with capacity
  const std::int64_t max_total_channels = width / min_occupancy;

  std::vector<std::int64_t> chosen(options.size(), 0);
  std::vector<std::int64_t> best;
  Mhz best_occupancy = 0;
  bool found = false;

  // DFS over counts for a fixed channel total. Occupancies ascend with the
  // option index, so `slots * occupancy of options[idx]` lower-bounds the
  // spectrum still needed; `slots * top_capacity` upper-bounds the capacity
  // still reachable.
  auto search = [&](auto&& self, std::size_t idx, std::int64_t slots, Mhz occupancy,
                    double capacity) -> void {
    if (occupancy > width) return;
    if (slots == 0) {
      if (capacity < target) return;
      if (found && !(occupancy < best_occupancy ||
                     (occupancy == best_occupancy &&
                      std::lexicographical_compare(chosen.begin(), chosen.end(), best.begin(),
                                                   best.end())))) {
        return;
      }
      best = chosen;
      best_occupancy = occupancy;
      found = true;
      return;
    }
    if (idx == options.size()) return;
    if (capacity + static_cast<double>(slots) * top_capacity < target) return;
    if (occupancy + slots * options[idx].occupancy_mhz > width) return;
    const std::int64_t limit = std::min(slots, options[idx].max_count);
    for (std::int64_t n = 0; n <= limit; ++n) {
      chosen[idx] = n;
      self(self, idx + 1, slots - n, occupancy + n * options[idx].occupancy_mhz,
           capacity + static_cast<double>(n) * options[idx].capacity_gbps);
    }
    chosen[idx] = 0;
  };

  // Fewer than ceil(target / top_capacity) channels can never carry the
  // demand; the div is adjusted to be exact under rounding and clamped so an
  // unmeetable target ends the loop immediately.
  auto total = static_cast<std::int64_t>(
      std::min(std::ceil(target / top_capacity), static_cast<double>(max_total_channels) + 1.0));
  if (total < 1) total = 1;
  while (total > 1 && static_cast<double>(total - 1) * top_capacity >= target) --total;
  while (total <= max_total_channels && static_cast<double>(total) * top_capacity < target) ++total;
  for (; total <= max_total_channels; ++total) {
    search(search, 0, total, 0, 0.0);
    if (found) {
      Plan plan;
      plan.rskr_bps = rskr_per_channel(demand.policy()) * static_cast<double>(total);
      plan.total_occupancy_mhz = best_occupancy;
      for (std::size_t i = 0; i < options.size(); ++i) {
        if (best[i] == 0) continue;
        plan.counts.push_back({options[i].capacity_gbps, best[i]});
        plan.total_capacity_gbps += static_cast<double>(best[i]) * options[i].capacity_gbps;
      }
      return plan;
    }
  }
  throw InfeasibleError("demand of " + std::to_string(target) +
                        " Gbps cannot be met within the band");
}

}  // namespace qkdplan
