#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qkdplan/errors.hpp"
#include "qkdplan/policy.hpp"
#include "qkdplan/spectrum.hpp"

namespace qkdplan {

enum class GridMode { fixed, flex };

// A band populated with data channels. Fixed-grid links use one occupancy for
// every channel and are bounded by max_channels(); flex-grid links may mix
// occupancies as long as the total fits the band width.
class Link {
 public:
  Link(Band band, std::vector<ChannelSpec> channels, GridMode grid)
      : band_(std::move(band)), channels_(std::move(channels)), grid_(grid) {
    if (grid_ == GridMode::fixed && !channels_.empty()) {
      const Mhz occupancy = channels_.front().occupancy_mhz();
      for (const ChannelSpec& ch : channels_) {
        if (ch.occupancy_mhz() != occupancy) {
          throw ValidationError("fixed-grid link requires a uniform occupancy_mhz");
        }
      }
      if (static_cast<std::int64_t>(channels_.size()) > max_channels(band_, occupancy)) {
        throw ValidationError("channel count exceeds the fixed-grid capacity of the band");
      }
    } else if (grid_ == GridMode::flex) {
      Mhz total = 0;
      for (const ChannelSpec& ch : channels_) {
        total += ch.occupancy_mhz();
      }
      if (total > band_width_mhz(band_)) {
        throw ValidationError("total channel occupancy exceeds the band width");
      }
    }
  }

  const Band& band() const { return band_; }
  const std::vector<ChannelSpec>& channels() const { return channels_; }
  GridMode grid() const { return grid_; }

  friend bool operator==(const Link&, const Link&) = default;

 private:
  Band band_;
  std::vector<ChannelSpec> channels_;
  GridMode grid_;
};

// Key demand of one data channel in bits/s: key length times refresh rate.
inline double rskr_per_channel(const KeyPolicy& policy) {
  return static_cast<double>(policy.key_length_bits()) * policy.refresh_rate_hz();
}

// Key demand of a whole link: the sum over its channels. This is the general
// form; per-channel policies may differ freely.
inline double rskr_per_link(const Link& link) {
  double total = 0.0;
  for (const ChannelSpec& ch : link.channels()) {
    total += rskr_per_channel(ch.policy());
  }
  return total;
}

// Link demand when every channel shares one policy.
inline double rskr_homogeneous(const KeyPolicy& policy, std::int64_t n_channels) {
  if (n_channels < 0) {
    throw ValidationError("n_channels must be >= 0");
  }
  return rskr_per_channel(policy) * static_cast<double>(n_channels);
}

// Link demand for a fixed-grid link filled to capacity with channels of the
// given occupancy.
inline double rskr_fixgrid(const KeyPolicy& policy, const Band& band, Mhz occupancy_mhz) {
  return rskr_homogeneous(policy, max_channels(band, occupancy_mhz));
}

struct CurvePoint {
  double capacity_gbps = 0.0;
  Mhz occupancy_mhz = 0;
  std::int64_t n_channels = 0;
  double rskr_bps = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// Link key demand as a function of channel capacity: one point per table
// entry, with the band filled at that entry's minimum occupancy.
inline std::vector<CurvePoint> generate_curve(const KeyPolicy& policy, const Band& band,
                                              const CapacityOccupancyTable& table) {
  if (table.entries().empty()) {
    throw ValidationError("table must have at least one entry");
  }
  std::vector<CurvePoint> points;
  points.reserve(table.entries().size());
  for (const CapacityOccupancyTable::Entry& e : table.entries()) {
    const std::int64_t n = max_channels(band, e.occupancy_mhz);
    points.push_back({e.capacity_gbps, e.occupancy_mhz, n, rskr_homogeneous(policy, n)});
  }
  return points;
}

}  // namespace qkdplan
