#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkdplan/errors.hpp"
#include "qkdplan/policy.hpp"

namespace qkdplan {

// Spectrum arithmetic is carried out in integer MHz so that channel counts
// come out of exact integer division (112.5 GHz is 112500 MHz, never a
// floating-point floor).
using Mhz = std::int64_t;

struct Segment {
  Mhz lower_mhz = 0;
  Mhz upper_mhz = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// An operational band: one or more non-overlapping frequency segments, sorted
// ascending. Touching segments are merged at construction so packing sees one
// contiguous span.
class Band {
 public:
  explicit Band(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
      throw ValidationError("band requires at least one segment");
    }
    for (const Segment& seg : segments_) {
      if (seg.lower_mhz <= 0) {
        throw ValidationError("segment lower_mhz must be > 0");
      }
      if (seg.upper_mhz <= seg.lower_mhz) {
        throw ValidationError("segment upper_mhz must be > lower_mhz");
      }
    }
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      if (segments_[i].lower_mhz < segments_[i - 1].upper_mhz) {
        throw ValidationError("segments must be disjoint and sorted ascending by lower_mhz");
      }
    }
    std::vector<Segment> merged;
    merged.reserve(segments_.size());
    for (const Segment& seg : segments_) {
      if (!merged.empty() && merged.back().upper_mhz == seg.lower_mhz) {
        merged.back().upper_mhz = seg.upper_mhz;
      } else {
        merged.push_back(seg);
      }
    }
    segments_ = std::move(merged);
  }

  const std::vector<Segment>& segments() const { return segments_; }

  friend bool operator==(const Band&, const Band&) = default;

 private:
  std::vector<Segment> segments_;
};

// C band: 191.35-196.10 THz. C+L band: 184.49-196.10 THz, one contiguous span.
inline constexpr Mhz kCBandLowerMhz = 191'350'000;
inline constexpr Mhz kCBandUpperMhz = 196'100'000;
inline constexpr Mhz kClBandLowerMhz = 184'490'000;
inline constexpr Mhz kClBandUpperMhz = kCBandUpperMhz;

inline Band c_band() { return Band({{kCBandLowerMhz, kCBandUpperMhz}}); }
inline Band cl_band() { return Band({{kClBandLowerMhz, kClBandUpperMhz}}); }

inline bool is_band_name(std::string_view name) { return name == "C" || name == "C+L"; }

inline Band band_from_name(std::string_view name) {
  if (name == "C") return c_band();
  if (name == "C+L") return cl_band();
  throw ValidationError("unknown band name \"" + std::string(name) + "\" (expected \"C\" or \"C+L\")");
}

// One DWDM data channel: nominal capacity, spectral footprint and rekeying
// policy. The id is opaque; it only orders simultaneous simulator events.
class ChannelSpec {
 public:
  ChannelSpec(std::string id, double capacity_gbps, Mhz occupancy_mhz, KeyPolicy policy)
      : id_(std::move(id)),
        capacity_gbps_(capacity_gbps),
        occupancy_mhz_(occupancy_mhz),
        policy_(policy) {
    if (!(capacity_gbps > 0.0) || !std::isfinite(capacity_gbps)) {
      throw ValidationError("capacity_gbps must be finite and > 0");
    }
    if (occupancy_mhz <= 0) {
      throw ValidationError("occupancy_mhz must be > 0");
    }
  }

  const std::string& id() const { return id_; }
  double capacity_gbps() const { return capacity_gbps_; }
  Mhz occupancy_mhz() const { return occupancy_mhz_; }
  const KeyPolicy& policy() const { return policy_; }

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;

 private:
  std::string id_;
  double capacity_gbps_;
  Mhz occupancy_mhz_;
  KeyPolicy policy_;
};

// Maps channel capacity to the minimum spectral occupancy it needs. Both
// columns must be strictly ascending: higher capacity never needs less
// spectrum. Lookups are exact-match; no interpolation.
class CapacityOccupancyTable {
 public:
  struct Entry {
    double capacity_gbps = 0.0;
    Mhz occupancy_mhz = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit CapacityOccupancyTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const Entry& e = entries_[i];
      if (!(e.capacity_gbps > 0.0) || !std::isfinite(e.capacity_gbps)) {
        throw ValidationError("table capacity_gbps must be finite and > 0");
      }
      if (e.occupancy_mhz <= 0) {
        throw ValidationError("table occupancy_mhz must be > 0");
      }
      if (i > 0 && !(e.capacity_gbps > entries_[i - 1].capacity_gbps)) {
        throw ValidationError("table capacities must be strictly ascending");
      }
      if (i > 0 && !(e.occupancy_mhz > entries_[i - 1].occupancy_mhz)) {
        throw ValidationError("table occupancies must be strictly ascending");
      }
    }
  }

  const std::vector<Entry>& entries() const { return entries_; }

  friend bool operator==(const CapacityOccupancyTable&, const CapacityOccupancyTable&) = default;

 private:
  std::vector<Entry> entries_;
};

// Built-in capacity/occupancy table used when a config or CLI invocation does
// not supply its own.
inline CapacityOccupancyTable default_capacity_table() {
  return CapacityOccupancyTable({
      {100.0, 50'000},
      {400.0, 75'000},
      {800.0, 112'500},
      {1600.0, 225'000},
  });
}

inline Mhz band_width_mhz(const Band& band) {
  Mhz width = 0;
  for (const Segment& seg : band.segments()) {
    width += seg.upper_mhz - seg.lower_mhz;
  }
  return width;
}

// Number of channels of the given occupancy that fit in the band. Each
// segment is packed independently: a channel cannot straddle a gap.
inline std::int64_t max_channels(const Band& band, Mhz occupancy_mhz) {
  if (occupancy_mhz <= 0) {
    throw ValidationError("occupancy_mhz must be > 0");
  }
  std::int64_t count = 0;
  for (const Segment& seg : band.segments()) {
    count += (seg.upper_mhz - seg.lower_mhz) / occupancy_mhz;
  }
  return count;
}

inline Mhz occupancy_for_capacity(const CapacityOccupancyTable& table, double capacity_gbps) {
  for (const CapacityOccupancyTable::Entry& e : table.entries()) {
    if (e.capacity_gbps == capacity_gbps) return e.occupancy_mhz;
  }
  throw UnknownCapacityError("no table entry for capacity " + std::to_string(capacity_gbps) +
                             " Gbps (lookups are exact-match)");
}

}  // namespace qkdplan
