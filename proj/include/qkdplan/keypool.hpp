#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkdplan/errors.hpp"
#include "qkdplan/rskr.hpp"

namespace qkdplan {

inline constexpr std::int64_t kDefaultMaxEvents = 10'000'000;

// Post-withdrawal pool levels this far below zero are treated as rounding
// noise rather than underflow. Integral refresh rates never need the slack;
// rates that are inexact in binary do.
inline constexpr double kUnderflowTolBits = 1e-6;

// One key-pool run: keys are produced continuously at skr_bps and withdrawn
// whole (key_length_bits at a time) whenever a channel rekeys. Channel k
// rekeys at t = n / R_k for n = 1, 2, ... up to the horizon; a zero refresh
// rate never fires.
struct SimConfig {
  Link link;
  double skr_bps = 0.0;
  double horizon_s = 0.0;
  double initial_pool_bits = 0.0;
  std::int64_t max_events = kDefaultMaxEvents;
};

struct SimResult {
  // Minimum post-withdrawal pool over all events; initial_pool_bits when the
  // run has no events.
  double min_pool_bits = 0.0;
  // Time of the first withdrawal that left the pool below -kUnderflowTolBits.
  std::optional<double> underflow_time_s;
  double final_pool_bits = 0.0;
  std::int64_t events_processed = 0;

  bool underflow() const { return underflow_time_s.has_value(); }

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

// One withdrawal as seen by a trace consumer. channel_id points into the
// SimConfig's link and is only valid inside the callback.
struct TraceRow {
  double time_s = 0.0;
  std::string_view channel_id;
  double pool_before_bits = 0.0;
  double pool_after_bits = 0.0;
};

using TraceSink = std::function<void(const TraceRow&)>;

namespace detail {

// Largest n with n / rate <= horizon. Computed by direct division, not by
// accumulating periods, so the boundary matches the event times exactly.
inline std::int64_t rekey_count(double rate_hz, double horizon_s, std::int64_t cap) {
  if (rate_hz <= 0.0) return 0;
  const double approx = std::floor(horizon_s * rate_hz);
  if (!(approx <= static_cast<double>(cap))) return cap + 1;  // beyond any allowed budget
  auto n = static_cast<std::int64_t>(approx);
  while (n > 0 && static_cast<double>(n) / rate_hz > horizon_s) --n;
  while (static_cast<double>(n + 1) / rate_hz <= horizon_s) ++n;
  return n;
}

}  // namespace detail

// Deterministic sweep over all rekey events in ascending time order, ties
// broken by ascending channel id (then by channel position for duplicate
// ids). Production is credited inclusively at event time: the pool seen by a
// withdrawal at time t already contains skr_bps * t. Underflow is recorded at
// the first event whose post-withdrawal pool drops below -kUnderflowTolBits;
// the run always continues to the horizon.
inline SimResult simulate(const SimConfig& config, const TraceSink& on_event = {}) {
  if (!(config.horizon_s > 0.0) || !std::isfinite(config.horizon_s)) {
    throw ValidationError("horizon_s must be finite and > 0");
  }
  if (!(config.skr_bps >= 0.0) || !std::isfinite(config.skr_bps)) {
    throw ValidationError("skr_bps must be finite and >= 0");
  }
  if (!(config.initial_pool_bits >= 0.0) || !std::isfinite(config.initial_pool_bits)) {
    throw ValidationError("initial_pool_bits must be finite and >= 0");
  }
  if (config.max_events < 0 || config.max_events > (std::int64_t{1} << 53)) {
    throw ValidationError("max_events must be in [0, 2^53]");
  }

  const std::vector<ChannelSpec>& channels = config.link.channels();
  const std::size_t n_channels = channels.size();

  std::vector<std::int64_t> rekeys(n_channels, 0);
  std::int64_t total_events = 0;
  for (std::size_t i = 0; i < n_channels; ++i) {
    rekeys[i] = detail::rekey_count(channels[i].policy().refresh_rate_hz(), config.horizon_s,
                                    config.max_events);
    total_events += rekeys[i];
    if (rekeys[i] > config.max_events || total_events > config.max_events) {
      throw EventExplosionError("simulation would need more than " +
                                std::to_string(config.max_events) +
                                " events; shorten the horizon or raise max_events");
    }
  }

  // Tie rank: position in the (id, original index) ordering.
  std::vector<std::uint32_t> rank(n_channels, 0);
  {
    std::vector<std::uint32_t> order(n_channels);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return channels[a].id() < channels[b].id();
    });
    for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  }

  struct PendingEvent {
    double time_s;
    std::uint32_t rank;
    std::uint32_t channel;
    std::int64_t index;  // 1-based rekey index within the channel
  };
  auto later = [](const PendingEvent& a, const PendingEvent& b) {
    if (a.time_s != b.time_s) return a.time_s > b.time_s;
    return a.rank > b.rank;
  };
  std::priority_queue<PendingEvent, std::vector<PendingEvent>, decltype(later)> pending(later);
  for (std::size_t i = 0; i < n_channels; ++i) {
    if (rekeys[i] >= 1) {
      const double rate = channels[i].policy().refresh_rate_hz();
      pending.push({1.0 / rate, rank[i], static_cast<std::uint32_t>(i), 1});
    }
  }

  SimResult result;
  result.min_pool_bits = config.initial_pool_bits;
  double consumed_bits = 0.0;
  bool any_event = false;
  while (!pending.empty()) {
    const PendingEvent ev = pending.top();
    pending.pop();
    const ChannelSpec& ch = channels[ev.channel];
    const auto key_bits = static_cast<double>(ch.policy().key_length_bits());
    const double pool_before = config.initial_pool_bits + config.skr_bps * ev.time_s - consumed_bits;
    const double pool_after = pool_before - key_bits;
    consumed_bits += key_bits;
    if (!any_event || pool_after < result.min_pool_bits) {
      result.min_pool_bits = pool_after;
    }
    any_event = true;
    if (!result.underflow_time_s && pool_after < -kUnderflowTolBits) {
      result.underflow_time_s = ev.time_s;
    }
    ++result.events_processed;
    if (on_event) {
      on_event({ev.time_s, ch.id(), pool_before, pool_after});
    }
    if (ev.index < rekeys[ev.channel]) {
      const double rate = ch.policy().refresh_rate_hz();
      pending.push({static_cast<double>(ev.index + 1) / rate, ev.rank, ev.channel, ev.index + 1});
    }
  }
  result.final_pool_bits =
      config.initial_pool_bits + config.skr_bps * config.horizon_s - consumed_bits;
  return result;
}

struct ThresholdCheck {
  double rskr_bps = 0.0;
  bool verified = false;
};

// Runs the simulator at the link's computed key demand and one percent below
// it, both from an empty pool. verified means the boundary behaved as a
// threshold: no underflow at the demand, underflow just under it.
inline ThresholdCheck threshold_check(const Link& link, double horizon_s) {
  if (!(horizon_s > 0.0) || !std::isfinite(horizon_s)) {
    throw ValidationError("horizon_s must be finite and > 0");
  }
  double max_period_s = 0.0;
  bool any_active = false;
  for (const ChannelSpec& ch : link.channels()) {
    const double rate = ch.policy().refresh_rate_hz();
    if (rate > 0.0) {
      any_active = true;
      max_period_s = std::max(max_period_s, 1.0 / rate);
    }
  }
  if (!any_active) {
    throw ValidationError("threshold_check requires at least one channel with refresh_rate_hz > 0");
  }

  constexpr double kDelta = 0.01;
  // Starting from an empty pool, the deficit run must at least reach every
  // channel's first rekey before underflow can be expected.
  if (!(horizon_s > max_period_s)) {
    throw InconclusiveHorizonError("horizon " + std::to_string(horizon_s) +
                                   " s does not exceed the slowest rekey period of " +
                                   std::to_string(max_period_s) + " s");
  }

  const double rskr = rskr_per_link(link);
  const SimResult at_demand = simulate({link, rskr, horizon_s, 0.0});
  const SimResult below_demand = simulate({link, rskr * (1.0 - kDelta), horizon_s, 0.0});
  return {rskr, !at_demand.underflow() && below_demand.underflow()};
}

}  // namespace qkdplan
