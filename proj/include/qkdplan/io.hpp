#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkdplan/errors.hpp"
#include "qkdplan/planner.hpp"
#include "qkdplan/rskr.hpp"
#include "qkdplan/spectrum.hpp"

namespace qkdplan {

// Shortest decimal form that round-trips the value; integral values print
// without a decimal point ("256", not "256.0"). Locale-independent.
inline std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

// ---------------------------------------------------------------------------
// Link config documents
//
// All units are spelled out in the field names: occupancy_mhz, capacity_gbps,
// key_length_bits, refresh_rate_hz. Unknown fields are rejected.
// ---------------------------------------------------------------------------

struct PolicyDoc {
  std::int64_t key_length_bits = 0;
  double refresh_rate_hz = 0.0;

  friend bool operator==(const PolicyDoc&, const PolicyDoc&) = default;
};

struct ChannelDoc {
  std::string id;
  double capacity_gbps = 0.0;
  std::optional<Mhz> occupancy_mhz;     // looked up from the table when absent
  std::optional<PolicyDoc> policy;      // default_policy when absent

  friend bool operator==(const ChannelDoc&, const ChannelDoc&) = default;
};

struct LinkConfigDocument {
  std::variant<std::string, std::vector<Segment>> band;  // named band or segment list
  GridMode grid = GridMode::fixed;
  PolicyDoc default_policy;
  std::vector<ChannelDoc> channels;
  std::optional<std::vector<CapacityOccupancyTable::Entry>> table;

  friend bool operator==(const LinkConfigDocument&, const LinkConfigDocument&) = default;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& message) {
  throw ValidationError(path, message);
}

inline std::string join_path(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline void require_object(const json& value, const std::string& path) {
  if (!value.is_object()) fail(path, "expected an object");
}

inline void reject_unknown_fields(const json& object, const std::string& path,
                                  std::initializer_list<std::string_view> allowed) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      fail(join_path(path, it.key()), "unknown field");
    }
  }
}

inline const json& require_field(const json& object, const std::string& path,
                                 std::string_view key) {
  const auto it = object.find(key);
  if (it == object.end()) fail(join_path(path, key), "missing required field");
  return *it;
}

inline std::int64_t as_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) fail(path, "expected an integer");
  return value.get<std::int64_t>();
}

inline double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  return value.get<double>();
}

inline std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  return value.get<std::string>();
}

inline const json& as_array(const json& value, const std::string& path) {
  if (!value.is_array()) fail(path, "expected an array");
  return value;
}

inline PolicyDoc policy_from_json(const json& value, const std::string& path) {
  require_object(value, path);
  reject_unknown_fields(value, path, {"key_length_bits", "refresh_rate_hz"});
  PolicyDoc policy;
  policy.key_length_bits =
      as_integer(require_field(value, path, "key_length_bits"), join_path(path, "key_length_bits"));
  policy.refresh_rate_hz =
      as_number(require_field(value, path, "refresh_rate_hz"), join_path(path, "refresh_rate_hz"));
  try {
    KeyPolicy validated(policy.key_length_bits, policy.refresh_rate_hz);
    (void)validated;
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return policy;
}

inline std::vector<Segment> segments_from_json(const json& value, const std::string& path) {
  const json& array = as_array(value, path);
  std::vector<Segment> segments;
  segments.reserve(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    const json& item = array[i];
    require_object(item, item_path);
    reject_unknown_fields(item, item_path, {"lower_mhz", "upper_mhz"});
    Segment seg;
    seg.lower_mhz =
        as_integer(require_field(item, item_path, "lower_mhz"), join_path(item_path, "lower_mhz"));
    seg.upper_mhz =
        as_integer(require_field(item, item_path, "upper_mhz"), join_path(item_path, "upper_mhz"));
    segments.push_back(seg);
  }
  try {
    Band validated(segments);
    (void)validated;
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return segments;
}

inline std::vector<CapacityOccupancyTable::Entry> table_from_json(const json& value,
                                                                  const std::string& path) {
  const json& array = as_array(value, path);
  std::vector<CapacityOccupancyTable::Entry> entries;
  entries.reserve(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    const json& item = array[i];
    require_object(item, item_path);
    reject_unknown_fields(item, item_path, {"capacity_gbps", "occupancy_mhz"});
    CapacityOccupancyTable::Entry entry;
    entry.capacity_gbps = as_number(require_field(item, item_path, "capacity_gbps"),
                                    join_path(item_path, "capacity_gbps"));
    entry.occupancy_mhz = as_integer(require_field(item, item_path, "occupancy_mhz"),
                                     join_path(item_path, "occupancy_mhz"));
    entries.push_back(entry);
  }
  try {
    CapacityOccupancyTable validated(entries);
    (void)validated;
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return entries;
}

inline ChannelDoc channel_from_json(const json& value, const std::string& path) {
  require_object(value, path);
  reject_unknown_fields(value, path, {"id", "capacity_gbps", "occupancy_mhz", "policy"});
  ChannelDoc channel;
  channel.id = as_string(require_field(value, path, "id"), join_path(path, "id"));
  channel.capacity_gbps =
      as_number(require_field(value, path, "capacity_gbps"), join_path(path, "capacity_gbps"));
  if (!(channel.capacity_gbps > 0.0) || !std::isfinite(channel.capacity_gbps)) {
    fail(join_path(path, "capacity_gbps"), "capacity_gbps must be finite and > 0");
  }
  if (const auto it = value.find("occupancy_mhz"); it != value.end()) {
    const Mhz occupancy = as_integer(*it, join_path(path, "occupancy_mhz"));
    if (occupancy <= 0) fail(join_path(path, "occupancy_mhz"), "occupancy_mhz must be > 0");
    channel.occupancy_mhz = occupancy;
  }
  if (const auto it = value.find("policy"); it != value.end()) {
    channel.policy = policy_from_json(*it, join_path(path, "policy"));
  }
  return channel;
}

}  // namespace detail

inline LinkConfigDocument config_from_json(const nlohmann::json& root) {
  using detail::join_path;
  detail::require_object(root, "");
  detail::reject_unknown_fields(root, "",
                                {"band", "grid", "default_policy", "channels", "table"});

  LinkConfigDocument doc;

  const nlohmann::json& band = detail::require_field(root, "", "band");
  if (band.is_string()) {
    const std::string name = band.get<std::string>();
    if (!is_band_name(name)) {
      detail::fail("band", "unknown band name \"" + name + "\" (expected \"C\" or \"C+L\")");
    }
    doc.band = name;
  } else {
    doc.band = detail::segments_from_json(band, "band");
  }

  const std::string grid =
      detail::as_string(detail::require_field(root, "", "grid"), "grid");
  if (grid == "fixed") {
    doc.grid = GridMode::fixed;
  } else if (grid == "flex") {
    doc.grid = GridMode::flex;
  } else {
    detail::fail("grid", "expected \"fixed\" or \"flex\"");
  }

  doc.default_policy =
      detail::policy_from_json(detail::require_field(root, "", "default_policy"), "default_policy");

  const nlohmann::json& channels =
      detail::as_array(detail::require_field(root, "", "channels"), "channels");
  doc.channels.reserve(channels.size());
  for (std::size_t i = 0; i < channels.size(); ++i) {
    doc.channels.push_back(
        detail::channel_from_json(channels[i], "channels[" + std::to_string(i) + "]"));
  }

  if (const auto it = root.find("table"); it != root.end()) {
    doc.table = detail::table_from_json(*it, "table");
  }
  return doc;
}

// Parses and validates a JSON link config. Malformed JSON raises ParseError;
// a well-formed document that breaks an invariant raises ValidationError with
// the offending field's path.
inline LinkConfigDocument parse_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  return config_from_json(root);
}

inline nlohmann::json config_to_json(const LinkConfigDocument& doc) {
  nlohmann::json root;
  if (const auto* name = std::get_if<std::string>(&doc.band)) {
    root["band"] = *name;
  } else {
    nlohmann::json segments = nlohmann::json::array();
    for (const Segment& seg : std::get<std::vector<Segment>>(doc.band)) {
      segments.push_back({{"lower_mhz", seg.lower_mhz}, {"upper_mhz", seg.upper_mhz}});
    }
    root["band"] = std::move(segments);
  }
  root["grid"] = doc.grid == GridMode::fixed ? "fixed" : "flex";
  root["default_policy"] = {{"key_length_bits", doc.default_policy.key_length_bits},
                            {"refresh_rate_hz", doc.default_policy.refresh_rate_hz}};
  nlohmann::json channels = nlohmann::json::array();
  for (const ChannelDoc& ch : doc.channels) {
    nlohmann::json channel = {{"id", ch.id}, {"capacity_gbps", ch.capacity_gbps}};
    if (ch.occupancy_mhz) channel["occupancy_mhz"] = *ch.occupancy_mhz;
    if (ch.policy) {
      channel["policy"] = {{"key_length_bits", ch.policy->key_length_bits},
                           {"refresh_rate_hz", ch.policy->refresh_rate_hz}};
    }
    channels.push_back(std::move(channel));
  }
  root["channels"] = std::move(channels);
  if (doc.table) {
    nlohmann::json table = nlohmann::json::array();
    for (const CapacityOccupancyTable::Entry& e : *doc.table) {
      table.push_back({{"capacity_gbps", e.capacity_gbps}, {"occupancy_mhz", e.occupancy_mhz}});
    }
    root["table"] = std::move(table);
  }
  return root;
}

inline std::string serialize_config(const LinkConfigDocument& doc) {
  return config_to_json(doc).dump(2) + "\n";
}

// Applies defaults and table lookups, then builds the validated Link.
inline Link resolve_link(const LinkConfigDocument& doc, const CapacityOccupancyTable& fallback_table) {
  Band band = [&] {
    try {
      if (const auto* name = std::get_if<std::string>(&doc.band)) return band_from_name(*name);
      return Band(std::get<std::vector<Segment>>(doc.band));
    } catch (const ValidationError& e) {
      detail::fail("band", e.what());
    }
  }();

  const CapacityOccupancyTable table = [&] {
    try {
      return doc.table ? CapacityOccupancyTable(*doc.table) : fallback_table;
    } catch (const ValidationError& e) {
      detail::fail("table", e.what());
    }
  }();

  std::vector<ChannelSpec> channels;
  channels.reserve(doc.channels.size());
  for (std::size_t i = 0; i < doc.channels.size(); ++i) {
    const ChannelDoc& ch = doc.channels[i];
    const std::string path = "channels[" + std::to_string(i) + "]";
    Mhz occupancy = 0;
    if (ch.occupancy_mhz) {
      occupancy = *ch.occupancy_mhz;
    } else {
      try {
        occupancy = occupancy_for_capacity(table, ch.capacity_gbps);
      } catch (const UnknownCapacityError& e) {
        detail::fail(path + ".capacity_gbps", e.what());
      }
    }
    const PolicyDoc& policy = ch.policy ? *ch.policy : doc.default_policy;
    channels.emplace_back(ch.id, ch.capacity_gbps, occupancy,
                          KeyPolicy(policy.key_length_bits, policy.refresh_rate_hz));
  }

  try {
    return Link(std::move(band), std::move(channels), doc.grid);
  } catch (const ValidationError& e) {
    detail::fail("channels", e.what());
  }
}

// ---------------------------------------------------------------------------
// Files, environment, reports
// ---------------------------------------------------------------------------

// Overrides the built-in capacity table when set to a table file path.
inline constexpr const char* kDefaultTableEnvVar = "QKDPLAN_TABLE";

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Table files are a JSON array of {"capacity_gbps": ..., "occupancy_mhz": ...}.
inline CapacityOccupancyTable load_table_file(const std::string& path) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(e.what()) + " in " + path);
  }
  return CapacityOccupancyTable(detail::table_from_json(root, "table"));
}

inline CapacityOccupancyTable default_table() {
  if (const char* path = std::getenv(kDefaultTableEnvVar); path != nullptr && *path != '\0') {
    return load_table_file(path);
  }
  return default_capacity_table();
}

inline Link resolve_link(const LinkConfigDocument& doc) {
  return resolve_link(doc, default_table());
}

inline constexpr std::string_view kCurveCsvHeader = "capacity_gbps,occupancy_mhz,n_channels,rskr_bps";

inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << kCurveCsvHeader << '\n';
  for (const CurvePoint& p : points) {
    out << format_number(p.capacity_gbps) << ',' << p.occupancy_mhz << ',' << p.n_channels << ','
        << format_number(p.rskr_bps) << '\n';
  }
}

inline std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream out;
  write_curve_csv(out, points);
  return out.str();
}

inline nlohmann::json plan_to_json(const Plan& plan) {
  nlohmann::json counts = nlohmann::json::array();
  for (const Plan::Item& item : plan.counts) {
    counts.push_back({{"capacity_gbps", item.capacity_gbps}, {"count", item.count}});
  }
  return {{"counts", std::move(counts)},
          {"total_capacity_gbps", plan.total_capacity_gbps},
          {"total_occupancy_mhz", plan.total_occupancy_mhz},
          {"rskr_bps", plan.rskr_bps}};
}

// CLI band arguments: a named band ("C", "C+L") or custom segments given as
// "lower-upper" MHz pairs joined by commas, e.g. "184490000-191300000,191350000-196100000".
inline Band parse_band_arg(const std::string& text) {
  if (is_band_name(text)) return band_from_name(text);
  std::vector<Segment> segments;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string_view part(text.data() + start, end - start);
    const std::size_t dash = part.find('-');
    Segment seg;
    auto parse_mhz = [&](std::string_view digits, Mhz& out) {
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
      return ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty();
    };
    if (dash == std::string_view::npos || !parse_mhz(part.substr(0, dash), seg.lower_mhz) ||
        !parse_mhz(part.substr(dash + 1), seg.upper_mhz)) {
      throw ValidationError("band", "expected a band name or \"lower-upper\" MHz segments, got \"" +
                                        text + "\"");
    }
    segments.push_back(seg);
    start = end + 1;
  }
  try {
    return Band(segments);
  } catch (const ValidationError& e) {
    throw ValidationError("band", e.what());
  }
}

}  // namespace qkdplan
