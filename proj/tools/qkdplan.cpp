// qkdplan: key-rate planning for quantum-secured DWDM links.
//
// Exit codes: 0 success, 1 usage error, 2 config parse/validation error,
// 3 infeasible or inconclusive, 4 key-pool underflow (simulate only).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qkdplan/qkdplan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUnderflow = 4;

qkdplan::CapacityOccupancyTable table_or_default(const std::string& table_path) {
  return table_path.empty() ? qkdplan::default_table() : qkdplan::load_table_file(table_path);
}

qkdplan::Link link_from_config_file(const std::string& config_path) {
  const auto doc = qkdplan::parse_config(qkdplan::read_file(config_path));
  return qkdplan::resolve_link(doc);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qkdplan::ParseError("cannot write file: " + path);
  return out;
}

void csv_escape(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

struct ChannelArgs {
  std::int64_t key_bits = 0;
  double refresh_hz = 0.0;
};

struct LinkArgs {
  std::string config_path;
};

struct CurveArgs {
  std::string band;
  std::int64_t key_bits = 0;
  double refresh_hz = 0.0;
  std::string table_path;
  std::string out_path;
};

struct SimulateArgs {
  std::string config_path;
  double skr_bps = 0.0;
  double horizon_s = 0.0;
  std::string trace_path;
  double initial_pool_bits = 0.0;
  std::int64_t max_events = qkdplan::kDefaultMaxEvents;
};

struct PlanArgs {
  double demand_gbps = 0.0;
  std::string band;
  std::int64_t key_bits = 0;
  double refresh_hz = 0.0;
  std::string table_path;
};

int run_rskr_channel(const ChannelArgs& args) {
  const qkdplan::KeyPolicy policy(args.key_bits, args.refresh_hz);
  std::cout << qkdplan::format_number(qkdplan::rskr_per_channel(policy)) << "\n";
  return kExitOk;
}

int run_rskr_link(const LinkArgs& args) {
  const qkdplan::Link link = link_from_config_file(args.config_path);
  for (const auto& ch : link.channels()) {
    std::cout << "channel " << ch.id() << " "
              << qkdplan::format_number(qkdplan::rskr_per_channel(ch.policy())) << "\n";
  }
  std::cout << "link " << qkdplan::format_number(qkdplan::rskr_per_link(link)) << "\n";
  return kExitOk;
}

int run_curve(const CurveArgs& args) {
  const qkdplan::Band band = qkdplan::parse_band_arg(args.band);
  const qkdplan::KeyPolicy policy(args.key_bits, args.refresh_hz);
  const auto points = qkdplan::generate_curve(policy, band, table_or_default(args.table_path));
  if (args.out_path.empty()) {
    qkdplan::write_curve_csv(std::cout, points);
  } else {
    auto out = open_output(args.out_path);
    qkdplan::write_curve_csv(out, points);
  }
  return kExitOk;
}

int run_simulate(const SimulateArgs& args) {
  const qkdplan::SimConfig config{link_from_config_file(args.config_path), args.skr_bps,
                                  args.horizon_s, args.initial_pool_bits, args.max_events};
  qkdplan::SimResult result;
  if (args.trace_path.empty()) {
    result = qkdplan::simulate(config);
  } else {
    auto trace = open_output(args.trace_path);
    trace << "time_s,channel_id,pool_before,pool_after\n";
    result = qkdplan::simulate(config, [&](const qkdplan::TraceRow& row) {
      trace << qkdplan::format_number(row.time_s) << ',';
      csv_escape(trace, row.channel_id);
      trace << ',' << qkdplan::format_number(row.pool_before_bits) << ','
            << qkdplan::format_number(row.pool_after_bits) << '\n';
    });
  }
  std::cout << "min_pool_bits " << qkdplan::format_number(result.min_pool_bits) << "\n";
  std::cout << "underflow_time_s "
            << (result.underflow() ? qkdplan::format_number(*result.underflow_time_s)
                                   : std::string("none"))
            << "\n";
  std::cout << "final_pool_bits " << qkdplan::format_number(result.final_pool_bits) << "\n";
  std::cout << "events_processed " << result.events_processed << "\n";
  return result.underflow() ? kExitUnderflow : kExitOk;
}

int run_plan(const PlanArgs& args) {
  const qkdplan::Demand demand(args.demand_gbps, qkdplan::parse_band_arg(args.band),
                               qkdplan::KeyPolicy(args.key_bits, args.refresh_hz),
                               table_or_default(args.table_path));
  const qkdplan::Plan plan = qkdplan::plan_min_rskr(demand);
  std::cout << qkdplan::plan_to_json(plan).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-rate planning for quantum-secured DWDM links"};
  app.require_subcommand(1);

  auto* rskr = app.add_subcommand("rskr", "Required secure key rate of a channel or link");
  rskr->require_subcommand(1);

  ChannelArgs channel_args;
  auto* rskr_channel = rskr->add_subcommand("channel", "Key rate one channel demands, bits/s");
  rskr_channel->add_option("--key-bits", channel_args.key_bits, "Key length in bits")->required();
  rskr_channel->add_option("--refresh-hz", channel_args.refresh_hz, "Key refresh rate per second")
      ->required();

  LinkArgs link_args;
  auto* rskr_link = rskr->add_subcommand("link", "Key rate a whole link demands, with breakdown");
  rskr_link->add_option("--config", link_args.config_path, "Link config JSON file")->required();

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "Link key demand vs channel capacity, as CSV");
  curve->add_option("--band", curve_args.band, "Band name (C, C+L) or MHz segments lo-hi[,lo-hi]")
      ->required();
  curve->add_option("--key-bits", curve_args.key_bits, "Key length in bits")->required();
  curve->add_option("--refresh-hz", curve_args.refresh_hz, "Key refresh rate per second")
      ->required();
  curve->add_option("--table", curve_args.table_path, "Capacity/occupancy table JSON file");
  curve->add_option("--out", curve_args.out_path, "Output CSV path (stdout when omitted)");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Key-pool simulation of a link at a given SKR");
  simulate->add_option("--config", simulate_args.config_path, "Link config JSON file")->required();
  simulate->add_option("--skr", simulate_args.skr_bps, "Key production rate, bits/s")->required();
  simulate->add_option("--horizon", simulate_args.horizon_s, "Simulated time span, seconds")
      ->required();
  simulate->add_option("--trace", simulate_args.trace_path, "Write per-event CSV trace here");
  simulate->add_option("--initial-pool", simulate_args.initial_pool_bits,
                       "Key bits buffered at t=0");
  simulate->add_option("--max-events", simulate_args.max_events, "Event count cap");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Channel mix minimizing link key demand, as JSON");
  plan->add_option("--demand", plan_args.demand_gbps, "Throughput to carry, Gbps")->required();
  plan->add_option("--band", plan_args.band, "Band name (C, C+L) or MHz segments lo-hi[,lo-hi]")
      ->required();
  plan->add_option("--key-bits", plan_args.key_bits, "Key length in bits")->required();
  plan->add_option("--refresh-hz", plan_args.refresh_hz, "Key refresh rate per second")->required();
  plan->add_option("--table", plan_args.table_path, "Capacity/occupancy table JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rskr_channel->parsed()) return run_rskr_channel(channel_args);
    if (rskr_link->parsed()) return run_rskr_link(link_args);
    if (curve->parsed()) return run_curve(curve_args);
    if (simulate->parsed()) return run_simulate(simulate_args);
    if (plan->parsed()) return run_plan(plan_args);
  } catch (const qkdplan::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const qkdplan::InconclusiveHorizonError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const qkdplan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
