#ifndef AVPOOL_TOOLS_CLI_HPP
#define AVPOOL_TOOLS_CLI_HPP

// Command-line front end: simulate, sweep, export-milp, validate,
// oracle-compare. Kept in a header so tests can drive it in-process.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "avpool/avpool.hpp"

namespace avpool::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kRuntime = 2, kInfeasible = 3 };

struct CommonOptions {
  std::string config_path;
  std::int32_t layout_k = 9;
  std::string layout_file;
  std::uint64_t seed = 0;
  std::int64_t days = 100;
  std::string out_dir = ".";
};

namespace detail {

inline void add_common(CLI::App& app, CommonOptions& o) {
  app.add_option("--config", o.config_path, "Scenario config JSON (defaults: real-case parameters)")
      ->check(CLI::ExistingFile);
  auto* k = app.add_option("--layout-k", o.layout_k, "Canonical layout facility count")->capture_default_str();
  app.add_option("--layout-file", o.layout_file, "Layout JSON used instead of --layout-k")
      ->check(CLI::ExistingFile)
      ->excludes(k);
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--days", o.days, "Number of simulated days")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", o.out_dir, "Output directory")->capture_default_str();
}

inline ScenarioConfig load_config(const CommonOptions& o) {
  return o.config_path.empty() ? real_case_config() : config_from_json(read_json_file(o.config_path));
}

inline FacilityLayout load_layout(const CommonOptions& o, const ScenarioConfig& config) {
  if (!o.layout_file.empty()) return layout_from_json(read_json_file(o.layout_file), config);
  return canonical_layout(o.layout_k, config);
}

inline std::filesystem::path out_path(const CommonOptions& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  return std::filesystem::path(o.out_dir) / name;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw InputError("bad list element '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

inline std::vector<double> default_sweep_values(SweepDimension d) {
  switch (d) {
    case SweepDimension::Layout: return {kCanonicalLayoutCounts.begin(), kCanonicalLayoutCounts.end()};
    case SweepDimension::Demand: return {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    case SweepDimension::Patience: return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  }
  return {};
}

}  // namespace detail

/// Parses and runs one invocation. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Autonomous-vehicle pooling simulator and allocation-model tools", "avpool"};
  app.require_subcommand(1, 1);

  CommonOptions sim_opts;
  std::uint64_t events_day = 0;
  std::string demand_file;
  auto* simulate = app.add_subcommand("simulate", "Simulate days; write events CSV, ledger JSON, daily ledgers");
  detail::add_common(*simulate, sim_opts);
  simulate->add_option("--events-day", events_day, "Day whose event log and demand are exported")
      ->capture_default_str();
  simulate->add_option("--demand-file", demand_file, "Replay this demand CSV as a single day")
      ->check(CLI::ExistingFile);

  CommonOptions sweep_opts;
  std::string dim_text = "layout", values_text, seeds_text = "0,1,2,3,4", layouts_text;
  auto* sweep = app.add_subcommand("sweep", "Run a layout/demand/patience sweep; write the sweep CSV");
  detail::add_common(*sweep, sweep_opts);
  sweep->add_option("--dim", dim_text, "layout | demand | patience")->capture_default_str();
  sweep->add_option("--values", values_text, "Comma-separated swept values (default per dimension)");
  sweep->add_option("--seeds", seeds_text, "Comma-separated master seeds")->capture_default_str();
  sweep->add_option("--layouts", layouts_text, "Comma-separated canonical facility counts");

  CommonOptions export_opts;
  std::uint64_t export_day = 0;
  bool extend_horizon = false;
  auto* export_milp = app.add_subcommand("export-milp", "Write the model of one realized day as LP + JSON");
  detail::add_common(*export_milp, export_opts);
  export_milp->add_option("--day", export_day, "Day index under --seed")->capture_default_str();
  export_milp->add_flag("--extend-horizon", extend_horizon, "Extend the horizon so late trips can finish");
  export_milp->add_option("--demand-file", demand_file, "Use this demand CSV instead of generating")
      ->check(CLI::ExistingFile);

  std::string model_path, assignment_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check an assignment against an exported model");
  validate_cmd->add_option("--model", model_path, "Model JSON sidecar written by export-milp")
      ->required()
      ->check(CLI::ExistingFile);
  validate_cmd->add_option("--assignment", assignment_path, "Assignment JSON (name -> value)")
      ->required()
      ->check(CLI::ExistingFile);

  std::size_t instances = 100;
  std::uint64_t oracle_seed = 0;
  auto* oracle = app.add_subcommand("oracle-compare", "Heuristic vs exhaustive optimum on random tiny instances");
  oracle->add_option("--instances", instances, "Number of random instances")->capture_default_str();
  oracle->add_option("--seed", oracle_seed, "Instance generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*simulate) {
      const auto config = detail::load_config(sim_opts);
      const auto layout = detail::load_layout(sim_opts, config);
      std::vector<std::vector<CustomerRequest>> days;
      if (!demand_file.empty()) {
        std::ifstream in(demand_file);
        days.push_back(read_demand_csv(in));
        events_day = 0;
      } else {
        for (std::int64_t d = 0; d < sim_opts.days; ++d)
          days.push_back(generate_day_demand(config, sim_opts.seed, static_cast<std::uint64_t>(d)));
      }
      if (events_day >= days.size()) throw InputError("--events-day outside the simulated days");
      CostLedger total;
      auto daily = detail::open_out(detail::out_path(sim_opts, "daily_ledgers.csv"));
      daily << "day,lost_sale_cost,travel_cost,facility_cost,total\n";
      for (std::size_t d = 0; d < days.size(); ++d) {
        const bool keep = d == events_day;
        const auto day = run_day(config, layout, days[d], keep);
        if (keep) {
          auto ev = detail::open_out(detail::out_path(sim_opts, "events.csv"));
          write_event_csv(ev, day.log);
          auto dm = detail::open_out(detail::out_path(sim_opts, "demand.csv"));
          write_demand_csv(dm, days[d]);
        }
        daily << d << ',' << day.ledger.lost_sale_cost << ',' << day.ledger.travel_cost << ','
              << day.ledger.facility_cost << ',' << day.ledger.total << '\n';
        total += day.ledger;
      }
      auto lj = detail::open_out(detail::out_path(sim_opts, "ledger.json"));
      write_ledger_json(lj, total);
      out << "days: " << days.size() << ", facilities: " << layout.size() << '\n';
      write_ledger_json(out, total);
      return kSuccess;
    }

    if (*sweep) {
      SweepSpec spec;
      spec.base = detail::load_config(sweep_opts);
      const auto dim = parse_sweep_dimension(dim_text);
      if (!dim) throw InputError("--dim must be layout, demand or patience");
      spec.dimension = *dim;
      spec.values = values_text.empty() ? detail::default_sweep_values(*dim) : detail::parse_list<double>(values_text);
      spec.seeds = detail::parse_list<std::uint64_t>(seeds_text);
      if (!layouts_text.empty()) spec.layouts = detail::parse_list<std::int32_t>(layouts_text);
      if (!sweep_opts.layout_file.empty())
        spec.layout_override = layout_from_json(read_json_file(sweep_opts.layout_file), spec.base);
      spec.num_days = sweep_opts.days;
      spec.output_path =
          detail::out_path(sweep_opts, std::string("sweep_") + to_string(spec.dimension) + ".csv").string();
      const auto rows = run_sweep(spec);
      out << "rows: " << rows.size() << ", written to " << spec.output_path << '\n';
      return kSuccess;
    }

    if (*export_milp) {
      const auto config = detail::load_config(export_opts);
      const auto layout = detail::load_layout(export_opts, config);
      std::vector<CustomerRequest> demand;
      if (!demand_file.empty()) {
        std::ifstream in(demand_file);
        demand = read_demand_csv(in);
      } else {
        demand = generate_day_demand(config, export_opts.seed, export_day);
      }
      const auto day = run_day(config, layout, demand);
      auto encoded = milp::encode_simulation(config, layout, demand, day);
      const TimeUnit horizon = extend_horizon ? encoded.instance.horizon : config.time_units_per_day;
      const bool same_model = horizon == encoded.instance.horizon;
      const auto inst = same_model ? encoded.instance : milp::make_instance(config, layout, demand, horizon);
      const auto model = same_model ? encoded.model : milp::build_model(inst);

      auto lp = detail::open_out(detail::out_path(export_opts, "model.lp"));
      milp::write_lp(lp, model);
      auto side = detail::open_out(detail::out_path(export_opts, "model.json"));
      side << milp::sidecar_json(inst, model).dump() << '\n';
      out << "variables: " << model.variables.size() << ", rows: " << model.constraints.size()
          << ", horizon: " << horizon << '\n';
      if (same_model) {
        auto as = detail::open_out(detail::out_path(export_opts, "assignment.json"));
        as << milp::to_json(encoded.assignment).dump(1) << '\n';
        out << "heuristic assignment written (objective " << day.ledger.total << ")\n";
      } else {
        out << "heuristic trips finish after the day; rerun with --extend-horizon to export its assignment\n";
      }
      return kSuccess;
    }

    if (*validate_cmd) {
      const auto [inst, model] = milp::model_from_sidecar(read_json_file(model_path));
      const auto assignment = milp::assignment_from_json(read_json_file(assignment_path));
      const auto report = milp::validate_solution(model, assignment);
      milp::print_report(out, report);
      return report.feasible ? kSuccess : kInfeasible;
    }

    if (*oracle) {
      const auto s = compare_with_oracle(oracle_seed, instances);
      out << "instances: " << s.instances << '\n'
          << "heuristic optimal: " << s.optimal << '\n'
          << "min gap: " << s.min_gap << '\n'
          << "max gap: " << s.max_gap << '\n'
          << "mean gap: " << format_fixed(s.mean_gap) << '\n'
          << "bound violations: " << s.violations << '\n';
      if (s.violations != 0) {
        err << "heuristic beat the exhaustive optimum; the oracle or simulator is broken\n";
        return kRuntime;
      }
      return kSuccess;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace avpool::cli

#endif  // AVPOOL_TOOLS_CLI_HPP
