#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gossim/acceptance.hpp"
#include "gossim/engine.hpp"
#include "gossim/metrics.hpp"
#include "gossim/output.hpp"
#include "gossim/parallel.hpp"
#include "gossim/scenarios.hpp"

namespace gossim::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

/// Thrown for anything that should exit with the usage/config code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario selection shared by run, compare and sweep. Flags are applied as
/// overrides on top of the file, so they win.
struct ScenarioArgs {
  std::string scenario = "builtin:c1";
  std::optional<std::string> protocol;
  std::optional<std::uint32_t> tokens;
  std::optional<std::uint64_t> seed;
  std::string scale = "paper";
  std::vector<std::string> set;  // section.key=value
};

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("GOSSIM_SEED")) {
    std::uint64_t v{};
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError("GOSSIM_SEED is not a non-negative integer");
    return v;
  }
  return 1;
}

inline ConfigOverride parse_assignment(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) throw UsageError("expected section.key=value, got '" + arg + "'");
  const auto lhs = arg.substr(0, eq);
  const auto dot = lhs.find('.');
  if (dot == std::string::npos) return {"", lhs, arg.substr(eq + 1)};
  return {lhs.substr(0, dot), lhs.substr(dot + 1), arg.substr(eq + 1)};
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read scenario file " + p.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

inline ScenarioSpec load_scenario(const ScenarioArgs& a, const std::vector<ConfigOverride>& extra = {}) {
  std::vector<ConfigOverride> ov;
  for (const auto& s : a.set) ov.push_back(parse_assignment(s));
  ov.insert(ov.end(), extra.begin(), extra.end());
  if (a.protocol) ov.push_back({"protocol", "name", *a.protocol});
  if (a.tokens) ov.push_back({"protocol", "tokens", std::to_string(*a.tokens)});

  std::string text;
  std::optional<std::filesystem::path> base_dir;
  if (a.scenario.rfind("builtin:", 0) == 0) {
    text = "builtin = " + a.scenario.substr(8) + "\n";
  } else {
    text = read_text(a.scenario);
    base_dir = std::filesystem::path(a.scenario).parent_path();
  }
  auto spec = parse(text, ov);
  // Precedence: --seed, then the file's own seed key, then GOSSIM_SEED.
  const auto sections = detail::tokenize(text);
  const auto& top = sections.front().entries;
  const bool file_seed = std::any_of(top.begin(), top.end(), [](const auto& e) { return e.key == "seed"; });
  if (a.seed) spec.seed = *a.seed;
  else if (!file_seed) spec.seed = default_seed();
  if (spec.trace && base_dir && std::filesystem::path(*spec.trace).is_relative())
    spec.trace = (*base_dir / *spec.trace).lexically_normal().string();
  if (a.scale == "desk") spec = desk_scale(std::move(spec));
  else if (a.scale != "paper") throw UsageError("--scale must be desk or paper");
  validate(spec);
  return spec;
}

inline void add_scenario_flags(CLI::App& cmd, ScenarioArgs& a, bool with_protocol) {
  cmd.add_option("--scenario", a.scenario, "scenario file or builtin:NAME")->capture_default_str();
  if (with_protocol) {
    cmd.add_option("--protocol", a.protocol, "fp, fcp, pbp or gcp")->check(CLI::IsMember({"fp", "fcp", "pbp", "gcp"}));
    cmd.add_option("--tokens", a.tokens, "initial token budget (fcp, gcp)")->check(CLI::PositiveNumber);
  }
  cmd.add_option("--seed", a.seed, "RNG seed (default: GOSSIM_SEED or 1)");
  cmd.add_option("--scale", a.scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}))->capture_default_str();
  cmd.add_option("--set", a.set, "config override section.key=value, repeatable");
}

struct Cell {
  ProtocolConfig protocol;
  std::string label;
};

inline std::vector<Cell> expand_cells(const std::vector<std::string>& protocols, const std::vector<std::uint32_t>& tokens) {
  std::vector<Cell> cells;
  for (const auto& name : protocols) {
    const auto p = protocol_from_name(name);
    if (!p) throw UsageError("unknown protocol '" + name + "'");
    if (!p->token_control) {
      cells.push_back({*p, name});
      continue;
    }
    if (tokens.empty()) throw UsageError("tokens required for fcp and gcp (--tokens-list)");
    for (auto t : tokens) {
      if (t == 0) throw UsageError("tokens must be positive");
      auto q = *p;
      q.initial_tokens = t;
      cells.push_back({q, name + "-" + std::to_string(t)});
    }
  }
  return cells;
}

/// Runs every cell for seeds base..base+n-1, plus an FP baseline per seed
/// for the savings column. Returns the merged summary rows.
inline std::vector<SummaryRow> run_grid(const ScenarioSpec& base, const std::vector<Cell>& cells, std::uint64_t seeds,
                                        const std::filesystem::path& out, std::ostream& log) {
  struct Job {
    ScenarioSpec spec;
    std::string dir;
  };
  std::vector<Job> jobs;
  std::vector<std::size_t> baseline(seeds);
  for (std::uint64_t k = 0; k < seeds; ++k) {
    baseline[k] = jobs.size();
    jobs.push_back({acceptance::with(base, ProtocolConfig::fp(), base.seed + k), "fp"});
    for (const auto& c : cells) {
      if (c.label == "fp") continue;
      jobs.push_back({acceptance::with(base, c.protocol, base.seed + k), c.label});
    }
  }
  const auto recs = parallel_map(jobs.size(), [&](std::size_t i) { return run(jobs[i].spec); });
  const bool fp_requested = std::any_of(cells.begin(), cells.end(), [](const Cell& c) { return c.label == "fp"; });

  std::vector<SummaryRow> rows;
  const std::size_t per_seed = jobs.size() / std::max<std::uint64_t>(seeds, 1);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& fp = recs[baseline[i / per_seed]];
    const auto row = summarize(recs[i], &fp);
    const auto dir = out / jobs[i].dir / ("seed-" + std::to_string(jobs[i].spec.seed));
    write_run(dir, recs[i], row);
    if (jobs[i].dir != "fp" || fp_requested) rows.push_back(row);
    log << jobs[i].dir << " seed " << jobs[i].spec.seed << ": " << row.total_sends << " sends\n";
  }
  write_file_atomic(out / "summary.csv", summary_csv(rows));
  return rows;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    cur = std::string(detail::trim(cur));
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"gossim: simulator for epidemic software dissemination protocols"};
  app.require_subcommand(1, 1);

  ScenarioArgs run_args;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "simulate one scenario and write its CSVs");
  add_scenario_flags(*run_cmd, run_args, true);
  run_cmd->add_option("--out", run_out, "output directory")->required();

  ScenarioArgs cmp_args;
  std::string cmp_protocols = "fp,fcp,pbp,gcp", cmp_tokens = "2,3,5", cmp_out;
  std::uint64_t cmp_seeds = 1;
  auto* cmp_cmd = app.add_subcommand("compare", "matched-seed runs over protocols and token budgets");
  add_scenario_flags(*cmp_cmd, cmp_args, false);
  cmp_cmd->add_option("--protocols", cmp_protocols, "comma-separated protocol list")->capture_default_str();
  cmp_cmd->add_option("--tokens-list", cmp_tokens, "comma-separated token budgets")->capture_default_str();
  cmp_cmd->add_option("--seeds", cmp_seeds, "replicates per cell")->check(CLI::PositiveNumber)->capture_default_str();
  cmp_cmd->add_option("--out", cmp_out, "output directory")->required();

  ScenarioArgs sw_args;
  std::string sw_param, sw_values, sw_out;
  std::uint64_t sw_seeds = 1;
  auto* sw_cmd = app.add_subcommand("sweep", "vary one config key over a list of values");
  add_scenario_flags(*sw_cmd, sw_args, true);
  sw_cmd->add_option("--param", sw_param, "section.key to vary, e.g. radio.R")->required();
  sw_cmd->add_option("--values", sw_values, "comma-separated values")->required();
  sw_cmd->add_option("--seeds", sw_seeds, "replicates per value")->check(CLI::PositiveNumber)->capture_default_str();
  sw_cmd->add_option("--out", sw_out, "output directory")->required();

  TheoreticalParams bp;
  bp.tokens = 5;
  bp.neighbourhood = 10;
  bp.network_size = 2000;
  auto* b_cmd = app.add_subcommand("bounds", "print the four per-node send bounds");
  b_cmd->add_option("--nv", bp.upgrades, "number of upgrades")->capture_default_str();
  b_cmd->add_option("--tokens", bp.tokens, "initial tokens")->capture_default_str();
  b_cmd->add_option("--nnh", bp.neighbourhood, "mean neighbourhood size")->capture_default_str();
  b_cmd->add_option("--duration", bp.duration, "deployment duration, ms")->capture_default_str();
  b_cmd->add_option("--beacon", bp.beacon_period, "beacon period, ms")->capture_default_str();
  b_cmd->add_option("--nodes", bp.network_size, "network size")->capture_default_str();

  std::string v_scale = "desk", v_out = "acceptance";
  auto* v_cmd = app.add_subcommand("validate", "run the acceptance suite");
  v_cmd->add_option("--scale", v_scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}))->capture_default_str();
  v_cmd->add_option("--out", v_out, "report directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const auto spec = load_scenario(run_args);
      const auto rec = run(spec);
      write_run(run_out, rec, summarize(rec));
      out << "wrote " << run_out << " (" << total_software_sends(rec) << " software sends)\n";
      return kOk;
    }
    if (cmp_cmd->parsed()) {
      std::vector<std::uint32_t> tokens;
      for (const auto& t : split_list(cmp_tokens)) {
        try {
          tokens.push_back(static_cast<std::uint32_t>(std::stoul(t)));
        } catch (const std::exception&) {
          throw UsageError("bad token budget '" + t + "'");
        }
      }
      const auto cells = expand_cells(split_list(cmp_protocols), tokens);
      if (cells.empty()) throw UsageError("--protocols is empty");
      const auto base = load_scenario(cmp_args);
      run_grid(base, cells, cmp_seeds, cmp_out, out);
      return kOk;
    }
    if (sw_cmd->parsed()) {
      const auto target = parse_assignment(sw_param + "=");
      const auto values = split_list(sw_values);
      if (values.empty()) throw UsageError("--values is empty");
      std::vector<SummaryRow> rows;
      std::string table = "value," + std::string(kSummaryHeader);
      for (const auto& v : values) {
        const auto spec = load_scenario(sw_args, {{target.section, target.key, v}});
        for (std::uint64_t k = 0; k < sw_seeds; ++k) {
          const auto rec = run(acceptance::with(spec, spec.protocol, spec.seed + k));
          const auto row = summarize(rec);
          write_run(std::filesystem::path(sw_out) / (sw_param + "=" + v) / ("seed-" + std::to_string(rec.seed)), rec, row);
          table += v + "," + summary_line(row);
        }
        out << sw_param << " = " << v << " done\n";
      }
      write_file_atomic(std::filesystem::path(sw_out) / "sweep.csv", table);
      return kOk;
    }
    if (b_cmd->parsed()) {
      if (!bp.valid()) throw UsageError("invalid bound parameters (beacon and duration must be > 0, nodes >= 1)");
      out << "FP  " << detail::fmt_double(bound_flooding(bp)) << '\n';
      out << "FCP " << detail::fmt_double(bound_fcp(bp)) << '\n';
      out << "PBP " << detail::fmt_double(bound_pbp(bp)) << '\n';
      out << "GCP " << detail::fmt_double(bound_gcp(bp)) << '\n';
      return kOk;
    }
    if (v_cmd->parsed()) {
      acceptance::Options opt;
      opt.scale = v_scale == "paper" ? acceptance::Scale::Paper : acceptance::Scale::Desk;
      opt.work_dir = std::filesystem::path(v_out) / "work";
      nlohmann::json report = nlohmann::json::array();
      bool all = true;
      acceptance::run_all(opt, [&](const acceptance::CriterionResult& r) {
        out << acceptance::format_line(r) << std::endl;
        all = all && r.passed;
        report.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"measured", r.measured}, {"expected", r.expected}});
      });
      write_file_atomic(std::filesystem::path(v_out) / "report.json",
                        nlohmann::json{{"scale", v_scale}, {"passed", all}, {"criteria", report}}.dump(2) + "\n");
      return all ? kOk : kFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const SemanticError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const TraceError& e) {
    err << "trace error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace gossim::cli
