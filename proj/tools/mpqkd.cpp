#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mpqkd/config_io.hpp"
#include "mpqkd/entanglement.hpp"
#include "mpqkd/format.hpp"
#include "mpqkd/mc_validation.hpp"
#include "mpqkd/report.hpp"
#include "mpqkd/sweep.hpp"

namespace fs = std::filesystem;
using namespace mpqkd;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<double> distance;
  std::optional<std::string> mode;
  std::optional<std::string> strategy;
  std::optional<double> p_save;
  std::optional<double> rounds;
  std::string out_dir = "mpqkd-out";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Scenario file (key = value lines)");
  cmd->add_option("--set", o.overrides, "Override one key, e.g. --set link.loss_db_per_km=0.16")->take_all();
  cmd->add_option("--distance", o.distance, "Alice-Bob distance in km");
  cmd->add_option("--mode", o.mode, "asymptotic | finite");
  cmd->add_option("--strategy", o.strategy, "original | flexible");
  cmd->add_option("--p-save", o.p_save, "Save probability for the flexible strategy");
  cmd->add_option("--rounds", o.rounds, "Number of rounds N");
  cmd->add_option("--out-dir", o.out_dir, "Directory for output files");
}

ScenarioConfig build_scenario(const CommonOptions& o) {
  ScenarioConfig sc = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(kv, "--set expects key=value");
    set_config_value(sc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.distance) sc.link.total_distance_km = *o.distance;
  if (o.mode) sc.mode = parse_mode(*o.mode);
  if (o.strategy) sc.strategy.kind = parse_strategy(*o.strategy);
  if (o.p_save) sc.strategy.p_save = *o.p_save;
  if (o.rounds) sc.rounds = *o.rounds;
  sc.validate();
  return sc;
}

class Outputs {
 public:
  Outputs(const std::string& dir, std::string command) : dir_(dir) {
    fs::create_directories(dir_);
    manifest_.command = std::move(command);
    manifest_.started_utc = utc_timestamp();
  }

  std::ofstream open(const std::string& name) {
    const fs::path p = dir_ / name;
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    manifest_.outputs.push_back(p.string());
    return f;
  }

  void write_json(const std::string& name, const Json& j) { open(name) << j.dump(2) << '\n'; }

  void finish(const ScenarioConfig& sc, std::vector<std::uint64_t> seeds = {}) {
    open("scenario.cfg") << serialize_config(sc);
    manifest_.config_text = serialize_config(sc);
    manifest_.seeds = std::move(seeds);
    manifest_.finished_utc = utc_timestamp();
    const fs::path p = dir_ / "manifest.json";
    std::ofstream(p) << to_json(manifest_).dump(2) << '\n';
    std::cout << "wrote " << manifest_.outputs.size() + 1 << " files to " << dir_.string() << '\n';
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

void print_rate(const KeyRateResult& r) {
  std::cout << "R = " << fmt_num(r.R) << " per round"
            << "  (n11_z_lower = " << fmt_num(r.n11_z_lower) << ", e11_x_upper = " << fmt_num(r.e11_x_upper)
            << ", E_z = " << fmt_num(r.E_z) << ", feasible = " << (r.feasible ? "yes" : "no") << ")\n";
}

int cmd_rate(const CommonOptions& o, const std::string& cmdline) {
  const ScenarioConfig sc = build_scenario(o);
  const PointEvaluation ev = evaluate_point_full(sc);
  print_rate(ev.result);
  Outputs out(o.out_dir, cmdline);
  Json j{{"scenario", to_json(sc)}, {"evaluation", to_json(ev)}};
  out.write_json("rate.json", j);
  auto counts = out.open("counts.csv");
  write_table_csv(ev.table, counts);
  out.finish(sc);
  return 0;
}

int cmd_optimize(const CommonOptions& o, std::size_t resolution, const std::string& cmdline) {
  ScenarioConfig sc = build_scenario(o);
  sc.strategy.kind = StrategyKind::kFlexible;
  const PSaveOptimum opt = optimize_p_save(sc, resolution);
  std::cout << "p_save* = " << fmt_num(opt.p_save) << " after " << opt.evaluations << " evaluations\n";
  print_rate(opt.result);
  sc.strategy.p_save = opt.p_save;
  Outputs out(o.out_dir, cmdline);
  out.write_json("optimize.json", Json{{"scenario", to_json(sc)}, {"optimum", to_json(opt)}});
  out.finish(sc);
  return 0;
}

struct SweepOptions {
  std::string figure;
  double from = 0.0, to = 600.0, step = 5.0;
  bool no_optimize = false;
  std::size_t resolution = kDefaultPSaveResolution;
};

int cmd_sweep(const CommonOptions& o, const SweepOptions& so, const std::string& cmdline) {
  const ScenarioConfig base = build_scenario(o);
  std::vector<SweepSpec> specs;
  if (!so.figure.empty()) {
    specs = figure_preset(so.figure, base);
  } else {
    SweepSpec s;
    s.base = base;
    s.values = distance_grid(so.from, so.to, so.step);
    specs.push_back(s);
  }
  for (auto& s : specs) {
    s.optimize_p_save = !so.no_optimize;
    s.p_save_resolution = so.resolution;
  }

  Outputs out(o.out_dir, cmdline);
  for (const auto& spec : specs) {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult res = run_sweep(spec);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto f = out.open(spec.name + ".csv");
    write_sweep_csv(res, f);
    std::size_t errors = 0;
    for (const auto& p : res.points)
      for (const auto& s : p.strategies) errors += !s.error.empty();
    std::cout << spec.name << ": " << res.points.size() << " points in " << std::fixed << std::setprecision(1) << secs
              << " s" << (errors ? ", " + std::to_string(errors) + " failed evaluations" : std::string()) << '\n';
    std::cout.unsetf(std::ios::floatfield);
  }

  auto plob = out.open("plob.csv");
  plob << "distance_km,plob\n";
  for (double d : specs.front().values) {
    LinkModel link = base.link;
    link.total_distance_km = d;
    plob << fmt_num(d) << ',' << fmt_num(plob_bound(link.eta_total())) << '\n';
  }
  out.finish(base);
  return 0;
}

int cmd_mc_validate(const CommonOptions& o, std::uint64_t seed, const std::string& cmdline) {
  CommonOptions local = o;
  if (!local.rounds) local.rounds = 1e7;
  const ScenarioConfig sc = build_scenario(local);
  const auto t0 = std::chrono::steady_clock::now();
  const McValidation v = validate_monte_carlo(sc, seed, static_cast<std::uint64_t>(sc.rounds));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& c : v.counts)
    std::cout << (c.passed ? "ok   " : "FAIL ") << std::left << std::setw(14) << c.name << " expected "
              << fmt_num(c.expected) << "  observed " << fmt_num(c.observed) << "  p " << fmt_num(c.p_value) << '\n';
  for (const auto& s : v.stats)
    std::cout << (s.passed ? "ok   " : "FAIL ") << std::left << std::setw(14) << s.name << " expected "
              << fmt_num(s.expected) << "  observed " << fmt_num(s.observed) << "  z " << fmt_num(s.z) << '\n';
  std::cout << (v.passed() ? "PASS" : "FAIL") << " (" << fmt_num(std::round(secs * 10) / 10) << " s)\n";
  Outputs out(o.out_dir, cmdline);
  out.write_json("mc_validate.json", to_json(v));
  out.finish(v.scenario, {seed});
  return v.passed() ? 0 : kExitFailed;
}

int cmd_verify(const std::string& out_dir, const std::string& cmdline) {
  const auto checks = run_algebra_suite();
  Json arr = Json::array();
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed() ? "ok   " : "FAIL ") << std::left << std::setw(34) << c.name << " deviation "
              << fmt_num(c.deviation) << '\n';
    arr.push_back({{"name", c.name}, {"deviation", c.deviation}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
    ok = ok && c.passed();
  }
  Outputs out(out_dir, cmdline);
  out.write_json("verify.json", Json{{"passed", ok}, {"checks", arr}});
  out.finish(ScenarioConfig{});
  return ok ? 0 : kExitFailed;
}

void explain_defaults_table() {
  for (const auto& d : explain_defaults())
    std::cout << std::left << std::setw(26) << d.key << std::setw(12) << d.value << std::setw(11) << d.origin << d.note
              << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-rate analysis and simulation for mode-pairing QKD"};
  app.set_version_flag("--version", tool_version());
  app.failure_message(CLI::FailureMessage::help);
  bool explain = false;
  app.add_flag("--explain-defaults", explain, "List every config key with its default and where it comes from");
  app.require_subcommand(0, 1);

  CommonOptions common;
  auto* rate = app.add_subcommand("rate", "Evaluate the key rate at one point");
  add_common(rate, common);

  auto* optimize = app.add_subcommand("optimize", "Optimize p_save for the flexible strategy");
  add_common(optimize, common);
  std::size_t resolution = kDefaultPSaveResolution;
  optimize->add_option("--resolution", resolution, "Grid points in the p_save scan")->check(CLI::Range(2, 100000));

  auto* sweep = app.add_subcommand("sweep", "Sweep distance for both strategies and write CSV");
  add_common(sweep, common);
  SweepOptions so;
  sweep->add_option("--figure", so.figure, "Preset: fig2 .. fig7")->check(CLI::IsMember(figure_names()));
  sweep->add_option("--from", so.from, "First distance in km");
  sweep->add_option("--to", so.to, "Last distance in km");
  sweep->add_option("--step", so.step, "Distance step in km")->check(CLI::PositiveNumber);
  sweep->add_flag("--no-optimize", so.no_optimize, "Use the configured p_save instead of optimizing it");
  sweep->add_option("--resolution", so.resolution, "Grid points in the p_save scan")->check(CLI::Range(2, 100000));

  auto* mc = app.add_subcommand("mc-validate", "Compare a Monte Carlo run with the analytic counts");
  add_common(mc, common);
  std::uint64_t seed = 1;
  mc->add_option("--seed", seed, "RNG seed");

  auto* verify = app.add_subcommand("verify", "Run the state and measurement algebra checks");
  std::string verify_out = "mpqkd-out";
  verify->add_option("--out-dir", verify_out, "Directory for output files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  const std::string cmdline = command_line(argc, argv);
  try {
    if (explain) {
      explain_defaults_table();
      return 0;
    }
    if (rate->parsed()) return cmd_rate(common, cmdline);
    if (optimize->parsed()) return cmd_optimize(common, resolution, cmdline);
    if (sweep->parsed()) return cmd_sweep(common, so, cmdline);
    if (mc->parsed()) return cmd_mc_validate(common, seed, cmdline);
    if (verify->parsed()) return cmd_verify(verify_out, cmdline);
    std::cerr << app.help();
    return kExitError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}
