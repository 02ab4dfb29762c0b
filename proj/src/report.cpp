#include "mpqkd/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>
#include <sstream>

#include "mpqkd/config_io.hpp"
#include "mpqkd/format.hpp"

#ifndef MPQKD_VERSION
#define MPQKD_VERSION "0.0.0"
#endif

namespace mpqkd {
namespace {

// JSON has no inf/nan; keep them as strings so nothing is silently dropped.
Json num(double x) {
  if (std::isfinite(x)) return x;
  return fmt_num(x);
}

}  // namespace

Json to_json(const ScenarioConfig& c) {
  Json j = Json::object();
  std::istringstream in(serialize_config(c));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

Json to_json(const PairCountTable& t) {
  Json j = Json::object();
  j["mode"] = t.mode == CountMode::kAnalytic ? "analytic" : "monte_carlo";
  for (const auto& [k, v] : t.named()) j[k] = num(v);
  Json classes = Json::object();
  for (std::size_t a = 0; a < kSumClasses; ++a)
    for (std::size_t b = 0; b < kSumClasses; ++b)
      classes[std::string(to_string(static_cast<SumClass>(a))) + "," + std::string(to_string(static_cast<SumClass>(b)))] =
          num(t.by_class[a][b]);
  j["by_class"] = classes;
  return j;
}

Json to_json(const DecoyBounds& b) {
  return Json{{"finite", b.finite},
              {"n_mu", num(b.n_mu)},
              {"n_nu", num(b.n_nu)},
              {"m_2nu", num(b.m_2nu)},
              {"alpha_11", num(b.alpha_11)},
              {"s_a", b.s_a},
              {"s_b", b.s_b},
              {"n11_z_raw", num(b.n11_z_raw)},
              {"n11_z_lower", num(b.n11_z_lower)},
              {"n11_2nu_lower", num(b.n11_2nu_lower)},
              {"m11_2nu_upper", num(b.m11_2nu_upper)},
              {"e11_x_raw", num(b.e11_x_raw)},
              {"e11_x_upper", num(b.e11_x_upper)},
              {"feasible", b.feasible}};
}

Json to_json(const KeyRateResult& r) {
  const auto& d = r.breakdown;
  return Json{{"mode", to_string(r.mode)},
              {"R", num(r.R)},
              {"feasible", r.feasible},
              {"E_z", num(r.E_z)},
              {"lambda_ec", num(r.lambda_ec)},
              {"n11_z_lower", num(r.n11_z_lower)},
              {"e11_x_upper", num(r.e11_x_upper)},
              {"breakdown",
               {{"yield_term", num(d.yield_term)},
                {"lambda_ec", num(d.lambda_ec)},
                {"correctness", num(d.correctness)},
                {"estimation", num(d.estimation)},
                {"amplification", num(d.amplification)},
                {"unclamped", num(d.unclamped)}}}};
}

Json to_json(const ChernoffResult& c) {
  return Json{{"n", num(c.n)},         {"eps_l", num(c.eps_l)},         {"eps_u", num(c.eps_u)},
              {"chi_l", num(c.chi_l)}, {"chi_u", num(c.chi_u)},         {"lower", num(c.lower)},
              {"upper", num(c.upper)}, {"residual_l", num(c.residual_l)}, {"residual_u", num(c.residual_u)}};
}

Json to_json(const MonteCarloRun& r) {
  Json j{{"seed", r.seed},
         {"rounds", r.rounds},
         {"effective_rounds", r.effective_rounds},
         {"kept_rounds", r.kept_rounds},
         {"pairing_efficiency", num(r.pairing_efficiency)},
         {"pairing_efficiency_sigma", num(r.pairing_efficiency_sigma)},
         {"mean_gap_rounds", num(r.mean_gap_rounds)},
         {"t_mean", num(r.t_mean)},
         {"t_mean_sigma", num(r.t_mean_sigma)},
         {"table", to_json(r.table)}};
  if (r.truth)
    j["tagged"] = {{"n11_z", num(r.truth->n11_z)},
                   {"n11_x", num(r.truth->n11_x)},
                   {"m11_x", num(r.truth->m11_x)},
                   {"e11_x", num(r.truth->e11_x())}};
  return j;
}

Json to_json(const PointEvaluation& p) {
  return Json{{"table", to_json(p.table)}, {"bounds", to_json(p.bounds)}, {"key_rate", to_json(p.result)}};
}

Json to_json(const McValidation& v) {
  Json counts = Json::array(), stats = Json::array();
  for (const auto& c : v.counts)
    counts.push_back({{"name", c.name},
                      {"expected", num(c.expected)},
                      {"observed", num(c.observed)},
                      {"z", num(c.z)},
                      {"p_value", num(c.p_value)},
                      {"passed", c.passed}});
  for (const auto& s : v.stats)
    stats.push_back({{"name", s.name},
                     {"expected", num(s.expected)},
                     {"observed", num(s.observed)},
                     {"sigma", num(s.sigma)},
                     {"z", num(s.z)},
                     {"passed", s.passed}});
  return Json{{"passed", v.passed()},
              {"count_sigmas", num(v.count_sigmas)},
              {"stat_sigmas", num(v.stat_sigmas)},
              {"counts", counts},
              {"stats", stats},
              {"analytic", to_json(v.analytic)},
              {"monte_carlo", to_json(v.run)}};
}

Json to_json(const PSaveOptimum& o) {
  return Json{{"p_save", num(o.p_save)}, {"R", num(o.R)}, {"evaluations", o.evaluations}, {"key_rate", to_json(o.result)}};
}

void write_table_csv(const PairCountTable& t, std::ostream& os) {
  os << "key,value\n";
  for (const auto& [k, v] : t.named()) os << k << ',' << fmt_num(v) << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string tool_version() { return MPQKD_VERSION; }

Json to_json(const RunManifest& m) {
  return Json{{"tool", "mpqkd"},
              {"version", tool_version()},
              {"command", m.command},
              {"started_utc", m.started_utc},
              {"finished_utc", m.finished_utc},
              {"seeds", m.seeds},
              {"config", m.config_text},
              {"outputs", m.outputs}};
}

}  // namespace mpqkd
