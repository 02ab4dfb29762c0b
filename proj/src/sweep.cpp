#include "mpqkd/sweep.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "mpqkd/format.hpp"
#include "mpqkd/parallel.hpp"

namespace mpqkd {

PointEvaluation evaluate_point_full(const ScenarioConfig& sc, const ClickModel& clicks) {
  PointEvaluation ev;
  ev.table = analytic_pair_counts(sc, clicks);
  const PairChoiceProbs probs = pair_choice_probs(sc);
  if (sc.mode == KeyRateMode::kAsymptotic) {
    ev.bounds = estimate_asymptotic(ev.table, probs, sc);
    ev.result = asymptotic_key_rate(ev.bounds, ev.table, sc.rounds, sc.ec_efficiency);
  } else {
    ev.bounds = estimate_finite(ev.table, probs, sc);
    ev.result = finite_key_rate(ev.bounds, ev.table, sc.eps, sc.rounds, sc.ec_efficiency);
  }
  return ev;
}

PointEvaluation evaluate_point_full(const ScenarioConfig& sc) {
  sc.validate();
  return evaluate_point_full(sc, build_click_model(sc));
}

KeyRateResult evaluate_point(const ScenarioConfig& sc) { return evaluate_point_full(sc).result; }

std::vector<double> p_save_grid(std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("p_save_grid: resolution must be >= 2");
  std::vector<double> g(resolution);
  const double lo = std::log10(kPSaveMin);
  for (std::size_t i = 0; i < resolution; ++i)
    g[i] = std::pow(10.0, lo * (1.0 - static_cast<double>(i) / static_cast<double>(resolution - 1)));
  g.back() = 1.0;
  return g;
}

PSaveOptimum optimize_p_save(const ScenarioConfig& sc, std::size_t resolution, bool refine) {
  if (sc.strategy.kind != StrategyKind::kFlexible)
    throw ConfigError("strategy.kind", "p_save optimization needs the flexible strategy");
  sc.validate();
  const ClickModel base = build_click_model(sc);
  PSaveOptimum best;
  auto eval = [&](double ps) {
    ScenarioConfig s = sc;
    s.strategy.p_save = ps;
    ++best.evaluations;
    return evaluate_point_full(s, base.with_strategy(s.strategy)).result;
  };

  const std::vector<double> grid = p_save_grid(resolution);
  std::vector<KeyRateResult> rs;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rs.push_back(eval(grid[i]));
    if (rs[i].R > rs[arg].R) arg = i;
  }
  best.p_save = grid[arg];
  best.result = rs[arg];
  best.R = rs[arg].R;
  if (!refine || best.R <= 0.0) return best;

  // Golden-section search on log p_save over the neighbouring grid cells.
  double a = std::log(grid[arg == 0 ? 0 : arg - 1]);
  double b = std::log(grid[arg + 1 < grid.size() ? arg + 1 : arg]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  KeyRateResult rc = eval(std::exp(c)), rd = eval(std::exp(d));
  while (b - a > kGoldenTolerance) {
    if (rc.R >= rd.R) {
      b = d;
      d = c;
      rd = rc;
      c = b - inv_phi * (b - a);
      rc = eval(std::exp(c));
    } else {
      a = c;
      c = d;
      rc = rd;
      d = a + inv_phi * (b - a);
      rd = eval(std::exp(d));
    }
  }
  const bool use_c = rc.R >= rd.R;
  const KeyRateResult& r = use_c ? rc : rd;
  if (r.R > best.R) {
    best.p_save = std::exp(use_c ? c : d);
    best.result = r;
    best.R = r.R;
  }
  return best;
}

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kDistance: return "distance";
    case SweepVariable::kRounds: return "N";
    case SweepVariable::kInterval: return "l";
    case SweepVariable::kPSave: return "p_save";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep.values", "grid is empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw ConfigError("sweep.values", "grid must be strictly increasing");
  if (strategies.empty()) throw ConfigError("sweep.strategies", "no strategy selected");
  base.validate();
}

const StrategyPoint* SweepPoint::find(StrategyKind k) const {
  for (const auto& s : strategies)
    if (s.kind == k) return &s;
  return nullptr;
}

double improvement_ratio(double r_flex, double r_orig) {
  if (r_orig > 0.0) return r_flex / r_orig - 1.0;
  if (r_flex > 0.0) return std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> distance_grid(double from_km, double to_km, double step_km) {
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((to_km - from_km) / step_km + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(from_km + step_km * static_cast<double>(i));
  return g;
}

namespace {

ScenarioConfig apply_variable(ScenarioConfig s, SweepVariable v, double x) {
  switch (v) {
    case SweepVariable::kDistance: s.link.total_distance_km = x; break;
    case SweepVariable::kRounds: s.rounds = x; break;
    case SweepVariable::kInterval: s.strategy.interval = static_cast<std::uint64_t>(std::llround(x)); break;
    case SweepVariable::kPSave: s.strategy.p_save = x; break;
  }
  return s;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult out;
  out.spec = spec;
  out.points.resize(spec.values.size());
  const std::size_t ns = spec.strategies.size();
  for (auto& p : out.points) p.strategies.resize(ns);
  parallel_for(spec.values.size() * ns, [&](std::size_t item) {
    const std::size_t i = item / ns, k = item % ns;
    StrategyPoint sp;
    sp.kind = spec.strategies[k];
    sp.scenario = apply_variable(spec.base, spec.variable, spec.values[i]);
    sp.scenario.strategy.kind = sp.kind;
    try {
      if (sp.kind == StrategyKind::kFlexible && spec.optimize_p_save && spec.variable != SweepVariable::kPSave) {
        const PSaveOptimum opt = optimize_p_save(sp.scenario, spec.p_save_resolution);
        sp.scenario.strategy.p_save = opt.p_save;
        sp.result = opt.result;
      } else {
        sp.result = evaluate_point(sp.scenario);
      }
    } catch (const std::exception& e) {
      sp.error = e.what();
    }
    out.points[i].strategies[k] = std::move(sp);
  });
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    SweepPoint& p = out.points[i];
    p.value = spec.values[i];
    const StrategyPoint* f = p.find(StrategyKind::kFlexible);
    const StrategyPoint* o = p.find(StrategyKind::kOriginal);
    p.improvement = (f && o && f->error.empty() && o->error.empty())
                        ? improvement_ratio(f->result.R, o->result.R)
                        : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << "distance_km,mode,strategy,N,l,p_save,R,E_z,n11_lower,e11x_upper,improvement\n";
  for (const SweepPoint& p : result.points) {
    for (const StrategyPoint& s : p.strategies) {
      const auto& sc = s.scenario;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const bool ok = s.error.empty();
      const double p_save = sc.strategy.kind == StrategyKind::kOriginal ? 1.0 : sc.strategy.p_save;
      os << fmt_num(sc.link.total_distance_km) << ',' << to_string(sc.mode) << ',' << to_string(s.kind) << ','
         << fmt_num(sc.rounds) << ',' << sc.strategy.interval << ',' << fmt_num(p_save) << ','
         << fmt_num(ok ? s.result.R : nan) << ',' << fmt_num(ok ? s.result.E_z : nan) << ','
         << fmt_num(ok ? s.result.n11_z_lower : nan) << ',' << fmt_num(ok ? s.result.e11_x_upper : nan) << ','
         << fmt_num(p.improvement) << '\n';
    }
  }
}

std::vector<std::string> figure_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

std::vector<SweepSpec> figure_preset(std::string_view name, const ScenarioConfig& base) {
  auto make = [&](std::string label, auto&& tweak) {
    SweepSpec s;
    s.name = std::move(label);
    s.base = base;
    s.values = distance_grid();
    tweak(s);
    return s;
  };
  std::vector<SweepSpec> out;
  if (name == "fig2" || name == "fig3") {
    const std::vector<std::uint64_t> ls = name == "fig2" ? std::vector<std::uint64_t>{200, 20000, 200000}
                                                         : std::vector<std::uint64_t>{200, 2000, 20000, 200000};
    for (auto l : ls)
      out.push_back(make(std::string(name) + "_l" + std::to_string(l), [&](SweepSpec& s) {
        s.base.mode = KeyRateMode::kAsymptotic;
        s.base.strategy.interval = l;
      }));
  } else if (name == "fig4" || name == "fig5" || name == "fig6") {
    const std::vector<double> ns = name == "fig5" ? std::vector<double>{1e10, 1e11, 1e12, 7.24e13}
                                                  : std::vector<double>{1e10, 1e11, 7.24e13};
    for (double n : ns)
      out.push_back(make(std::string(name) + "_N" + fmt_num(n), [&](SweepSpec& s) {
        s.base.mode = KeyRateMode::kFinite;
        s.base.rounds = n;
        if (name == "fig6") s.strategies = {StrategyKind::kFlexible};
      }));
  } else if (name == "fig7") {
    for (double eta : {0.9, 0.3})
      out.push_back(make("fig7_etad" + fmt_num(eta), [&](SweepSpec& s) {
        s.base.mode = KeyRateMode::kAsymptotic;
        s.base.detector.eta_d0 = s.base.detector.eta_d1 = eta;
        s.base.misalignment.enabled = false;
      }));
    out.push_back(make("fig7_misaligned", [&](SweepSpec& s) {
      s.base.mode = KeyRateMode::kAsymptotic;
      s.base.misalignment.enabled = true;
    }));
  } else {
    throw ConfigError("figure", "unknown preset '" + std::string(name) + "' (expected fig2..fig7)");
  }
  return out;
}

}  // namespace mpqkd
