#include <doctest.h>

#include "mpqkd/decoy.hpp"
#include "mpqkd/mc_validation.hpp"
#include "mpqkd/monte_carlo.hpp"
#include "oracle.hpp"

using namespace mpqkd;

namespace {

bool same_table(const PairCountTable& a, const PairCountTable& b) {
  return a.named() == b.named() && a.by_class == b.by_class;
}

}  // namespace

TEST_CASE("vacuum-only sources without dark counts give an empty table") {
  ScenarioConfig sc;
  for (SourceModel* s : {&sc.alice, &sc.bob}) {
    s->p_o = 1.0;
    s->p_mu = s->p_nu = 0.0;
  }
  sc.detector.pd0 = sc.detector.pd1 = 0.0;
  const MonteCarloRun run = run_monte_carlo(sc, 1, 1'000'000);
  for (const auto& [k, v] : run.table.named()) CHECK_MESSAGE(v == 0.0, k);
  CHECK(run.effective_rounds == 0);
}

TEST_CASE("too few expected effective rounds is rejected") {
  ScenarioConfig sc;
  sc.link.total_distance_km = 300;
  CHECK_THROWS_AS(run_monte_carlo(sc, 1, 1000), std::invalid_argument);
  CHECK_THROWS_AS(run_monte_carlo(sc, 1, 0), std::invalid_argument);
}

TEST_CASE("runs are reproducible and independent of the thread count") {
  ScenarioConfig sc;
  sc.link.total_distance_km = 20;
  MonteCarloOptions one, three;
  one.threads = 1;
  three.threads = 3;
  const auto a = run_monte_carlo(sc, 42, 700'000, one);
  const auto b = run_monte_carlo(sc, 42, 700'000, three);
  const auto c = run_monte_carlo(sc, 42, 700'000, one);
  const auto d = run_monte_carlo(sc, 43, 700'000, one);
  CHECK(same_table(a.table, b.table));
  CHECK(same_table(a.table, c.table));
  CHECK(a.t_mean == b.t_mean);
  CHECK_FALSE(same_table(a.table, d.table));
  for (const auto& [k, v] : a.table.named()) CHECK(v == std::floor(v));
}

TEST_CASE("flexible pairing never pairs a decoy-signal round") {
  using S = SumClass;
  const std::vector<std::pair<S, S>> label2_only{{S::k2Nu, S::k2Mu}, {S::k2Mu, S::k2Nu}, {S::k2Nu, S::kMuNu},
                                                 {S::kMuNu, S::k2Nu}, {S::kNu, S::k2Mu},  {S::k2Mu, S::kNu},
                                                 {S::k2Nu, S::kMu},   {S::kMu, S::k2Nu}};
  ScenarioConfig sc;
  sc.strategy.p_save = 1.0;
  double flex = 0, orig = 0;
  const auto f = run_monte_carlo(sc, 3, 1'000'000);
  sc.strategy.kind = StrategyKind::kOriginal;
  const auto o = run_monte_carlo(sc, 3, 1'000'000);
  for (auto [a, b] : label2_only) {
    flex += f.table.n(a, b);
    orig += o.table.n(a, b);
  }
  CHECK(flex == 0.0);
  CHECK(orig > 0.0);
}

TEST_CASE("counts agree with the analytic expectation") {
  for (double km : {0.0, 200.0}) {
    ScenarioConfig sc;
    sc.link.total_distance_km = km;
    const MonteCarloRun run = run_monte_carlo(sc, 2024 + static_cast<std::uint64_t>(km), 10'000'000);
    const McValidation v = compare_mc_to_analytic(sc, run);
    for (const auto& c : v.counts) CHECK_MESSAGE(c.passed, km << " km " << c.name << " z=" << c.z);
    for (const auto& s : v.stats) CHECK_MESSAGE(s.passed, km << " km " << s.name << " z=" << s.z);
    // The run is large enough for the main entries to be tight.
    CHECK(v.counts.front().name == "n_tot");
    CHECK(std::abs(v.counts.front().z) < 5.0);
  }
}

TEST_CASE("single-photon likelihood of one photon per party") {
  LinkModel link;  // 0 km
  DetectorModel det;
  det.eta_d0 = det.eta_d1 = 1.0;
  det.pd0 = det.pd1 = 0.0;
  PhotonPairInput in;
  in.tau_a_j = in.tau_a_k = 0.2;
  in.tau_b_j = in.tau_b_k = 0.2;
  for (auto th : {std::array{0.0, 0.0, 0.0, 0.0}, {0.3, 1.1, 2.0, 0.4}, {1.0, 4.0, 0.5, 5.5}}) {
    in.theta_a_j = th[0];
    in.theta_a_k = th[1];
    in.theta_b_j = th[2];
    in.theta_b_k = th[3];
    const double delta = (th[0] - th[1]) - (th[2] - th[3]);
    const double same = photon_pair_likelihood(in, true, true, link, det);
    const double diff = photon_pair_likelihood(in, true, false, link, det);
    CHECK(same == doctest::Approx(2 * (1 + std::cos(delta)) / 16).epsilon(1e-12));
    CHECK(diff == doctest::Approx(2 * (1 - std::cos(delta)) / 16).epsilon(1e-12));
    CHECK(photon_pair_likelihood(in, false, false, link, det) == doctest::Approx(same).epsilon(1e-12));
    CHECK(photon_pair_likelihood(in, false, true, link, det) == doctest::Approx(diff).epsilon(1e-12));
  }
}

TEST_CASE("single-photon likelihood with separated photons and loss") {
  LinkModel link;
  link.total_distance_km = 40;
  DetectorModel det;
  det.pd0 = det.pd1 = 0.0;
  PhotonPairInput in;
  in.tau_a_j = 0.542;  // Alice's photon only in round j
  in.tau_b_k = 0.542;  // Bob's photon only in round k
  in.theta_a_j = 0.7;
  in.theta_b_k = 2.1;
  const double pa = link.eta_a() * det.eta_d0 / 2, pb = link.eta_b() * det.eta_d1 / 2;
  for (bool lj : {true, false})
    for (bool lk : {true, false})
      CHECK(photon_pair_likelihood(in, lj, lk, link, det) == doctest::Approx(pa * pb).epsilon(1e-12));
}

TEST_CASE("tagged single-photon signal pairs match the closed form without dark counts") {
  ScenarioConfig sc;
  sc.detector.pd0 = sc.detector.pd1 = 0.0;
  sc.link.total_distance_km = 20;
  MonteCarloOptions opt;
  opt.tag_photon_numbers = true;
  const std::uint64_t n = 3'000'000;
  const MonteCarloRun run = run_monte_carlo(sc, 77, n, opt);
  REQUIRE(run.truth);

  // Only (μ,o)(o,μ) arrangements contribute: one photon from each party, in different rounds.
  ScenarioConfig ref = sc;
  ref.rounds = static_cast<double>(n);
  const ClickModel clicks = build_click_model(ref);
  const double q = clicks.q_kept();
  const double k = ref.rounds * analytic_pairing_efficiency(q, ref.strategy.interval) / (q * q);
  const double mu = sc.alice.mu, pm = sc.alice.p_mu, po = sc.alice.p_o;
  const double p1 = mu * std::exp(-mu);
  const double expect = k * 2 * std::pow(pm * po * p1, 2) * sc.link.eta_a() * sc.link.eta_b() *
                        sc.detector.eta_d0 * sc.detector.eta_d1;
  const double sigma = std::sqrt(run.table.n(SumClass::kMu, SumClass::kMu));
  CHECK(std::abs(run.truth->n11_z - expect) < 5 * sigma);
  CHECK(run.truth->n11_z <= run.table.n(SumClass::kMu, SumClass::kMu));
  CHECK(run.truth->m11_x <= run.truth->n11_x);
}

TEST_CASE("poisson tail probabilities") {
  CHECK(poisson_two_sided_p(0, 0.01) == doctest::Approx(1.0));
  CHECK(poisson_two_sided_p(3, 0.0) == 0.0);
  // λ = 2, k = 7: 2 P(X >= 7).
  double below = 0;
  for (int i = 0; i < 7; ++i) below += std::exp(-2.0) * std::pow(2.0, i) / std::tgamma(i + 1.0);
  CHECK(poisson_two_sided_p(7, 2.0) == doctest::Approx(2 * (1 - below)).epsilon(1e-9));
  CHECK(poisson_two_sided_p(30, 5.0) < normal_two_sided_p(5.0));
  CHECK(normal_two_sided_p(5.0) == doctest::Approx(5.733e-7).epsilon(1e-3));
  CHECK(poisson_two_sided_p(1000, 1000) == doctest::Approx(1.0));
}
