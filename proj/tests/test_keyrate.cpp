#include <doctest.h>

#include "mpqkd/keyrate.hpp"
#include "mpqkd/sweep.hpp"
#include "oracle_model.hpp"

using namespace mpqkd;

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  for (double x : {1e-9, 0.01, 0.11, 0.3, 0.77})
    CHECK(binary_entropy(x) == doctest::Approx(oracle::h2(x)).epsilon(1e-14));
  CHECK(binary_entropy(0.11) == doctest::Approx(0.4999159582).epsilon(1e-9));
  CHECK(binary_entropy(0.2) == doctest::Approx(binary_entropy(0.8)).epsilon(1e-15));
  CHECK_THROWS(binary_entropy(-0.1));
  CHECK_THROWS(binary_entropy(1.5));
}

TEST_CASE("error-correction leakage") {
  CHECK(error_correction_leakage(1e6, 0.0, 1.1) == 0.0);
  CHECK(error_correction_leakage(1e6, 1e4, 1.1) == doctest::Approx(1.1e6 * oracle::h2(0.01)).epsilon(1e-13));
  CHECK(error_correction_leakage(1e6, 5e5, 1.0) == doctest::Approx(1e6).epsilon(1e-15));
  CHECK(error_correction_leakage(0.0, 0.0, 1.1) == 0.0);
  CHECK_THROWS(error_correction_leakage(10, 11, 1.1));
}

TEST_CASE("degenerate bounds give zero rate") {
  ScenarioConfig sc;
  sc.link.total_distance_km = 100;
  const PointEvaluation p = evaluate_point_full(sc);

  DecoyBounds b = p.bounds;
  b.n11_z_lower = 0.0;
  auto r = finite_key_rate(b, p.table, sc.eps, sc.rounds, sc.ec_efficiency);
  CHECK(r.R == 0.0);
  CHECK_FALSE(r.feasible);

  b = p.bounds;
  b.e11_x_upper = 0.5;
  r = finite_key_rate(b, p.table, sc.eps, sc.rounds, sc.ec_efficiency);
  CHECK(r.R == 0.0);
  CHECK(r.breakdown.unclamped < 0.0);
}

TEST_CASE("finite rate at 100 km matches an end-to-end reference") {
  ScenarioConfig sc;
  sc.link.total_distance_km = 100;
  const PointEvaluation p = evaluate_point_full(sc);
  CHECK(p.result.R > 0.0);
  const double ref = oracle::key_rate(sc, true);
  CHECK(ref > 0.0);
  CHECK(std::abs(p.result.R - ref) < 0.1 * ref);
}

TEST_CASE("asymptotic rate matches the end-to-end reference") {
  for (double km : {0.0, 150.0, 300.0}) {
    ScenarioConfig sc;
    sc.mode = KeyRateMode::kAsymptotic;
    sc.link.total_distance_km = km;
    const double ref = oracle::key_rate(sc, false);
    CHECK(evaluate_point(sc).R == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("asymptotic rate is never below the finite rate") {
  for (double km : {0.0, 50.0, 100.0, 200.0, 300.0, 400.0})
    for (double n : {1e10, 1e12, 7.24e13}) {
      ScenarioConfig sc;
      sc.link.total_distance_km = km;
      sc.rounds = n;
      const PointEvaluation f = evaluate_point_full(sc);
      sc.mode = KeyRateMode::kAsymptotic;
      CHECK(evaluate_point(sc).R >= f.result.R);
    }
}

TEST_CASE("lossless short link has positive rate") {
  ScenarioConfig sc;
  sc.link.total_distance_km = 0.0;
  sc.detector.eta_d0 = sc.detector.eta_d1 = 1.0;
  sc.mode = KeyRateMode::kAsymptotic;
  CHECK(evaluate_point(sc).R > 0.0);
}

TEST_CASE("repeaterless bound") {
  CHECK(plob_bound(0.0) == 0.0);
  CHECK(plob_bound(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(plob_bound(0.01) == doctest::Approx(0.01449957).epsilon(1e-7));
  CHECK(plob_bound(1e-12) == doctest::Approx(1e-12 / std::log(2.0)).epsilon(1e-9));
  CHECK(std::isinf(plob_bound(1.0)));
  CHECK_THROWS(plob_bound(1.5));
  CHECK_THROWS(plob_bound(-0.1));
}

TEST_CASE("rate is monotone in the bounds") {
  ScenarioConfig sc;
  sc.link.total_distance_km = 150;
  const PointEvaluation p = evaluate_point_full(sc);
  REQUIRE(p.result.R > 0.0);
  auto rate = [&](double n11, double e11) {
    DecoyBounds b = p.bounds;
    b.n11_z_lower = n11;
    b.e11_x_upper = e11;
    return finite_key_rate(b, p.table, sc.eps, sc.rounds, sc.ec_efficiency).R;
  };
  const double n11 = p.bounds.n11_z_lower, e11 = p.bounds.e11_x_upper;
  for (double s : {0.5, 0.9, 0.99}) CHECK(rate(n11 * s, e11) <= p.result.R);
  for (double s : {1.01, 1.5}) CHECK(rate(n11 * s, e11) >= p.result.R);
  for (double d : {1e-4, 1e-2}) {
    CHECK(rate(n11, e11 + d) <= p.result.R);
    CHECK(rate(n11, std::max(0.0, e11 - d)) >= p.result.R);
  }
}

TEST_CASE("breakdown terms") {
  ScenarioConfig sc;
  sc.link.total_distance_km = 50;
  const PointEvaluation p = evaluate_point_full(sc);
  const auto& d = p.result.breakdown;
  CHECK(d.correctness == doctest::Approx(std::log2(2.0 / 1e-10)));
  CHECK(d.estimation == doctest::Approx(2 * std::log2(2.0 / 1e-20)));
  CHECK(d.amplification == doctest::Approx(2 * std::log2(1.0 / 2e-10)));
  CHECK(d.unclamped == doctest::Approx(d.yield_term - d.lambda_ec - d.correctness - d.estimation - d.amplification)
                           .epsilon(1e-12));
  CHECK(p.result.R == doctest::Approx(d.unclamped / sc.rounds).epsilon(1e-14));
  const double nz = p.table.n(SumClass::kMu, SumClass::kMu);
  CHECK(p.result.E_z == doctest::Approx(p.table.m_z / nz).epsilon(1e-14));
  CHECK(p.result.E_z <= 0.5);

  const KeyRateResult a = asymptotic_key_rate(p.bounds, p.table, sc.rounds, sc.ec_efficiency);
  CHECK(a.breakdown.correctness == 0.0);
  CHECK(a.breakdown.unclamped == doctest::Approx(a.breakdown.yield_term - a.breakdown.lambda_ec));
}
