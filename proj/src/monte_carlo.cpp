#include "mpqkd/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "mpqkd/decoy.hpp"
#include "mpqkd/parallel.hpp"
#include "mpqkd/rng.hpp"

namespace mpqkd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct KeptRound {
  std::uint64_t index;
  Intensity a;
  Intensity b;
  bool left;
  double theta_a;
  double theta_b;
};

struct Chunk {
  std::vector<KeptRound> kept;
  std::uint64_t effective = 0;
};

class Welford {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double sd() const { return n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

Intensity sample_intensity(double u, const SourceModel& s) {
  if (u < s.p_o) return Intensity::kVacuum;
  if (u < s.p_o + s.p_nu) return Intensity::kDecoy;
  return Intensity::kSignal;
}

class ChunkGenerator {
 public:
  ChunkGenerator(const ScenarioConfig& sc) : sc_(sc) {
    for (Intensity i : kIntensities) {
      xa_[idx(i)] = sc.link.eta_a() * sc.alice.intensity(i);
      xb_[idx(i)] = sc.link.eta_b() * sc.bob.intensity(i);
    }
  }

  Chunk generate(Xoshiro256 rng, std::uint64_t first, std::uint64_t count) const {
    Chunk chunk;
    for (std::uint64_t n = 0; n < count; ++n) {
      const Intensity a = sample_intensity(rng.uniform(), sc_.alice);
      const Intensity b = sample_intensity(rng.uniform(), sc_.bob);
      const double ta = kTwoPi * rng.uniform();
      const double tb = kTwoPi * rng.uniform();
      const ClickProbs c = click_probs_received(xa_[idx(a)], xb_[idx(b)], ta - tb, sc_.detector);
      const double u = rng.uniform();
      if (u >= c.left + c.right) continue;
      ++chunk.effective;
      const double ps = save_probability(a, b, sc_.strategy);
      if (ps <= 0.0) continue;
      if (ps < 1.0 && rng.uniform() >= ps) continue;
      chunk.kept.push_back({first + n, a, b, u < c.left, ta, tb});
    }
    return chunk;
  }

 private:
  const ScenarioConfig& sc_;
  std::array<double, 3> xa_{};
  std::array<double, 3> xb_{};
};

enum class Slice { kNone, kZero, kPi };

Slice phase_slice(const KeptRound& j, const KeptRound& k, int slices, PhaseSift rule) {
  const double m = static_cast<double>(slices);
  if (rule == PhaseSift::kMatched) {
    const double d = std::abs(std::remainder((j.theta_a - k.theta_a) - (j.theta_b - k.theta_b), kTwoPi));
    if (d < std::numbers::pi / m) return Slice::kZero;
    if (std::numbers::pi - d < std::numbers::pi / m) return Slice::kPi;
    return Slice::kNone;
  }
  auto wrap = [](double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0 ? x + kTwoPi : x;
  };
  const double d = std::abs(wrap(j.theta_a - k.theta_a) - wrap(j.theta_b - k.theta_b));
  if (d < kTwoPi / m) return Slice::kZero;
  if (std::abs(d - std::numbers::pi) < kTwoPi / m) return Slice::kPi;
  return Slice::kNone;
}

class PairAccumulator {
 public:
  PairAccumulator(const ScenarioConfig& sc, const MonteCarloOptions& opt)
      : sc_(sc), opt_(opt) {
    table_.mode = CountMode::kMonteCarlo;
  }

  void consume(const std::vector<KeptRound>& rounds) {
    for (const KeptRound& r : rounds) {
      if (pending_ && r.index - pending_->index <= sc_.strategy.interval) {
        // Same rule as GreedyPairer, inlined to keep the round payloads.
        record(*pending_, r);
        pending_.reset();
      } else {
        pending_ = r;
      }
    }
  }

  void finish(MonteCarloRun& run) {
    const double pairs = static_cast<double>(gaps_.count());
    table_.n_tot = pairs;
    run.table = table_;
    run.pairing_efficiency = pairs / static_cast<double>(run.rounds);
    if (pairs > 0) {
      const double mu_c = cycles_.mean();
      run.pairing_efficiency_sigma = run.pairing_efficiency * cycles_.sd() / (mu_c * std::sqrt(pairs));
      run.mean_gap_rounds = gaps_.mean();
      run.t_mean = gaps_.mean() / sc_.misalignment.clock_hz;
      run.t_mean_sigma = gaps_.sd() / std::sqrt(pairs) / sc_.misalignment.clock_hz;
    }
    if (opt_.tag_photon_numbers) run.truth = truth_;
  }

 private:
  void record(const KeptRound& j, const KeptRound& k) {
    gaps_.add(static_cast<double>(k.index - j.index));
    cycles_.add(static_cast<double>(k.index + 1 - cycle_start_));
    cycle_start_ = k.index + 1;

    const SumClass ca = sum_class(j.a, k.a);
    const SumClass cb = sum_class(j.b, k.b);
    table_.n(ca, cb) += 1.0;

    if (ca == SumClass::kNu && cb == SumClass::kNu) {
      const bool same = (j.a == Intensity::kVacuum) == (j.b == Intensity::kVacuum);
      (same ? table_.n_nunu_same : table_.n_nunu_diff) += 1.0;
    } else if (ca == SumClass::kMu && cb == SumClass::kMu) {
      const bool alice_bit = j.a == Intensity::kSignal;
      const bool bob_bit = k.b == Intensity::kSignal;
      if (alice_bit != bob_bit) table_.m_z += 1.0;
      if (opt_.tag_photon_numbers) truth_.n11_z += single_photon_posterior(j, k);
    } else if (ca == SumClass::k2Nu && cb == SumClass::k2Nu) {
      const Slice s = phase_slice(j, k, sc_.phase_slices, sc_.sift);
      if (s == Slice::kNone) return;
      table_.n_x += 1.0;
      const bool error = s == Slice::kZero ? j.left != k.left : j.left == k.left;
      if (error) table_.m_x += 1.0;
      if (opt_.tag_photon_numbers) {
        const double w = single_photon_posterior(j, k);
        truth_.n11_x += w;
        if (error) truth_.m11_x += w;
      }
    }
  }

  double single_photon_posterior(const KeptRound& j, const KeptRound& k) const {
    PhotonPairInput in;
    in.tau_a_j = sc_.alice.intensity(j.a);
    in.tau_a_k = sc_.alice.intensity(k.a);
    in.tau_b_j = sc_.bob.intensity(j.b);
    in.tau_b_k = sc_.bob.intensity(k.b);
    const double prior = poisson_weight(1, in.tau_a_j + in.tau_a_k) * poisson_weight(1, in.tau_b_j + in.tau_b_k);
    if (prior == 0.0) return 0.0;
    in.theta_a_j = j.theta_a;
    in.theta_a_k = k.theta_a;
    in.theta_b_j = j.theta_b;
    in.theta_b_k = k.theta_b;
    const double lik = photon_pair_likelihood(in, j.left, k.left, sc_.link, sc_.detector);

    // Evidence: coherent-state click probability averaged over the unknown common phase.
    const double xaj = sc_.link.eta_a() * in.tau_a_j, xbj = sc_.link.eta_b() * in.tau_b_j;
    const double xak = sc_.link.eta_a() * in.tau_a_k, xbk = sc_.link.eta_b() * in.tau_b_k;
    const double phi_j = j.theta_a - j.theta_b;
    const double phi_k = k.theta_a - k.theta_b;
    const double evidence = periodic_mean(
        [&](double psi) {
          const ClickProbs cj = click_probs_received(xaj, xbj, phi_j + psi, sc_.detector);
          const ClickProbs ck = click_probs_received(xak, xbk, phi_k + psi, sc_.detector);
          return (j.left ? cj.left : cj.right) * (k.left ? ck.left : ck.right);
        },
        opt_.tag_phase_points);
    return evidence > 0.0 ? std::min(1.0, prior * lik / evidence) : 0.0;
  }

  const ScenarioConfig& sc_;
  const MonteCarloOptions& opt_;
  std::optional<KeptRound> pending_;
  PairCountTable table_;
  TaggedTruth truth_;
  Welford gaps_;
  Welford cycles_;
  std::uint64_t cycle_start_ = 0;
};

}  // namespace

double photon_pair_likelihood(const PhotonPairInput& in, bool left_j, bool left_k, const LinkModel& link,
                              const DetectorModel& det) {
  using cd = std::complex<double>;
  const double sa = in.tau_a_j + in.tau_a_k;
  const double sb = in.tau_b_j + in.tau_b_k;
  if (sa <= 0.0 || sb <= 0.0) return 0.0;

  // Modes: detectors L_j R_j L_k R_k (0-3), their loss ports (4-7),
  // Alice channel loss j/k (8-9), Bob channel loss j/k (10-11).
  constexpr int kModes = 12;
  std::array<cd, kModes> u{}, v{};
  const double ea = link.eta_a(), eb = link.eta_b();
  const double d0 = det.eta_d0, d1 = det.eta_d1;
  auto fill = [&](std::array<cd, kModes>& w, cd amp, int bin, double eta, double sign, int loss_mode) {
    const cd f = amp * std::sqrt(eta / 2.0);
    w[2 * bin] = f * std::sqrt(d0);
    w[2 * bin + 1] = sign * f * std::sqrt(d1);
    w[4 + 2 * bin] = f * std::sqrt(1.0 - d0);
    w[4 + 2 * bin + 1] = sign * f * std::sqrt(1.0 - d1);
    w[loss_mode] = amp * std::sqrt(1.0 - eta);
  };
  fill(u, std::polar(std::sqrt(in.tau_a_j / sa), in.theta_a_j), 0, ea, 1.0, 8);
  fill(u, std::polar(std::sqrt(in.tau_a_k / sa), in.theta_a_k), 1, ea, 1.0, 9);
  fill(v, std::polar(std::sqrt(in.tau_b_j / sb), in.theta_b_j), 0, eb, -1.0, 10);
  fill(v, std::polar(std::sqrt(in.tau_b_k / sb), in.theta_b_k), 1, eb, -1.0, 11);

  const std::array<bool, 4> fire{left_j, !left_j, left_k, !left_k};
  const std::array<double, 4> dark{det.pd0, det.pd1, det.pd0, det.pd1};
  auto outcome_prob = [&](unsigned hits) {
    double p = 1.0;
    for (int d = 0; d < 4; ++d) {
      if (hits & (1u << d))
        p *= fire[d] ? 1.0 : 0.0;
      else
        p *= fire[d] ? dark[d] : 1.0 - dark[d];
    }
    return p;
  };
  auto hit_mask = [](int m) { return m < 4 ? 1u << m : 0u; };

  double total = 0.0;
  for (int m = 0; m < kModes; ++m) {
    total += 2.0 * std::norm(u[m] * v[m]) * outcome_prob(hit_mask(m));
    for (int n = m + 1; n < kModes; ++n)
      total += std::norm(u[m] * v[n] + u[n] * v[m]) * outcome_prob(hit_mask(m) | hit_mask(n));
  }
  return total;
}

MonteCarloRun run_monte_carlo(const ScenarioConfig& sc, std::uint64_t seed, std::uint64_t rounds,
                              const MonteCarloOptions& opt) {
  sc.validate();
  if (rounds < 1) throw std::invalid_argument("run_monte_carlo: rounds must be >= 1");
  MonteCarloRun run;
  run.seed = seed;
  run.rounds = rounds;
  run.table.mode = CountMode::kMonteCarlo;

  const double q = build_click_model(sc).q_kept();
  if (q == 0.0) {
    if (opt.tag_photon_numbers) run.truth = TaggedTruth{};
    return run;
  }
  if (static_cast<double>(rounds) * q < 10.0) {
    std::ostringstream msg;
    msg << "run_monte_carlo: expected kept effective rounds N*q = " << static_cast<double>(rounds) * q
        << " < 10; increase rounds or reduce loss";
    throw std::invalid_argument(msg.str());
  }

  const ChunkGenerator gen(sc);
  PairAccumulator acc(sc, opt);
  const std::uint64_t n_chunks = (rounds + kMonteCarloChunk - 1) / kMonteCarloChunk;
  const unsigned workers = opt.threads ? opt.threads : worker_count();
  const std::uint64_t batch = std::max<std::uint64_t>(1, 2 * workers);

  Xoshiro256 cursor(seed);
  for (std::uint64_t c0 = 0; c0 < n_chunks; c0 += batch) {
    const std::uint64_t nb = std::min(batch, n_chunks - c0);
    std::vector<Xoshiro256> streams;
    for (std::uint64_t i = 0; i < nb; ++i) {
      streams.push_back(cursor);
      cursor.jump();
    }
    std::vector<Chunk> chunks(nb);
    parallel_for(
        nb,
        [&](std::size_t i) {
          const std::uint64_t first = (c0 + i) * kMonteCarloChunk;
          chunks[i] = gen.generate(streams[i], first, std::min(kMonteCarloChunk, rounds - first));
        },
        workers);
    for (const Chunk& c : chunks) {
      run.effective_rounds += c.effective;
      run.kept_rounds += c.kept.size();
      acc.consume(c.kept);
    }
  }
  acc.finish(run);
  return run;
}

}  // namespace mpqkd
