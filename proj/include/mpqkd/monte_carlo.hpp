#pragma once

#include <cstdint>
#include <optional>

#include "mpqkd/pairing.hpp"

namespace mpqkd {

// Rounds per RNG substream. Chunk c draws from the seed stream advanced by c jumps,
// so results do not depend on the number of worker threads.
inline constexpr std::uint64_t kMonteCarloChunk = 1 << 16;

struct MonteCarloOptions {
  // Accumulate posterior single-photon-pair weights for Z and sifted X pairs.
  bool tag_photon_numbers = false;
  // Quadrature points for the common-phase average in the tagging posterior.
  std::size_t tag_phase_points = 64;
  unsigned threads = 0;
};

// Expected single-photon-pair content of the observed pairs (both parties emitted
// exactly one photon over the two rounds), given everything recorded in the run.
struct TaggedTruth {
  double n11_z = 0.0;
  double n11_x = 0.0;
  double m11_x = 0.0;
  double e11_x() const { return n11_x > 0 ? m11_x / n11_x : 0.0; }
};

struct MonteCarloRun {
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  PairCountTable table;
  std::uint64_t effective_rounds = 0;
  std::uint64_t kept_rounds = 0;
  double pairing_efficiency = 0.0;
  double pairing_efficiency_sigma = 0.0;
  double mean_gap_rounds = 0.0;
  double t_mean = 0.0;  // seconds
  double t_mean_sigma = 0.0;
  std::optional<TaggedTruth> truth;
};

MonteCarloRun run_monte_carlo(const ScenarioConfig& scenario, std::uint64_t seed, std::uint64_t rounds,
                              const MonteCarloOptions& options = {});

struct PhotonPairInput {
  double tau_a_j = 0, tau_a_k = 0, tau_b_j = 0, tau_b_k = 0;
  double theta_a_j = 0, theta_a_k = 0, theta_b_j = 0, theta_b_k = 0;
};

// Probability of the click pattern (left_j ? L : R in round j, same for k, each round
// with exactly one click) given that Alice and Bob each emitted one photon spread
// coherently over the two rounds. Exact two-photon interference with loss and dark counts.
double photon_pair_likelihood(const PhotonPairInput& in, bool left_j, bool left_k, const LinkModel& link,
                              const DetectorModel& det);

}  // namespace mpqkd
