#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpqkd/channel_model.hpp"
#include "mpqkd/labels.hpp"

namespace mpqkd {

// Intensity class of one party over the two rounds of a pair.
enum class SumClass : std::uint8_t { kO = 0, kNu, kMu, k2Nu, kMuNu, k2Mu };
inline constexpr std::size_t kSumClasses = 6;

constexpr std::size_t idx(SumClass c) { return static_cast<std::size_t>(c); }
std::string_view to_string(SumClass c);

constexpr SumClass sum_class(Intensity j, Intensity k) {
  const int lo = static_cast<int>(j < k ? j : k);
  const int hi = static_cast<int>(j < k ? k : j);
  constexpr SumClass table[3][3] = {{SumClass::kO, SumClass::kNu, SumClass::kMu},
                                    {SumClass::kNu, SumClass::k2Nu, SumClass::kMuNu},
                                    {SumClass::kMu, SumClass::kMuNu, SumClass::k2Mu}};
  return table[lo][hi];
}

// Ordered (round j, round k) intensity combinations that make up a class.
std::vector<std::pair<Intensity, Intensity>> class_combos(SumClass c);

enum class CountMode { kAnalytic, kMonteCarlo };

struct PairCountTable {
  CountMode mode = CountMode::kAnalytic;
  double n_tot = 0.0;
  // Pair counts by (Alice class, Bob class), before X-basis phase sifting.
  std::array<std::array<double, kSumClasses>, kSumClasses> by_class{};
  double n_nunu_same = 0.0;  // [ν,ν]′: both vacuums in the same round
  double n_nunu_diff = 0.0;  // [ν,ν]″
  double n_x = 0.0;          // [2ν,2ν] pairs that pass the phase sift
  double m_x = 0.0;
  double m_z = 0.0;

  double n(SumClass a, SumClass b) const { return by_class[idx(a)][idx(b)]; }
  double& n(SumClass a, SumClass b) { return by_class[idx(a)][idx(b)]; }

  // Named entries in a fixed order, used for JSON/CSV output and comparisons.
  std::vector<std::pair<std::string, double>> named() const;
};

// Streaming transcription of the greedy pairing loop over kept effective rounds.
class GreedyPairer {
 public:
  explicit GreedyPairer(std::uint64_t interval) : interval_(interval) {}

  // Feed the index of the next kept effective round (strictly increasing).
  std::optional<std::pair<std::uint64_t, std::uint64_t>> push(std::uint64_t index) {
    if (has_front_ && index - front_ <= interval_) {
      has_front_ = false;
      return std::pair{front_, index};
    }
    // No front yet, or the gap exceeds the interval: this round becomes the front.
    front_ = index;
    has_front_ = true;
    return std::nullopt;
  }

 private:
  std::uint64_t interval_;
  std::uint64_t front_ = 0;
  bool has_front_ = false;
};

// Zero-based (front, rear) index pairs; a trailing unpaired front is dropped.
std::vector<std::pair<std::uint64_t, std::uint64_t>> pair_rounds(std::span<const std::uint8_t> kept,
                                                                 std::uint64_t interval);

double analytic_pairing_efficiency(double q, std::uint64_t interval);

// Mean rear-front separation of a pair, in seconds.
double mean_pairing_interval(double q, std::uint64_t interval, double clock_hz);

PairCountTable analytic_pair_counts(const ScenarioConfig& scenario, const ClickModel& clicks);

}  // namespace mpqkd
