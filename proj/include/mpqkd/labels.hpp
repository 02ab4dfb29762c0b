#pragma once

#include "mpqkd/scenario.hpp"

namespace mpqkd {

// Per-round label after the ν announcement:
// 0 neither sent ν, 1 ν with vacuum, 2 ν with signal, 3 both ν.
enum class RoundLabel : std::uint8_t { kNoDecoy = 0, kDecoyVacuum = 1, kDecoySignal = 2, kDecoyDecoy = 3 };

constexpr RoundLabel round_label(Intensity a, Intensity b) {
  const bool da = a == Intensity::kDecoy;
  const bool db = b == Intensity::kDecoy;
  if (!da && !db) return RoundLabel::kNoDecoy;
  if (da && db) return RoundLabel::kDecoyDecoy;
  const Intensity other = da ? b : a;
  return other == Intensity::kSignal ? RoundLabel::kDecoySignal : RoundLabel::kDecoyVacuum;
}

// Probability that an effective round is kept for pairing.
constexpr double save_probability(Intensity a, Intensity b, const StrategyConfig& s) {
  if (s.kind == StrategyKind::kOriginal) return 1.0;
  switch (round_label(a, b)) {
    case RoundLabel::kNoDecoy: return 1.0;
    case RoundLabel::kDecoySignal: return 0.0;
    default: return s.p_save;
  }
}

}  // namespace mpqkd
