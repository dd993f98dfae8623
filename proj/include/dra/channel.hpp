#pragma once

#include <cstdint>
#include <stdexcept>

#include "dra/rng.hpp"
#include "dra/sampling.hpp"

namespace dra {

/// Classical empty/success/collision observation. Only the baseline
/// protocols may read this; the binary protocols see success/failure.
enum class TernaryFeedback { empty, success, collision };

/// Channel output for one slot. `success` is the binary view (exactly one
/// transmission); `ternary` refines failure into empty vs collision.
struct FeedbackSymbol {
  bool success = false;
  TernaryFeedback ternary = TernaryFeedback::empty;
};

inline FeedbackSymbol feedback(std::int64_t transmitted) {
  if (transmitted < 0) throw std::invalid_argument("feedback: negative transmission count");
  FeedbackSymbol fb;
  fb.success = (transmitted == 1);
  if (transmitted == 0) {
    fb.ternary = TernaryFeedback::empty;
  } else if (transmitted == 1) {
    fb.ternary = TernaryFeedback::success;
  } else {
    fb.ternary = TernaryFeedback::collision;
  }
  return fb;
}

/// Number of backlogged messages that enter the channel this slot:
/// Binomial(backlog, p), identically 0 for an empty system.
inline std::int64_t transmit(std::int64_t backlog, double p, RngStream& rng) {
  if (backlog < 0) throw std::invalid_argument("transmit: negative backlog");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("transmit: p outside [0,1]");
  if (backlog == 0) return 0;
  return sample_binomial(backlog, p, rng);
}

}  // namespace dra
