#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "semvad/types.hpp"

namespace semvad {

inline constexpr double kPosteriorSumTolerance = 1e-6;

using Prob3 = std::array<double, 3>;

inline bool is_distribution(const Prob3& p, double tol = kPosteriorSumTolerance) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::fabs(sum - 1.0) <= tol;
}

// One frame's posteriors: a 3-class VAD distribution and a 3-class
// punctuation distribution on the shared frame grid.
struct FramePosterior {
  FrameIndex frame_index = 0;
  Prob3 vad{};
  Prob3 punc{};

  friend bool operator==(const FramePosterior&, const FramePosterior&) = default;
};

// Out-of-tolerance posteriors are rejected, never renormalized.
inline void validate_posterior(const FramePosterior& fp) {
  if (fp.frame_index < 0)
    throw std::invalid_argument("frame_index must be non-negative");
  if (!is_distribution(fp.vad))
    throw std::invalid_argument("vad posterior at frame " +
                                std::to_string(fp.frame_index) +
                                " is not a probability distribution");
  if (!is_distribution(fp.punc))
    throw std::invalid_argument("punc posterior at frame " +
                                std::to_string(fp.frame_index) +
                                " is not a probability distribution");
}

// Argmax with ties broken toward the lower class index.
inline int argmax3(const Prob3& p) {
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (p[i] > p[best]) best = i;
  return best;
}

}  // namespace semvad
