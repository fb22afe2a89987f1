#pragma once

#include <cmath>
#include <vector>

#include "semvad/posterior.hpp"
#include "semvad/types.hpp"

namespace semvad {

inline constexpr double kLogProbFloor = 1e-12;

// Weights of the joint objective; the VAD head gets the remaining
// 1 - mu - lambda.
struct LossWeights {
  double mu = 0.2;
  double lambda = 0.2;
};

inline void validate_weights(const LossWeights& w) {
  if (!(w.mu >= 0.0 && w.mu <= 1.0) || !(w.lambda >= 0.0 && w.lambda <= 1.0))
    throw std::invalid_argument("loss weights must be in [0, 1]");
  if (w.mu + w.lambda > 1.0)
    throw std::invalid_argument("mu + lambda must not exceed 1");
}

// Mean per-frame cross-entropy, probabilities floored at kLogProbFloor.
inline double frame_cross_entropy(const std::vector<Prob3>& posteriors,
                                  const std::vector<int>& labels) {
  if (posteriors.size() != labels.size())
    throw std::invalid_argument("frame_cross_entropy: length mismatch (" +
                                std::to_string(posteriors.size()) + " posteriors vs " +
                                std::to_string(labels.size()) + " labels)");
  if (posteriors.empty())
    throw std::invalid_argument("frame_cross_entropy: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    if (!is_distribution(posteriors[i]))
      throw std::invalid_argument("frame_cross_entropy: invalid posterior at frame " +
                                  std::to_string(i));
    const int label = labels[i];
    if (label < 0 || label > 2)
      throw std::invalid_argument("frame_cross_entropy: label out of range at frame " +
                                  std::to_string(i));
    sum += -std::log(std::max(posteriors[i][static_cast<std::size_t>(label)], kLogProbFloor));
  }
  return sum / static_cast<double>(posteriors.size());
}

// L = mu * L_punc + lambda * L_asr + (1 - mu - lambda) * L_vad.
// L_asr is an externally supplied scalar.
inline double joint_loss(double l_punc, double l_asr, double l_vad, const LossWeights& w) {
  validate_weights(w);
  if (!std::isfinite(l_punc) || !std::isfinite(l_asr) || !std::isfinite(l_vad))
    throw std::invalid_argument("joint_loss: component losses must be finite");
  return w.mu * l_punc + w.lambda * l_asr + (1.0 - w.mu - w.lambda) * l_vad;
}

}  // namespace semvad
