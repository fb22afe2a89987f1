#pragma once

#include <string>
#include <vector>

#include "semvad/types.hpp"

namespace semvad {

enum class SegmenterMode : int { Semantic = 0, Traditional = 1 };

inline std::string_view to_string(SegmenterMode m) {
  return m == SegmenterMode::Semantic ? "semantic" : "traditional";
}

inline SegmenterMode segmenter_mode_from_string(std::string_view s) {
  if (s == "semantic") return SegmenterMode::Semantic;
  if (s == "traditional") return SegmenterMode::Traditional;
  throw std::invalid_argument("unknown mode: " + std::string(s) +
                              " (expected 'semantic' or 'traditional')");
}

// Tail-segmentation operating point. Defaults follow the common 10 ms frame
// shift with 300/400/700 ms silence thresholds.
struct SegmenterConfig {
  Milliseconds t_e_ms = 300;
  Milliseconds t_ne_ms = 400;
  Milliseconds t_max_ms = 700;
  TimeBase time_base{};
  SegmenterMode mode = SegmenterMode::Semantic;
  // Punctuation predictions on the last N speech frames before a silence
  // onset still count as evidence for that tail.
  FrameIndex punc_lookback_frames = 1;

  friend bool operator==(const SegmenterConfig&, const SegmenterConfig&) = default;
};

// Returns every violated invariant; empty result means the config is valid.
inline std::vector<std::string> config_errors(const SegmenterConfig& cfg) {
  std::vector<std::string> errs;
  if (cfg.time_base.frame_shift_ms <= 0)
    errs.push_back("frame_shift_ms must be positive");
  if (cfg.t_e_ms <= 0) errs.push_back("t_e_ms must be positive");
  if (cfg.t_ne_ms <= 0) errs.push_back("t_ne_ms must be positive");
  if (cfg.t_max_ms <= 0) errs.push_back("t_max_ms must be positive");
  if (!(cfg.t_e_ms <= cfg.t_ne_ms))
    errs.push_back("ordering violated: t_e_ms > t_ne_ms");
  if (!(cfg.t_ne_ms <= cfg.t_max_ms))
    errs.push_back("ordering violated: t_ne_ms > t_max_ms");
  if (cfg.time_base.frame_shift_ms > 0) {
    for (auto [name, v] : {std::pair<const char*, Milliseconds>{"t_e_ms", cfg.t_e_ms},
                           {"t_ne_ms", cfg.t_ne_ms},
                           {"t_max_ms", cfg.t_max_ms}}) {
      if (v > 0 && !cfg.time_base.on_grid(v))
        errs.push_back(std::string(name) + " (" + std::to_string(v) +
                       " ms) is off the " + std::to_string(cfg.time_base.frame_shift_ms) +
                       " ms frame grid");
    }
  }
  if (cfg.punc_lookback_frames < 0)
    errs.push_back("punc_lookback_frames must be non-negative");
  return errs;
}

// Validates and returns the config unchanged; throws listing every violation.
inline SegmenterConfig validate_config(const SegmenterConfig& cfg) {
  auto errs = config_errors(cfg);
  if (!errs.empty()) {
    std::string msg = "invalid segmenter config:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

}  // namespace semvad
