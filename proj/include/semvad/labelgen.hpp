#pragma once

#include <map>

#include "semvad/alignment.hpp"
#include "semvad/config.hpp"
#include "semvad/types.hpp"

namespace semvad {

// VAD training targets. Speech frames are labeled Speech. A silence run whose
// preceding speech run carries punctuation gets Endpoint labels from t_E
// (E-punc) or t_NE (NE-punc) into the run until the next speech begins;
// trailing stream silence is treated the same way. Runs shorter than their
// threshold stay all Silence, as does unpunctuated or leading silence.
inline std::vector<VadClass> derive_vad_labels(const Alignment& a, const SegmenterConfig& cfg) {
  validate_alignment(a);
  validate_config(cfg);
  std::vector<VadClass> out(static_cast<std::size_t>(a.total_frames), VadClass::Silence);
  for (const auto& iv : a.speech_intervals)
    for (FrameIndex f = iv.start_frame; f < iv.end_frame; ++f)
      out[static_cast<std::size_t>(f)] = VadClass::Speech;

  for (std::size_t i = 0; i < a.speech_intervals.size(); ++i) {
    const auto& iv = a.speech_intervals[i];
    auto punc = punc_at_interval_end(a, iv.end_frame);
    if (!punc) continue;
    FrameIndex run_start = iv.end_frame;
    FrameIndex run_end = (i + 1 < a.speech_intervals.size())
                             ? a.speech_intervals[i + 1].start_frame
                             : a.total_frames;
    FrameIndex threshold =
        frames_for(*punc == PuncClass::EPunc ? cfg.t_e_ms : cfg.t_ne_ms, cfg.time_base);
    for (FrameIndex f = run_start + threshold; f < run_end; ++f)
      out[static_cast<std::size_t>(f)] = VadClass::Endpoint;
  }
  return out;
}

// Punctuation training targets: a symmetric window of punc_lookback_frames
// around each event's speech-run end frame, clipped to the containing runs and
// to the stream bounds.
inline std::vector<PuncClass> derive_punc_labels(const Alignment& a, const SegmenterConfig& cfg) {
  validate_alignment(a);
  validate_config(cfg);
  std::vector<PuncClass> out(static_cast<std::size_t>(a.total_frames), PuncClass::None);
  for (std::size_t i = 0; i < a.speech_intervals.size(); ++i) {
    const auto& iv = a.speech_intervals[i];
    auto punc = punc_at_interval_end(a, iv.end_frame);
    if (!punc) continue;
    FrameIndex run_end = (i + 1 < a.speech_intervals.size())
                             ? a.speech_intervals[i + 1].start_frame
                             : a.total_frames;
    FrameIndex lo = std::max({iv.end_frame - cfg.punc_lookback_frames, iv.start_frame,
                              FrameIndex{0}});
    FrameIndex hi = std::min({iv.end_frame + cfg.punc_lookback_frames, run_end - 1,
                              a.total_frames - 1});
    for (FrameIndex f = lo; f <= hi; ++f)
      out[static_cast<std::size_t>(f)] = *punc;
  }
  return out;
}

inline FrameLabels derive_labels(const Alignment& a, const SegmenterConfig& cfg) {
  return FrameLabels{derive_vad_labels(a, cfg), derive_punc_labels(a, cfg)};
}

struct LabelDistribution {
  std::map<VadClass, double> vad;
  std::map<PuncClass, double> punc;
};

// Per-class frame fractions; the three classes are disjoint so each map sums
// to 1.
inline LabelDistribution label_distribution(const FrameLabels& labels) {
  if (labels.vad.empty() || labels.vad.size() != labels.punc.size())
    throw std::invalid_argument("label_distribution: labels empty or length mismatch");
  const double n = static_cast<double>(labels.vad.size());
  LabelDistribution d;
  d.vad = {{VadClass::Speech, 0.0}, {VadClass::Silence, 0.0}, {VadClass::Endpoint, 0.0}};
  d.punc = {{PuncClass::None, 0.0}, {PuncClass::EPunc, 0.0}, {PuncClass::NEPunc, 0.0}};
  for (VadClass c : labels.vad) d.vad[c] += 1.0;
  for (PuncClass c : labels.punc) d.punc[c] += 1.0;
  for (auto& [_, v] : d.vad) v /= n;
  for (auto& [_, v] : d.punc) v /= n;
  return d;
}

}  // namespace semvad
