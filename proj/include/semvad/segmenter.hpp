#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "semvad/config.hpp"
#include "semvad/posterior.hpp"
#include "semvad/types.hpp"

namespace semvad {

// One emitted segment boundary. The boundary itself sits at the silence-run
// onset; latency_ms is the tail silence observed before the decision fired.
struct SegmentationEvent {
  FrameIndex segment_start_frame = 0;
  FrameIndex segment_end_frame = 0;  // exclusive, = silence-run onset
  TriggerKind trigger = TriggerKind::MaxSilence;
  FrameIndex decision_frame = 0;
  Milliseconds latency_ms = 0;

  friend bool operator==(const SegmentationEvent&, const SegmentationEvent&) = default;
};

inline std::pair<VadClass, PuncClass> classify_frame(const FramePosterior& fp) {
  validate_posterior(fp);
  return {static_cast<VadClass>(argmax3(fp.vad)), static_cast<PuncClass>(argmax3(fp.punc))};
}

// EPunc evidence overrides NEPunc overrides None; a weaker prediction never
// downgrades stronger evidence already seen in the same tail.
inline PuncClass strongest_punc(PuncClass a, PuncClass b) {
  auto rank = [](PuncClass c) {
    switch (c) {
      case PuncClass::EPunc: return 2;
      case PuncClass::NEPunc: return 1;
      case PuncClass::None: return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

// Streaming tail-segmentation state machine. One engine per stream, frames
// strictly in order, flush() exactly once at end of stream.
//
// On each non-speech frame inside a segment the conditions are evaluated in
// priority order (most semantic first):
//   (1) the frame classifies as Endpoint;
//   (2) E-punc evidence and the tail silence has reached t_E;
//   (3) NE-punc evidence and the tail silence has reached t_NE;
//   (4) the tail silence has reached t_Max.
// Traditional mode evaluates only (4) and treats Endpoint frames as Silence.
//
// "Reached" counts fully elapsed silence: a timer with threshold T fires on
// the frame arriving after T ms of tail silence, so the event's latency is
// exactly the threshold (MaxSilence latency is always t_max_ms).
class SegmenterEngine {
 public:
  explicit SegmenterEngine(const SegmenterConfig& cfg)
      : cfg_(validate_config(cfg)),
        frames_e_(frames_for(cfg.t_e_ms, cfg.time_base)),
        frames_ne_(frames_for(cfg.t_ne_ms, cfg.time_base)),
        frames_max_(frames_for(cfg.t_max_ms, cfg.time_base)) {}

  const SegmenterConfig& config() const { return cfg_; }
  FrameIndex current_frame() const { return current_frame_; }
  bool flushed() const { return flushed_; }

  std::optional<SegmentationEvent> push_frame(const FramePosterior& fp) {
    if (flushed_) throw std::logic_error("push_frame after flush");
    if (fp.frame_index != current_frame_)
      throw std::invalid_argument("out-of-order frame index " +
                                  std::to_string(fp.frame_index) + ", expected " +
                                  std::to_string(current_frame_));
    auto [vad, punc] = classify_frame(fp);
    const bool semantic = cfg_.mode == SegmenterMode::Semantic;
    if (!semantic && vad == VadClass::Endpoint) vad = VadClass::Silence;

    std::optional<SegmentationEvent> event;
    if (vad == VadClass::Speech) {
      if (!in_segment_) {
        in_segment_ = true;
        segment_start_ = current_frame_;
      }
      tail_frames_ = 0;
      pending_punc_ = PuncClass::None;
      if (semantic && cfg_.punc_lookback_frames > 0) {
        recent_speech_punc_.push_back(punc);
        while (static_cast<FrameIndex>(recent_speech_punc_.size()) > cfg_.punc_lookback_frames)
          recent_speech_punc_.pop_front();
      }
    } else if (in_segment_) {
      if (tail_frames_ == 0) {
        silence_onset_ = current_frame_;
        for (PuncClass c : recent_speech_punc_)
          pending_punc_ = strongest_punc(pending_punc_, c);
      }
      ++tail_frames_;
      if (semantic) pending_punc_ = strongest_punc(pending_punc_, punc);

      // Tail silence fully elapsed before this frame.
      const FrameIndex elapsed = tail_frames_ - 1;
      std::optional<TriggerKind> trigger;
      if (semantic && vad == VadClass::Endpoint)
        trigger = TriggerKind::Endpoint;
      else if (semantic && pending_punc_ == PuncClass::EPunc && elapsed >= frames_e_)
        trigger = TriggerKind::EPuncSilence;
      else if (semantic && pending_punc_ == PuncClass::NEPunc && elapsed >= frames_ne_)
        trigger = TriggerKind::NEPuncSilence;
      else if (elapsed >= frames_max_)
        trigger = TriggerKind::MaxSilence;

      if (trigger) {
        event = SegmentationEvent{
            segment_start_, silence_onset_, *trigger, current_frame_,
            (current_frame_ - silence_onset_) * cfg_.time_base.frame_shift_ms};
        close_segment();
      }
    }
    ++current_frame_;
    return event;
  }

  // Terminal. Closes a still-open segment with a StreamEnd event.
  std::optional<SegmentationEvent> flush() {
    if (flushed_) throw std::logic_error("double flush");
    flushed_ = true;
    if (!in_segment_) return std::nullopt;
    const FrameIndex end = tail_frames_ > 0 ? silence_onset_ : current_frame_;
    SegmentationEvent event{segment_start_, end, TriggerKind::StreamEnd, current_frame_,
                            (current_frame_ - end) * cfg_.time_base.frame_shift_ms};
    close_segment();
    return event;
  }

 private:
  void close_segment() {
    in_segment_ = false;
    tail_frames_ = 0;
    pending_punc_ = PuncClass::None;
    recent_speech_punc_.clear();
  }

  SegmenterConfig cfg_;
  FrameIndex frames_e_, frames_ne_, frames_max_;
  FrameIndex current_frame_ = 0;
  bool in_segment_ = false;
  bool flushed_ = false;
  FrameIndex segment_start_ = 0;
  FrameIndex silence_onset_ = 0;
  FrameIndex tail_frames_ = 0;
  PuncClass pending_punc_ = PuncClass::None;
  std::deque<PuncClass> recent_speech_punc_;
};

// Batch convenience; exactly push_frame over all frames followed by flush.
inline std::vector<SegmentationEvent> segment_stream(
    const std::vector<FramePosterior>& frames, const SegmenterConfig& cfg) {
  SegmenterEngine engine(cfg);
  std::vector<SegmentationEvent> events;
  for (const auto& fp : frames)
    if (auto ev = engine.push_frame(fp)) events.push_back(*ev);
  if (auto ev = engine.flush()) events.push_back(*ev);
  return events;
}

// Optional offline majority-vote smoothing over classified frames. Not part
// of the streaming path; window must be odd.
inline std::vector<VadClass> majority_vote_smooth(const std::vector<VadClass>& classes,
                                                  FrameIndex window) {
  if (window <= 0 || window % 2 == 0)
    throw std::invalid_argument("majority vote window must be odd and positive");
  if (window == 1) return classes;
  const FrameIndex n = static_cast<FrameIndex>(classes.size());
  const FrameIndex half = window / 2;
  std::vector<VadClass> out(classes.size());
  for (FrameIndex i = 0; i < n; ++i) {
    int counts[3] = {0, 0, 0};
    for (FrameIndex j = std::max<FrameIndex>(0, i - half);
         j <= std::min<FrameIndex>(n - 1, i + half); ++j)
      ++counts[static_cast<int>(classes[static_cast<std::size_t>(j)])];
    int best = 0;
    for (int c = 1; c < 3; ++c)
      if (counts[c] > counts[best]) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<VadClass>(best);
  }
  return out;
}

}  // namespace semvad
