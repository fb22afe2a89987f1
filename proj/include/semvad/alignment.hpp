#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "semvad/types.hpp"

namespace semvad {

// Half-open [start_frame, end_frame) speech interval.
struct SpeechInterval {
  FrameIndex start_frame = 0;
  FrameIndex end_frame = 0;

  friend bool operator==(const SpeechInterval&, const SpeechInterval&) = default;
};

// A punctuation event attached to the end of a speech run. The frame equals
// the end_frame of its speech interval (the first frame after the speech).
struct PuncEvent {
  FrameIndex frame = 0;
  PuncClass punc = PuncClass::EPunc;

  friend bool operator==(const PuncEvent&, const PuncEvent&) = default;
};

// Ground truth for one stream: speech/silence intervals plus timestamped
// punctuation events.
struct Alignment {
  FrameIndex total_frames = 0;
  std::vector<SpeechInterval> speech_intervals;
  std::vector<PuncEvent> punc_events;

  friend bool operator==(const Alignment&, const Alignment&) = default;
};

inline void validate_alignment(const Alignment& a) {
  if (a.total_frames <= 0)
    throw std::invalid_argument("alignment: total_frames must be positive");
  FrameIndex prev_end = 0;
  bool first = true;
  for (const auto& iv : a.speech_intervals) {
    if (iv.start_frame < 0 || iv.end_frame > a.total_frames || iv.start_frame >= iv.end_frame)
      throw std::invalid_argument("alignment: bad speech interval [" +
                                  std::to_string(iv.start_frame) + ", " +
                                  std::to_string(iv.end_frame) + ")");
    if (!first && iv.start_frame < prev_end)
      throw std::invalid_argument("alignment: speech intervals overlap or are unsorted");
    prev_end = iv.end_frame;
    first = false;
  }
  // Punctuation attaches to the end of a speech run; anything else is
  // rejected rather than snapped.
  std::vector<FrameIndex> seen_ends;
  for (const auto& ev : a.punc_events) {
    if (ev.punc == PuncClass::None)
      throw std::invalid_argument("alignment: punctuation event with class None");
    bool matches = std::any_of(a.speech_intervals.begin(), a.speech_intervals.end(),
                               [&](const SpeechInterval& iv) { return iv.end_frame == ev.frame; });
    if (!matches)
      throw std::invalid_argument("alignment: punctuation event at frame " +
                                  std::to_string(ev.frame) +
                                  " does not coincide with a speech-interval end");
    if (std::find(seen_ends.begin(), seen_ends.end(), ev.frame) != seen_ends.end())
      throw std::invalid_argument("alignment: multiple punctuation events for the speech "
                                  "interval ending at frame " + std::to_string(ev.frame));
    seen_ends.push_back(ev.frame);
  }
}

// Punctuation event attached to the interval ending at end_frame, if any.
inline std::optional<PuncClass> punc_at_interval_end(const Alignment& a, FrameIndex end_frame) {
  for (const auto& ev : a.punc_events)
    if (ev.frame == end_frame) return ev.punc;
  return std::nullopt;
}

// Per-frame training targets for one stream.
struct FrameLabels {
  std::vector<VadClass> vad;
  std::vector<PuncClass> punc;

  friend bool operator==(const FrameLabels&, const FrameLabels&) = default;
};

}  // namespace semvad
