#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semvad {

// All time is integer milliseconds on a fixed frame grid; no floating-point
// time anywhere in the decision path.
using FrameIndex = std::int64_t;
using Milliseconds = std::int64_t;

// Frame grid. Durations are only meaningful when they sit exactly on the grid.
struct TimeBase {
  Milliseconds frame_shift_ms = 10;

  bool valid() const { return frame_shift_ms > 0; }
  bool on_grid(Milliseconds duration_ms) const {
    return frame_shift_ms > 0 && duration_ms % frame_shift_ms == 0;
  }

  friend bool operator==(const TimeBase&, const TimeBase&) = default;
};

// Number of frames spanned by a grid-aligned duration.
inline FrameIndex frames_for(Milliseconds duration_ms, const TimeBase& tb) {
  if (!tb.valid())
    throw std::invalid_argument("TimeBase: frame_shift_ms must be positive");
  if (duration_ms % tb.frame_shift_ms != 0)
    throw std::invalid_argument(
        "duration " + std::to_string(duration_ms) + " ms is not a multiple of frame shift " +
        std::to_string(tb.frame_shift_ms) + " ms");
  return duration_ms / tb.frame_shift_ms;
}

enum class PuncClass : int { None = 0, EPunc = 1, NEPunc = 2 };
enum class VadClass : int { Speech = 0, Silence = 1, Endpoint = 2 };

enum class TriggerKind : int {
  Endpoint = 0,      // an endpoint frame was classified in the tail silence
  EPuncSilence = 1,  // ending punctuation + tail silence reached t_E
  NEPuncSilence = 2, // non-ending punctuation + tail silence reached t_NE
  MaxSilence = 3,    // tail silence reached t_Max
  StreamEnd = 4,     // open segment closed at end of stream
};

inline PuncClass punc_class_from_int(int v) {
  if (v < 0 || v > 2) throw std::invalid_argument("punctuation class out of range: " + std::to_string(v));
  return static_cast<PuncClass>(v);
}

inline VadClass vad_class_from_int(int v) {
  if (v < 0 || v > 2) throw std::invalid_argument("VAD class out of range: " + std::to_string(v));
  return static_cast<VadClass>(v);
}

inline std::string_view to_string(PuncClass c) {
  switch (c) {
    case PuncClass::None: return "None";
    case PuncClass::EPunc: return "EPunc";
    case PuncClass::NEPunc: return "NEPunc";
  }
  throw std::logic_error("bad PuncClass");
}

inline std::string_view to_string(VadClass c) {
  switch (c) {
    case VadClass::Speech: return "Speech";
    case VadClass::Silence: return "Silence";
    case VadClass::Endpoint: return "Endpoint";
  }
  throw std::logic_error("bad VadClass");
}

inline std::string_view to_string(TriggerKind k) {
  switch (k) {
    case TriggerKind::Endpoint: return "Endpoint";
    case TriggerKind::EPuncSilence: return "EPuncSilence";
    case TriggerKind::NEPuncSilence: return "NEPuncSilence";
    case TriggerKind::MaxSilence: return "MaxSilence";
    case TriggerKind::StreamEnd: return "StreamEnd";
  }
  throw std::logic_error("bad TriggerKind");
}

inline TriggerKind trigger_kind_from_string(std::string_view s) {
  if (s == "Endpoint") return TriggerKind::Endpoint;
  if (s == "EPuncSilence") return TriggerKind::EPuncSilence;
  if (s == "NEPuncSilence") return TriggerKind::NEPuncSilence;
  if (s == "MaxSilence") return TriggerKind::MaxSilence;
  if (s == "StreamEnd") return TriggerKind::StreamEnd;
  throw std::invalid_argument("unknown trigger kind: " + std::string(s));
}

}  // namespace semvad
