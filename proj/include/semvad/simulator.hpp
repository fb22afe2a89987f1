#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "semvad/alignment.hpp"
#include "semvad/config.hpp"
#include "semvad/labelgen.hpp"
#include "semvad/segmenter.hpp"
#include "semvad/types.hpp"

namespace semvad {

// Synthetic corpus recipe: each utterance is one speech run followed by one
// tail silence run, concatenated into a single stream.
struct ScenarioSpec {
  std::int64_t n_utterances = 1;
  Milliseconds speech_min_ms = 1000;
  Milliseconds speech_max_ms = 3000;
  Milliseconds tail_min_ms = 800;
  Milliseconds tail_max_ms = 1500;
  double e_punc_fraction = 1.0;
  double ne_punc_fraction = 0.0;
  double none_fraction = 0.0;
  // Probability that an endpoint-labeled frame survives into the posterior
  // stream (non-survivors read as Silence).
  double endpoint_model_accuracy = 1.0;
  // Probability that a punctuation event is dropped from the posterior
  // stream, independently per event.
  double punc_drop_probability = 0.0;
  std::uint64_t seed = 0;
};

inline void validate_spec(const ScenarioSpec& spec) {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (spec.n_utterances <= 0)
    throw std::invalid_argument("scenario: n_utterances must be positive");
  if (spec.speech_min_ms <= 0 || spec.speech_max_ms < spec.speech_min_ms)
    throw std::invalid_argument("scenario: bad speech duration range");
  if (spec.tail_min_ms <= 0 || spec.tail_max_ms < spec.tail_min_ms)
    throw std::invalid_argument("scenario: bad tail silence range");
  if (!in01(spec.e_punc_fraction) || !in01(spec.ne_punc_fraction) || !in01(spec.none_fraction))
    throw std::invalid_argument("scenario: mix fractions must be in [0, 1]");
  const double sum = spec.e_punc_fraction + spec.ne_punc_fraction + spec.none_fraction;
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("scenario: mix fractions sum to " + std::to_string(sum) +
                                ", expected 1");
  if (!in01(spec.endpoint_model_accuracy))
    throw std::invalid_argument("scenario: endpoint_model_accuracy must be in [0, 1]");
  if (!in01(spec.punc_drop_probability))
    throw std::invalid_argument("scenario: punc_drop_probability must be in [0, 1]");
}

struct GeneratedScenario {
  Alignment alignment;
  FrameLabels labels;                       // ground truth, never degraded
  std::vector<FramePosterior> posteriors;   // oracle one-hot, then degraded
  // Punctuated utterances whose tail is shorter than the punctuation's
  // silence threshold; allowed, but they cannot trigger semantically.
  std::int64_t n_short_punctuated_tails = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t utterance_seed(std::uint64_t seed, std::int64_t index) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

// Largest-remainder apportionment of n utterances to the three mix classes.
inline std::vector<PuncClass> apportion_mix(const ScenarioSpec& spec, std::mt19937_64& rng) {
  const double fracs[3] = {spec.e_punc_fraction, spec.ne_punc_fraction, spec.none_fraction};
  const PuncClass classes[3] = {PuncClass::EPunc, PuncClass::NEPunc, PuncClass::None};
  std::int64_t counts[3];
  double remainders[3];
  std::int64_t assigned = 0;
  for (int c = 0; c < 3; ++c) {
    const double exact = fracs[c] * static_cast<double>(spec.n_utterances);
    counts[c] = static_cast<std::int64_t>(std::floor(exact));
    remainders[c] = exact - std::floor(exact);
    assigned += counts[c];
  }
  while (assigned < spec.n_utterances) {
    int best = 0;
    for (int c = 1; c < 3; ++c)
      if (remainders[c] > remainders[best]) best = c;
    ++counts[best];
    remainders[best] = -1.0;
    ++assigned;
  }
  std::vector<PuncClass> mix;
  mix.reserve(static_cast<std::size_t>(spec.n_utterances));
  for (int c = 0; c < 3; ++c)
    mix.insert(mix.end(), static_cast<std::size_t>(counts[c]), classes[c]);
  std::shuffle(mix.begin(), mix.end(), rng);
  return mix;
}

inline Prob3 one_hot(int index) {
  Prob3 p{0.0, 0.0, 0.0};
  p[static_cast<std::size_t>(index)] = 1.0;
  return p;
}

}  // namespace detail

// Deterministic under a fixed seed; utterances use per-utterance derived
// seeds so generation is order-independent across utterances.
inline GeneratedScenario generate(const ScenarioSpec& spec, const SegmenterConfig& cfg) {
  validate_spec(spec);
  validate_config(cfg);
  const Milliseconds shift = cfg.time_base.frame_shift_ms;
  auto frame_range = [&](Milliseconds lo_ms, Milliseconds hi_ms) {
    const FrameIndex lo = (lo_ms + shift - 1) / shift;  // ceil
    const FrameIndex hi = hi_ms / shift;                // floor
    if (lo > hi || lo < 1)
      throw std::invalid_argument("scenario: duration range [" + std::to_string(lo_ms) +
                                  ", " + std::to_string(hi_ms) +
                                  "] ms contains no whole positive frame count");
    return std::pair<FrameIndex, FrameIndex>{lo, hi};
  };
  const auto speech_range = frame_range(spec.speech_min_ms, spec.speech_max_ms);
  const auto tail_range = frame_range(spec.tail_min_ms, spec.tail_max_ms);

  std::mt19937_64 mix_rng(detail::splitmix64(spec.seed));
  const auto mix = detail::apportion_mix(spec, mix_rng);

  GeneratedScenario g;
  std::vector<bool> event_dropped;
  FrameIndex cursor = 0;
  for (std::int64_t i = 0; i < spec.n_utterances; ++i) {
    std::mt19937_64 rng(detail::utterance_seed(spec.seed, i));
    const FrameIndex speech_frames =
        std::uniform_int_distribution<FrameIndex>(speech_range.first, speech_range.second)(rng);
    const FrameIndex tail_frames =
        std::uniform_int_distribution<FrameIndex>(tail_range.first, tail_range.second)(rng);
    const PuncClass punc = mix[static_cast<std::size_t>(i)];

    g.alignment.speech_intervals.push_back({cursor, cursor + speech_frames});
    if (punc != PuncClass::None) {
      g.alignment.punc_events.push_back({cursor + speech_frames, punc});
      const Milliseconds threshold =
          punc == PuncClass::EPunc ? cfg.t_e_ms : cfg.t_ne_ms;
      if (tail_frames * shift < threshold) ++g.n_short_punctuated_tails;
      event_dropped.push_back(
          std::uniform_real_distribution<double>(0.0, 1.0)(rng) < spec.punc_drop_probability);
    }
    cursor += speech_frames + tail_frames;
  }
  g.alignment.total_frames = cursor;
  g.labels = derive_labels(g.alignment, cfg);

  // Punctuation posteriors follow the labels minus the dropped events.
  std::vector<PuncClass> punc_stream = g.labels.punc;
  {
    Alignment kept = g.alignment;
    kept.punc_events.clear();
    for (std::size_t e = 0; e < g.alignment.punc_events.size(); ++e)
      if (!event_dropped[e]) kept.punc_events.push_back(g.alignment.punc_events[e]);
    if (kept.punc_events.size() != g.alignment.punc_events.size())
      punc_stream = derive_punc_labels(kept, cfg);
  }

  g.posteriors.reserve(static_cast<std::size_t>(g.alignment.total_frames));
  std::mt19937_64 flip_rng(detail::splitmix64(spec.seed ^ 0xE9D1F4A6C3B5280FULL));
  for (FrameIndex f = 0; f < g.alignment.total_frames; ++f) {
    VadClass v = g.labels.vad[static_cast<std::size_t>(f)];
    if (v == VadClass::Endpoint) {
      // Draw unconditionally so the flip pattern is comparable across
      // accuracy settings at a fixed seed.
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(flip_rng);
      if (u >= spec.endpoint_model_accuracy) v = VadClass::Silence;
    }
    g.posteriors.push_back(FramePosterior{
        f, detail::one_hot(static_cast<int>(v)),
        detail::one_hot(static_cast<int>(punc_stream[static_cast<std::size_t>(f)]))});
  }
  return g;
}

// Offline differential oracle: computes each segment's trigger and latency
// arithmetically from the alignment, with no incremental state. Matches the
// streaming engine on undegraded (oracle) posteriors.
inline std::vector<SegmentationEvent> oracle_segment(const Alignment& a,
                                                     const SegmenterConfig& cfg) {
  validate_alignment(a);
  validate_config(cfg);
  const Milliseconds shift = cfg.time_base.frame_shift_ms;
  const FrameIndex frames_max = frames_for(cfg.t_max_ms, cfg.time_base);
  const bool semantic = cfg.mode == SegmenterMode::Semantic;

  std::vector<SegmentationEvent> events;
  bool open = false;
  FrameIndex segment_start = 0;
  FrameIndex last_run_start = a.total_frames;
  for (std::size_t i = 0; i < a.speech_intervals.size(); ++i) {
    const auto& iv = a.speech_intervals[i];
    if (!open) {
      open = true;
      segment_start = iv.start_frame;
    }
    const FrameIndex run_start = iv.end_frame;
    const FrameIndex run_end = (i + 1 < a.speech_intervals.size())
                                   ? a.speech_intervals[i + 1].start_frame
                                   : a.total_frames;
    const FrameIndex run_len = run_end - run_start;
    last_run_start = run_start;

    std::optional<SegmentationEvent> fired;
    const auto punc = punc_at_interval_end(a, iv.end_frame);
    if (semantic && punc) {
      // Such a run carries endpoint frames from its threshold onward, so the
      // endpoint condition outranks the punctuation timer at the same frame.
      const FrameIndex thr =
          frames_for(*punc == PuncClass::EPunc ? cfg.t_e_ms : cfg.t_ne_ms, cfg.time_base);
      if (run_len > thr)
        fired = SegmentationEvent{segment_start, run_start, TriggerKind::Endpoint,
                                  run_start + thr, thr * shift};
    }
    if (!fired && run_len > frames_max)
      fired = SegmentationEvent{segment_start, run_start, TriggerKind::MaxSilence,
                                run_start + frames_max, frames_max * shift};
    if (fired) {
      events.push_back(*fired);
      open = false;
    }
    // Otherwise the run is too short to decide on; it merges into the next
    // segment (or is closed at stream end).
  }
  if (open) {
    const FrameIndex end = last_run_start;  // == total_frames when mid-speech
    events.push_back(SegmentationEvent{segment_start, end, TriggerKind::StreamEnd,
                                       a.total_frames, (a.total_frames - end) * shift});
  }
  return events;
}

}  // namespace semvad
