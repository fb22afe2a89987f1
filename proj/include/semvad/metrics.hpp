#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "semvad/segmenter.hpp"
#include "semvad/types.hpp"

namespace semvad {

// Fixed NIST-style detection cost weights.
inline constexpr double kDcfMissWeight = 0.75;
inline constexpr double kDcfFaWeight = 0.25;

// Frame-level detection counters; mergeable across scoring shards.
struct DcfAccumulator {
  std::uint64_t tp_frames = 0;
  std::uint64_t fn_frames = 0;
  std::uint64_t fp_frames = 0;
  std::uint64_t tn_frames = 0;

  friend bool operator==(const DcfAccumulator&, const DcfAccumulator&) = default;
};

struct DcfResult {
  double p_miss = 0.0;
  double p_fa = 0.0;
  double dcf = 0.0;
};

// Reference positive = Speech frames (Endpoint and Silence count as
// non-speech); hypothesis positive = frames inside any hypothesis segment.
inline DcfAccumulator accumulate_dcf(const std::vector<VadClass>& ref_vad,
                                     const std::vector<std::pair<FrameIndex, FrameIndex>>& hyp_segments) {
  const FrameIndex n = static_cast<FrameIndex>(ref_vad.size());
  FrameIndex prev_end = 0;
  for (const auto& [s, e] : hyp_segments) {
    if (s < 0 || e > n || s >= e)
      throw std::invalid_argument("hypothesis segment [" + std::to_string(s) + ", " +
                                  std::to_string(e) + ") out of range for " +
                                  std::to_string(n) + " frames");
    if (s < prev_end)
      throw std::invalid_argument("hypothesis segments overlap or are unsorted");
    prev_end = e;
  }
  std::vector<bool> hyp(static_cast<std::size_t>(n), false);
  for (const auto& [s, e] : hyp_segments)
    for (FrameIndex f = s; f < e; ++f) hyp[static_cast<std::size_t>(f)] = true;

  DcfAccumulator acc;
  for (FrameIndex f = 0; f < n; ++f) {
    const bool ref_pos = ref_vad[static_cast<std::size_t>(f)] == VadClass::Speech;
    const bool hyp_pos = hyp[static_cast<std::size_t>(f)];
    if (ref_pos && hyp_pos) ++acc.tp_frames;
    else if (ref_pos) ++acc.fn_frames;
    else if (hyp_pos) ++acc.fp_frames;
    else ++acc.tn_frames;
  }
  return acc;
}

inline DcfResult dcf(const DcfAccumulator& acc) {
  if (acc.tp_frames + acc.fn_frames == 0)
    throw std::domain_error("P_miss undefined: no reference speech frames");
  if (acc.tn_frames + acc.fp_frames == 0)
    throw std::domain_error("P_fa undefined: no reference non-speech frames");
  DcfResult r;
  r.p_miss = static_cast<double>(acc.fn_frames) /
             static_cast<double>(acc.tp_frames + acc.fn_frames);
  r.p_fa = static_cast<double>(acc.fp_frames) /
           static_cast<double>(acc.tn_frames + acc.fp_frames);
  r.dcf = kDcfMissWeight * r.p_miss + kDcfFaWeight * r.p_fa;
  return r;
}

inline DcfAccumulator merge(const DcfAccumulator& a, const DcfAccumulator& b) {
  auto add = [](std::uint64_t x, std::uint64_t y) {
    if (x > std::numeric_limits<std::uint64_t>::max() - y)
      throw std::overflow_error("DCF counter overflow in merge");
    return x + y;
  };
  return DcfAccumulator{add(a.tp_frames, b.tp_frames), add(a.fn_frames, b.fn_frames),
                        add(a.fp_frames, b.fp_frames), add(a.tn_frames, b.tn_frames)};
}

struct LatencySummary {
  std::size_t n_events = 0;  // events included (StreamEnd excluded)
  std::optional<double> mean_ms;
  std::optional<Milliseconds> p50_ms, p90_ms, p99_ms;
};

// Nearest-rank percentile over a sorted sample.
inline Milliseconds nearest_rank(const std::vector<Milliseconds>& sorted, double pct) {
  const auto n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted[rank - 1];
}

// Mean and percentiles of in-stream decision latencies. StreamEnd events are
// end-of-file cuts with no user-facing wait and are excluded.
inline LatencySummary latency_summary(const std::vector<SegmentationEvent>& events) {
  std::vector<Milliseconds> lat;
  for (const auto& ev : events)
    if (ev.trigger != TriggerKind::StreamEnd) lat.push_back(ev.latency_ms);
  LatencySummary s;
  s.n_events = lat.size();
  if (lat.empty()) return s;
  double sum = 0.0;
  for (Milliseconds v : lat) sum += static_cast<double>(v);
  s.mean_ms = sum / static_cast<double>(lat.size());
  std::sort(lat.begin(), lat.end());
  s.p50_ms = nearest_rank(lat, 50.0);
  s.p90_ms = nearest_rank(lat, 90.0);
  s.p99_ms = nearest_rank(lat, 99.0);
  return s;
}

inline std::map<TriggerKind, double> trigger_proportions(
    const std::vector<SegmentationEvent>& events) {
  if (events.empty())
    throw std::invalid_argument("trigger_proportions: no events");
  std::map<TriggerKind, double> counts;
  for (const auto& ev : events) counts[ev.trigger] += 1.0;
  for (auto& [_, v] : counts) v /= static_cast<double>(events.size());
  return counts;
}

// Relative latency reduction of `latency_ms` against `baseline_ms`, in
// percent.
inline double relative_latency_reduction_pct(double baseline_ms, double latency_ms) {
  if (baseline_ms <= 0.0) throw std::invalid_argument("baseline latency must be positive");
  return (baseline_ms - latency_ms) / baseline_ms * 100.0;
}

struct MetricsReport {
  LatencySummary latency;
  std::optional<DcfResult> detection;  // absent when no reference was scored
  std::map<TriggerKind, double> trigger_proportions;
  std::size_t n_events = 0;  // all events, StreamEnd included
};

inline MetricsReport make_report(const std::vector<SegmentationEvent>& events,
                                 const std::optional<DcfAccumulator>& acc) {
  MetricsReport r;
  r.latency = latency_summary(events);
  r.n_events = events.size();
  if (!events.empty()) r.trigger_proportions = trigger_proportions(events);
  if (acc) r.detection = dcf(*acc);
  return r;
}

}  // namespace semvad
