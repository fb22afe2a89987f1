#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semvad/alignment.hpp"
#include "semvad/config.hpp"
#include "semvad/metrics.hpp"
#include "semvad/posterior.hpp"
#include "semvad/segmenter.hpp"
#include "semvad/simulator.hpp"

namespace semvad::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

// Reals in the posterior format carry 9 significant digits.
inline std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace detail

// ---- posterior stream: one JSON record per line -------------------------

inline std::string posterior_line(const FramePosterior& fp) {
  std::string s = "{\"t\":" + std::to_string(fp.frame_index) + ",\"vad\":[";
  for (int i = 0; i < 3; ++i)
    s += (i ? "," : "") + detail::fmt_real(fp.vad[static_cast<std::size_t>(i)]);
  s += "],\"punc\":[";
  for (int i = 0; i < 3; ++i)
    s += (i ? "," : "") + detail::fmt_real(fp.punc[static_cast<std::size_t>(i)]);
  s += "]}";
  return s;
}

inline void write_posteriors(const std::string& path, const std::vector<FramePosterior>& frames) {
  auto out = detail::open_out(path);
  for (const auto& fp : frames) out << posterior_line(fp) << '\n';
}

inline std::vector<FramePosterior> read_posteriors(const std::string& path) {
  auto in = detail::open_in(path);
  std::vector<FramePosterior> frames;
  std::string line;
  FrameIndex expected = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    FramePosterior fp;
    fp.frame_index = j.at("t").get<FrameIndex>();
    const auto vad = j.at("vad");
    const auto punc = j.at("punc");
    if (vad.size() != 3 || punc.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": vad/punc must have exactly 3 entries");
    for (std::size_t i = 0; i < 3; ++i) {
      fp.vad[i] = vad[i].get<double>();
      fp.punc[i] = punc[i].get<double>();
    }
    if (fp.frame_index != expected)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": frame index " + std::to_string(fp.frame_index) +
                               " out of order, expected " + std::to_string(expected));
    validate_posterior(fp);
    ++expected;
    frames.push_back(fp);
  }
  return frames;
}

// ---- alignment: single JSON document -------------------------------------

inline json alignment_to_json(const Alignment& a, const TimeBase& tb) {
  json intervals = json::array();
  for (const auto& iv : a.speech_intervals)
    intervals.push_back({iv.start_frame, iv.end_frame});
  json events = json::array();
  for (const auto& ev : a.punc_events)
    events.push_back({ev.frame, static_cast<int>(ev.punc)});
  return json{{"frame_shift_ms", tb.frame_shift_ms},
              {"total_frames", a.total_frames},
              {"speech_intervals", intervals},
              {"punc_events", events}};
}

inline std::pair<Alignment, TimeBase> alignment_from_json(const json& j) {
  Alignment a;
  TimeBase tb{j.at("frame_shift_ms").get<Milliseconds>()};
  a.total_frames = j.at("total_frames").get<FrameIndex>();
  for (const auto& iv : j.at("speech_intervals"))
    a.speech_intervals.push_back({iv.at(0).get<FrameIndex>(), iv.at(1).get<FrameIndex>()});
  for (const auto& ev : j.at("punc_events"))
    a.punc_events.push_back({ev.at(0).get<FrameIndex>(),
                             punc_class_from_int(ev.at(1).get<int>())});
  validate_alignment(a);
  return {a, tb};
}

inline void write_alignment(const std::string& path, const Alignment& a, const TimeBase& tb) {
  detail::open_out(path) << alignment_to_json(a, tb).dump(2) << '\n';
}

inline std::pair<Alignment, TimeBase> read_alignment(const std::string& path) {
  auto in = detail::open_in(path);
  return alignment_from_json(json::parse(in));
}

// ---- frame labels: one JSON record per line ------------------------------

inline void write_labels(const std::string& path, const FrameLabels& labels) {
  auto out = detail::open_out(path);
  for (std::size_t i = 0; i < labels.vad.size(); ++i)
    out << "{\"t\":" << i << ",\"vad\":" << static_cast<int>(labels.vad[i])
        << ",\"punc\":" << static_cast<int>(labels.punc[i]) << "}\n";
}

inline FrameLabels read_labels(const std::string& path) {
  auto in = detail::open_in(path);
  FrameLabels labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.at("t").get<FrameIndex>() != static_cast<FrameIndex>(labels.vad.size()))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": frame index out of order");
    labels.vad.push_back(vad_class_from_int(j.at("vad").get<int>()));
    labels.punc.push_back(punc_class_from_int(j.at("punc").get<int>()));
  }
  return labels;
}

// ---- segmentation events: one JSON record per line -----------------------

inline void write_events(const std::string& path, const std::vector<SegmentationEvent>& events) {
  auto out = detail::open_out(path);
  for (const auto& ev : events)
    out << "{\"segment_start_frame\":" << ev.segment_start_frame
        << ",\"segment_end_frame\":" << ev.segment_end_frame
        << ",\"trigger\":\"" << to_string(ev.trigger) << '"'
        << ",\"decision_frame\":" << ev.decision_frame
        << ",\"latency_ms\":" << ev.latency_ms << "}\n";
}

inline std::vector<SegmentationEvent> read_events(const std::string& path) {
  auto in = detail::open_in(path);
  std::vector<SegmentationEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    events.push_back(SegmentationEvent{
        j.at("segment_start_frame").get<FrameIndex>(),
        j.at("segment_end_frame").get<FrameIndex>(),
        trigger_kind_from_string(j.at("trigger").get<std::string>()),
        j.at("decision_frame").get<FrameIndex>(),
        j.at("latency_ms").get<Milliseconds>()});
  }
  return events;
}

// ---- segmenter config ----------------------------------------------------

inline json config_to_json(const SegmenterConfig& cfg) {
  return json{{"t_e_ms", cfg.t_e_ms},
              {"t_ne_ms", cfg.t_ne_ms},
              {"t_max_ms", cfg.t_max_ms},
              {"frame_shift_ms", cfg.time_base.frame_shift_ms},
              {"mode", std::string(to_string(cfg.mode))},
              {"punc_lookback_frames", cfg.punc_lookback_frames}};
}

inline SegmenterConfig config_from_json(const json& j) {
  SegmenterConfig cfg;
  cfg.t_e_ms = j.value("t_e_ms", cfg.t_e_ms);
  cfg.t_ne_ms = j.value("t_ne_ms", cfg.t_ne_ms);
  cfg.t_max_ms = j.value("t_max_ms", cfg.t_max_ms);
  cfg.time_base.frame_shift_ms = j.value("frame_shift_ms", cfg.time_base.frame_shift_ms);
  if (j.contains("mode")) cfg.mode = segmenter_mode_from_string(j.at("mode").get<std::string>());
  cfg.punc_lookback_frames = j.value("punc_lookback_frames", cfg.punc_lookback_frames);
  return validate_config(cfg);
}

// ---- scenario spec -------------------------------------------------------

inline json spec_to_json(const ScenarioSpec& s) {
  return json{{"n_utterances", s.n_utterances},
              {"speech_min_ms", s.speech_min_ms},
              {"speech_max_ms", s.speech_max_ms},
              {"tail_min_ms", s.tail_min_ms},
              {"tail_max_ms", s.tail_max_ms},
              {"e_punc_fraction", s.e_punc_fraction},
              {"ne_punc_fraction", s.ne_punc_fraction},
              {"none_fraction", s.none_fraction},
              {"endpoint_model_accuracy", s.endpoint_model_accuracy},
              {"punc_drop_probability", s.punc_drop_probability},
              {"seed", s.seed}};
}

inline ScenarioSpec spec_from_json(const json& j) {
  ScenarioSpec s;
  s.n_utterances = j.at("n_utterances").get<std::int64_t>();
  s.speech_min_ms = j.at("speech_min_ms").get<Milliseconds>();
  s.speech_max_ms = j.at("speech_max_ms").get<Milliseconds>();
  s.tail_min_ms = j.at("tail_min_ms").get<Milliseconds>();
  s.tail_max_ms = j.at("tail_max_ms").get<Milliseconds>();
  s.e_punc_fraction = j.at("e_punc_fraction").get<double>();
  s.ne_punc_fraction = j.at("ne_punc_fraction").get<double>();
  s.none_fraction = j.at("none_fraction").get<double>();
  s.endpoint_model_accuracy = j.value("endpoint_model_accuracy", 1.0);
  s.punc_drop_probability = j.value("punc_drop_probability", 0.0);
  s.seed = j.at("seed").get<std::uint64_t>();
  validate_spec(s);
  return s;
}

inline ScenarioSpec read_spec(const std::string& path) {
  auto in = detail::open_in(path);
  return spec_from_json(json::parse(in));
}

// ---- metrics report ------------------------------------------------------

inline json report_to_json(const MetricsReport& r) {
  json j;
  j["n_events"] = r.n_events;
  j["latency"] = {
      {"n_events", r.latency.n_events},
      {"mean_ms", r.latency.mean_ms ? json(*r.latency.mean_ms) : json()},
      {"p50_ms", r.latency.p50_ms ? json(*r.latency.p50_ms) : json()},
      {"p90_ms", r.latency.p90_ms ? json(*r.latency.p90_ms) : json()},
      {"p99_ms", r.latency.p99_ms ? json(*r.latency.p99_ms) : json()},
  };
  if (r.detection) {
    j["p_miss"] = r.detection->p_miss;
    j["p_fa"] = r.detection->p_fa;
    j["dcf"] = r.detection->dcf;
  } else {
    j["p_miss"] = nullptr;
    j["p_fa"] = nullptr;
    j["dcf"] = nullptr;
  }
  json props = json::object();
  for (const auto& [kind, frac] : r.trigger_proportions)
    props[std::string(to_string(kind))] = frac;
  j["trigger_proportions"] = props;
  return j;
}

inline void write_report(const std::string& path, const MetricsReport& r) {
  detail::open_out(path) << report_to_json(r).dump(2) << '\n';
}

// ---- run manifest --------------------------------------------------------

struct RunManifest {
  std::string command;
  json config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  double wall_clock_ms = 0.0;
};

inline void write_manifest(const std::string& path, const RunManifest& m) {
  json inputs = json::array();
  for (const auto& p : m.inputs) inputs.push_back(p);
  json outputs = json::array();
  for (const auto& p : m.outputs) outputs.push_back(p);
  json j{{"command", m.command},
         {"config", m.config},
         {"inputs", inputs},
         {"outputs", outputs},
         {"seed", m.seed},
         {"tool_version", kToolVersion},
         {"wall_clock_ms", m.wall_clock_ms}};
  detail::open_out(path) << j.dump(2) << '\n';
}

}  // namespace semvad::io
