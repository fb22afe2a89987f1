// Command-line front door: simulate -> segment -> score, plus loss
// verification and timeline export for plotting.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semvad/io.hpp"
#include "semvad/labelgen.hpp"
#include "semvad/losses.hpp"
#include "semvad/metrics.hpp"
#include "semvad/segmenter.hpp"
#include "semvad/simulator.hpp"

namespace fs = std::filesystem;
using namespace semvad;

namespace {

struct ConfigFlags {
  Milliseconds t_e_ms = 300;
  Milliseconds t_ne_ms = 400;
  Milliseconds t_max_ms = 700;
  Milliseconds frame_shift_ms = 10;
  std::string mode = "semantic";
  FrameIndex punc_lookback_frames = 1;

  void attach(CLI::App* app) {
    app->add_option("--t-e-ms", t_e_ms, "Tail silence after an ending punctuation (ms)");
    app->add_option("--t-ne-ms", t_ne_ms, "Tail silence after a non-ending punctuation (ms)");
    app->add_option("--t-max-ms", t_max_ms, "Maximum tail silence (ms)");
    app->add_option("--frame-shift-ms", frame_shift_ms, "Frame shift (ms)");
    app->add_option("--mode", mode, "semantic or traditional")
        ->check(CLI::IsMember({"semantic", "traditional"}));
    app->add_option("--punc-lookback-frames", punc_lookback_frames,
                    "Speech frames before silence onset whose punctuation still counts");
  }

  SegmenterConfig build() const {
    SegmenterConfig cfg;
    cfg.t_e_ms = t_e_ms;
    cfg.t_ne_ms = t_ne_ms;
    cfg.t_max_ms = t_max_ms;
    cfg.time_base.frame_shift_ms = frame_shift_ms;
    cfg.mode = segmenter_mode_from_string(mode);
    cfg.punc_lookback_frames = punc_lookback_frames;
    return validate_config(cfg);
  }
};

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_simulate(const std::string& spec_path, const std::string& out_dir,
                 const ConfigFlags& flags) {
  Stopwatch sw;
  const auto spec = io::read_spec(spec_path);
  const auto cfg = flags.build();
  fs::create_directories(out_dir);
  const auto scenario = generate(spec, cfg);

  const std::string align_path = (fs::path(out_dir) / "alignment.json").string();
  const std::string labels_path = (fs::path(out_dir) / "labels.jsonl").string();
  const std::string post_path = (fs::path(out_dir) / "posteriors.jsonl").string();
  io::write_alignment(align_path, scenario.alignment, cfg.time_base);
  io::write_labels(labels_path, scenario.labels);
  io::write_posteriors(post_path, scenario.posteriors);

  if (scenario.n_short_punctuated_tails > 0)
    std::cerr << "note: " << scenario.n_short_punctuated_tails
              << " punctuated utterance(s) have tails shorter than their silence threshold\n";

  io::RunManifest m;
  m.command = "simulate";
  m.config = io::config_to_json(cfg);
  m.config["scenario"] = io::spec_to_json(spec);
  m.inputs = {spec_path};
  m.outputs = {align_path, labels_path, post_path};
  m.seed = spec.seed;
  m.wall_clock_ms = sw.elapsed_ms();
  io::write_manifest((fs::path(out_dir) / "simulate.manifest.json").string(), m);
  return 0;
}

int cmd_segment(const std::string& posteriors_path, const std::string& events_path,
                const ConfigFlags& flags) {
  Stopwatch sw;
  const auto cfg = flags.build();
  const auto frames = io::read_posteriors(posteriors_path);
  const auto events = segment_stream(frames, cfg);
  io::write_events(events_path, events);

  io::RunManifest m;
  m.command = "segment";
  m.config = io::config_to_json(cfg);
  m.inputs = {posteriors_path};
  m.outputs = {events_path};
  m.wall_clock_ms = sw.elapsed_ms();
  io::write_manifest(events_path + ".manifest.json", m);
  return 0;
}

int cmd_score(const std::string& events_path, const std::string& labels_path,
              const std::string& report_path) {
  Stopwatch sw;
  const auto events = io::read_events(events_path);
  const auto labels = io::read_labels(labels_path);
  const FrameIndex total = static_cast<FrameIndex>(labels.vad.size());
  std::vector<std::pair<FrameIndex, FrameIndex>> segments;
  for (const auto& ev : events) {
    if (ev.segment_end_frame > total || ev.decision_frame > total)
      throw std::runtime_error("events extend past the " + std::to_string(total) +
                               "-frame reference");
    segments.emplace_back(ev.segment_start_frame, ev.segment_end_frame);
  }
  const auto acc = accumulate_dcf(labels.vad, segments);
  const auto report = make_report(events, acc);
  io::write_report(report_path, report);
  std::cout << io::report_to_json(report).dump(2) << '\n';

  io::RunManifest m;
  m.command = "score";
  m.inputs = {events_path, labels_path};
  m.outputs = {report_path};
  m.wall_clock_ms = sw.elapsed_ms();
  io::write_manifest(report_path + ".manifest.json", m);
  return 0;
}

int cmd_timeline(const std::vector<std::string>& events_paths,
                 const std::vector<std::string>& labels, const std::string& out_path,
                 Milliseconds frame_shift_ms) {
  Stopwatch sw;
  auto out = std::ofstream(out_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << "stream,decision_ms,trigger,mode\n";
  for (std::size_t i = 0; i < events_paths.size(); ++i) {
    const std::string label =
        i < labels.size() ? labels[i] : fs::path(events_paths[i]).stem().string();
    for (const auto& ev : io::read_events(events_paths[i]))
      out << i << ',' << ev.decision_frame * frame_shift_ms << ',' << to_string(ev.trigger)
          << ',' << label << '\n';
  }
  out.close();

  io::RunManifest m;
  m.command = "timeline";
  m.config = {{"frame_shift_ms", frame_shift_ms}};
  m.inputs = events_paths;
  m.outputs = {out_path};
  m.wall_clock_ms = sw.elapsed_ms();
  io::write_manifest(out_path + ".manifest.json", m);
  return 0;
}

int cmd_loss_check(const std::string& posteriors_path, const std::string& labels_path,
                   double mu, double lambda, double l_asr, const std::string& out_path) {
  Stopwatch sw;
  const LossWeights w{mu, lambda};
  validate_weights(w);
  const auto frames = io::read_posteriors(posteriors_path);
  const auto labels = io::read_labels(labels_path);
  if (frames.size() != labels.vad.size())
    throw std::runtime_error("posterior stream has " + std::to_string(frames.size()) +
                             " frames but labels have " + std::to_string(labels.vad.size()));
  std::vector<Prob3> vad_post, punc_post;
  std::vector<int> vad_lab, punc_lab;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    vad_post.push_back(frames[i].vad);
    punc_post.push_back(frames[i].punc);
    vad_lab.push_back(static_cast<int>(labels.vad[i]));
    punc_lab.push_back(static_cast<int>(labels.punc[i]));
  }
  const double l_punc = frame_cross_entropy(punc_post, punc_lab);
  const double l_vad = frame_cross_entropy(vad_post, vad_lab);
  const double joint = joint_loss(l_punc, l_asr, l_vad, w);

  nlohmann::json j{{"l_punc", l_punc}, {"l_vad", l_vad}, {"l_asr", l_asr},
                   {"mu", mu},         {"lambda", lambda}, {"joint_loss", joint},
                   {"n_frames", frames.size()}};
  std::ofstream(out_path) << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';

  io::RunManifest m;
  m.command = "loss-check";
  m.config = {{"mu", mu}, {"lambda", lambda}, {"l_asr", l_asr}};
  m.inputs = {posteriors_path, labels_path};
  m.outputs = {out_path};
  m.wall_clock_ms = sw.elapsed_ms();
  io::write_manifest(out_path + ".manifest.json", m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming semantic VAD tail-segmentation toolkit"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic scenario");
  std::string sim_spec, sim_out_dir;
  ConfigFlags sim_flags;
  sim->add_option("--spec", sim_spec, "Scenario spec (JSON)")->required();
  sim->add_option("--out-dir", sim_out_dir, "Output directory")->required();
  sim_flags.attach(sim);

  // segment
  auto* seg = app.add_subcommand("segment", "Run the tail segmenter over a posterior stream");
  std::string seg_post, seg_events;
  ConfigFlags seg_flags;
  seg->add_option("--posteriors", seg_post, "Posterior stream (JSONL)")->required();
  seg->add_option("--out", seg_events, "Events output (JSONL)")->required();
  seg_flags.attach(seg);

  // score
  auto* sco = app.add_subcommand("score", "Score events against reference labels");
  std::string sco_events, sco_labels, sco_out;
  sco->add_option("--events", sco_events, "Events file (JSONL)")->required();
  sco->add_option("--labels", sco_labels, "Reference labels (JSONL)")->required();
  sco->add_option("--out", sco_out, "Metrics report output (JSON)")->required();

  // timeline
  auto* tl = app.add_subcommand("timeline", "Export decision timelines for plotting");
  std::vector<std::string> tl_events, tl_labels;
  std::string tl_out;
  Milliseconds tl_shift = 10;
  tl->add_option("events", tl_events, "Events file(s)")->required()->expected(-1);
  tl->add_option("--label", tl_labels, "Mode label per events file (defaults to file stem)");
  tl->add_option("--out", tl_out, "Timeline output (CSV)")->required();
  tl->add_option("--frame-shift-ms", tl_shift, "Frame shift (ms)");

  // loss-check
  auto* lc = app.add_subcommand("loss-check", "Verify the joint loss on a stream");
  std::string lc_post, lc_labels, lc_out;
  double lc_mu = 0.2, lc_lambda = 0.2, lc_asr = 0.0;
  lc->add_option("--posteriors", lc_post, "Posterior stream (JSONL)")->required();
  lc->add_option("--labels", lc_labels, "Reference labels (JSONL)")->required();
  lc->add_option("--mu", lc_mu, "Punctuation loss weight");
  lc->add_option("--lambda", lc_lambda, "ASR loss weight");
  lc->add_option("--l-asr", lc_asr, "Externally supplied ASR loss value");
  lc->add_option("--out", lc_out, "Loss report output (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_spec, sim_out_dir, sim_flags);
    if (seg->parsed()) return cmd_segment(seg_post, seg_events, seg_flags);
    if (sco->parsed()) return cmd_score(sco_events, sco_labels, sco_out);
    if (tl->parsed()) return cmd_timeline(tl_events, tl_labels, tl_out, tl_shift);
    if (lc->parsed()) return cmd_loss_check(lc_post, lc_labels, lc_mu, lc_lambda, lc_asr, lc_out);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
