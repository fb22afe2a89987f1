// End-to-end checks of the command-line tool, driven through the real binary
// (path supplied via the SEMVAD_CLI environment variable).

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semvad/io.hpp"
#include "semvad/metrics.hpp"

using namespace semvad;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli() {
  const char* p = std::getenv("SEMVAD_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  return std::system((cli() + " " + args + " >/dev/null 2>/dev/null").c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("semvad_cli_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_spec(const std::string& path, int n, double e, double ne, double none,
                std::uint64_t seed) {
  json j{{"n_utterances", n},    {"speech_min_ms", 500}, {"speech_max_ms", 1500},
         {"tail_min_ms", 800},   {"tail_max_ms", 1500},  {"e_punc_fraction", e},
         {"ne_punc_fraction", ne}, {"none_fraction", none}, {"seed", seed}};
  std::ofstream(path) << j.dump(2);
}

}  // namespace

TEST_CASE("simulate produces the three data files plus a manifest") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 5, 1.0, 0.0, 0.0, 7);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) == 0);
  for (const char* name : {"alignment.json", "labels.jsonl", "posteriors.jsonl",
                           "simulate.manifest.json"})
    CHECK(fs::exists(fs::path(tmp.file("out")) / name));
  auto manifest = json::parse(slurp(tmp.file("out") + "/simulate.manifest.json"));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 7);
}

TEST_CASE("simulate is byte-deterministic for a fixed seed") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 8, 0.6, 0.3, 0.1, 42);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("a")) == 0);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("b")) == 0);
  for (const char* name : {"alignment.json", "labels.jsonl", "posteriors.jsonl"})
    CHECK(slurp(tmp.file("a") + "/" + name) == slurp(tmp.file("b") + "/" + name));
}

TEST_CASE("simulate rejects bad mix fractions with a nonzero exit") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 5, 0.5, 0.3, 0.1, 7);  // sums to 0.9
  CHECK(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) != 0);
}

TEST_CASE("segment + score pipeline on an oracle stream") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 10, 0.5, 0.3, 0.2, 13);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) == 0);
  REQUIRE(run("segment --posteriors " + tmp.file("out") + "/posteriors.jsonl --out " +
              tmp.file("events.jsonl")) == 0);
  REQUIRE(run("score --events " + tmp.file("events.jsonl") + " --labels " + tmp.file("out") +
              "/labels.jsonl --out " + tmp.file("report.json")) == 0);

  auto report = json::parse(slurp(tmp.file("report.json")));
  // Oracle posteriors with long tails: no reference speech frame is missed.
  CHECK(report["p_miss"].get<double>() == 0.0);
  CHECK(report["dcf"].get<double>() ==
        Catch::Approx(0.75 * report["p_miss"].get<double>() +
                      0.25 * report["p_fa"].get<double>()).margin(1e-12));
  CHECK(report["n_events"].get<int>() == 10);
}

TEST_CASE("traditional mode pins every in-stream latency to t_max") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 6, 1.0, 0.0, 0.0, 3);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) == 0);
  REQUIRE(run("segment --mode traditional --posteriors " + tmp.file("out") +
              "/posteriors.jsonl --out " + tmp.file("events.jsonl")) == 0);
  for (const auto& ev : io::read_events(tmp.file("events.jsonl"))) {
    CHECK(ev.trigger == TriggerKind::MaxSilence);
    CHECK(ev.latency_ms == 700);
  }
}

TEST_CASE("segment rejects off-grid durations") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 2, 1.0, 0.0, 0.0, 5);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) == 0);
  CHECK(run("segment --t-e-ms 305 --posteriors " + tmp.file("out") +
            "/posteriors.jsonl --out " + tmp.file("events.jsonl")) != 0);
}

TEST_CASE("timeline lists semantic decisions before traditional ones") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 6, 0.7, 0.3, 0.0, 21);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) == 0);
  REQUIRE(run("segment --posteriors " + tmp.file("out") + "/posteriors.jsonl --out " +
              tmp.file("sem.jsonl")) == 0);
  REQUIRE(run("segment --mode traditional --posteriors " + tmp.file("out") +
              "/posteriors.jsonl --out " + tmp.file("trad.jsonl")) == 0);
  REQUIRE(run("timeline " + tmp.file("sem.jsonl") + " " + tmp.file("trad.jsonl") +
              " --label semantic --label traditional --out " + tmp.file("timeline.csv")) == 0);

  auto sem = io::read_events(tmp.file("sem.jsonl"));
  auto trad = io::read_events(tmp.file("trad.jsonl"));
  REQUIRE(sem.size() == trad.size());
  for (std::size_t i = 0; i < sem.size(); ++i) {
    CHECK(sem[i].segment_end_frame == trad[i].segment_end_frame);
    CHECK(sem[i].decision_frame <= trad[i].decision_frame);
  }
  auto csv = slurp(tmp.file("timeline.csv"));
  CHECK(csv.rfind("stream,decision_ms,trigger,mode\n", 0) == 0);
  CHECK(csv.find(",semantic\n") != std::string::npos);
  CHECK(csv.find(",traditional\n") != std::string::npos);
}

TEST_CASE("timeline of an empty events file is header-only") {
  TempDir tmp;
  std::ofstream(tmp.file("empty.jsonl")).close();
  REQUIRE(run("timeline " + tmp.file("empty.jsonl") + " --out " + tmp.file("t.csv")) == 0);
  CHECK(slurp(tmp.file("t.csv")) == "stream,decision_ms,trigger,mode\n");
}

TEST_CASE("loss-check on oracle posteriors gives zero head losses") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 3, 1.0, 0.0, 0.0, 9);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) == 0);
  REQUIRE(run("loss-check --posteriors " + tmp.file("out") + "/posteriors.jsonl --labels " +
              tmp.file("out") + "/labels.jsonl --l-asr 2.0 --out " + tmp.file("loss.json")) == 0);
  auto j = json::parse(slurp(tmp.file("loss.json")));
  CHECK(j["l_punc"].get<double>() == Catch::Approx(0.0).margin(1e-12));
  CHECK(j["l_vad"].get<double>() == Catch::Approx(0.0).margin(1e-12));
  // mu = lambda = 0.2 defaults: joint = lambda * l_asr.
  CHECK(j["joint_loss"].get<double>() == Catch::Approx(0.4).margin(1e-12));
}

TEST_CASE("loss-check rejects mu + lambda > 1") {
  TempDir tmp;
  write_spec(tmp.file("spec.json"), 2, 1.0, 0.0, 0.0, 9);
  REQUIRE(run("simulate --spec " + tmp.file("spec.json") + " --out-dir " + tmp.file("out")) == 0);
  CHECK(run("loss-check --mu 0.6 --lambda 0.6 --posteriors " + tmp.file("out") +
            "/posteriors.jsonl --labels " + tmp.file("out") + "/labels.jsonl --out " +
            tmp.file("loss.json")) != 0);
}
