#include <catch2/catch_amalgamated.hpp>

#include "semvad/metrics.hpp"
#include "semvad/simulator.hpp"
#include "test_util.hpp"

using namespace semvad;

namespace {

ScenarioSpec base_spec() {
  ScenarioSpec s;
  s.n_utterances = 50;
  s.speech_min_ms = 500;
  s.speech_max_ms = 2000;
  s.tail_min_ms = 800;
  s.tail_max_ms = 1500;
  s.e_punc_fraction = 0.6;
  s.ne_punc_fraction = 0.3;
  s.none_fraction = 0.1;
  s.seed = 42;
  return s;
}

}  // namespace

TEST_CASE("spec validation") {
  auto s = base_spec();
  CHECK_NOTHROW(validate_spec(s));
  s.e_punc_fraction = 0.5;  // sums to 0.9
  CHECK_THROWS(validate_spec(s));
  s = base_spec();
  s.n_utterances = 0;
  CHECK_THROWS(validate_spec(s));
  s = base_spec();
  s.endpoint_model_accuracy = 1.5;
  CHECK_THROWS(validate_spec(s));
  s = base_spec();
  s.tail_min_ms = 900;
  s.tail_max_ms = 800;
  CHECK_THROWS(validate_spec(s));
}

TEST_CASE("generation is deterministic under a fixed seed") {
  SegmenterConfig cfg;
  auto s = base_spec();
  auto g1 = generate(s, cfg);
  auto g2 = generate(s, cfg);
  CHECK(g1.alignment == g2.alignment);
  CHECK(g1.labels == g2.labels);
  CHECK(g1.posteriors == g2.posteriors);

  s.seed = 43;
  auto g3 = generate(s, cfg);
  CHECK(g3.alignment != g1.alignment);
}

TEST_CASE("oracle mode posteriors are one-hot on the labels") {
  SegmenterConfig cfg;
  auto g = generate(base_spec(), cfg);
  REQUIRE(g.posteriors.size() == g.labels.vad.size());
  for (std::size_t i = 0; i < g.posteriors.size(); ++i) {
    CHECK(argmax3(g.posteriors[i].vad) == static_cast<int>(g.labels.vad[i]));
    CHECK(g.posteriors[i].vad[static_cast<std::size_t>(argmax3(g.posteriors[i].vad))] == 1.0);
    CHECK(argmax3(g.posteriors[i].punc) == static_cast<int>(g.labels.punc[i]));
  }
}

TEST_CASE("mix apportionment matches requested fractions") {
  auto s = base_spec();
  s.n_utterances = 1000;
  SegmenterConfig cfg;
  auto g = generate(s, cfg);
  std::int64_t e = 0, ne = 0;
  for (const auto& ev : g.alignment.punc_events)
    (ev.punc == PuncClass::EPunc ? e : ne)++;
  CHECK(e == 600);
  CHECK(ne == 300);
  CHECK(static_cast<std::int64_t>(g.alignment.speech_intervals.size()) == 1000);
}

TEST_CASE("all-E-punc oracle scenarios segment semantically") {
  auto s = base_spec();
  s.e_punc_fraction = 1.0;
  s.ne_punc_fraction = 0.0;
  s.none_fraction = 0.0;
  SegmenterConfig cfg;
  auto g = generate(s, cfg);
  auto events = segment_stream(g.posteriors, cfg);
  REQUIRE(static_cast<std::int64_t>(events.size()) == s.n_utterances);
  for (const auto& ev : events) {
    CHECK(ev.trigger == TriggerKind::Endpoint);
    CHECK(ev.latency_ms == cfg.t_e_ms);
  }
}

TEST_CASE("oracle_segment handles the documented cases") {
  SegmenterConfig cfg;
  SECTION("E-punc with 500 ms tail triggers Endpoint at t_E") {
    Alignment a{60, {{0, 10}}, {{10, PuncClass::EPunc}}};
    auto events = oracle_segment(a, cfg);
    REQUIRE(events.size() == 1);
    CHECK(events[0].trigger == TriggerKind::Endpoint);
    CHECK(events[0].latency_ms == 300);
    CHECK(events[0].decision_frame == 40);
  }
  SECTION("600 ms unpunctuated tail merges into the next segment") {
    Alignment a{200, {{0, 10}, {70, 100}}, {}};
    auto events = oracle_segment(a, cfg);
    REQUIRE(events.size() == 1);
    CHECK(events[0].segment_start_frame == 0);
    CHECK(events[0].trigger == TriggerKind::MaxSilence);  // 100-frame trailing tail
    CHECK(events[0].segment_end_frame == 100);
  }
  SECTION("900 ms unpunctuated tail triggers MaxSilence at t_Max") {
    Alignment a{100, {{0, 10}}, {}};
    auto events = oracle_segment(a, cfg);
    REQUIRE(events.size() == 1);
    CHECK(events[0].trigger == TriggerKind::MaxSilence);
    CHECK(events[0].latency_ms == 700);
  }
}

TEST_CASE("streaming engine equals the offline oracle on random scenarios") {
  SegmenterConfig cfg;
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = test::random_alignment(rng);
    auto labels = derive_labels(a, cfg);
    auto engine_events = segment_stream(test::one_hot_posteriors(labels.vad, labels.punc), cfg);
    CHECK(engine_events == oracle_segment(a, cfg));
  }
}

TEST_CASE("degrading endpoint accuracy never lowers mean latency") {
  auto s = base_spec();
  s.n_utterances = 200;
  s.punc_drop_probability = 0.3;
  SegmenterConfig cfg;
  double prev = -1.0;
  for (double acc : {1.0, 0.8, 0.5, 0.0}) {
    s.endpoint_model_accuracy = acc;
    auto g = generate(s, cfg);
    auto summary = latency_summary(segment_stream(g.posteriors, cfg));
    REQUIRE(summary.mean_ms);
    CHECK(*summary.mean_ms >= prev);
    prev = *summary.mean_ms;
  }
}

TEST_CASE("short punctuated tails are flagged") {
  auto s = base_spec();
  s.tail_min_ms = 100;
  s.tail_max_ms = 200;  // below t_E
  SegmenterConfig cfg;
  auto g = generate(s, cfg);
  // Every punctuated utterance (90% of 50) has a sub-threshold tail.
  CHECK(g.n_short_punctuated_tails == 45);
}
