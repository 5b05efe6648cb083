// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one self-contained check per release criterion, one
// PASS/FAIL line each, exit status 0 only when every criterion holds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "simulst/adapter.hpp"
#include "simulst/beam.hpp"
#include "simulst/harness.hpp"
#include "simulst/metrics.hpp"
#include "simulst/policy.hpp"
#include "simulst/stream.hpp"
#include "simulst/tokenizer.hpp"
#include "test_util.hpp"

using namespace simulst;
using simulst::test::TestRng;
using Clock = std::chrono::steady_clock;

namespace {

const Clock::time_point g_start = Clock::now();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool expect(bool ok, const char* detail) {
  if (!ok) std::printf("        failed: %s\n", detail);
  return ok;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// ---------------------------------------------------------------------------
// Shared randomized scenario: a timed table over a synthetic stream.

struct Scenario {
  Vocabulary vocab;
  std::vector<int> target;
  std::vector<int> reveal;
  std::int64_t duration_ms = 0;
  PolicyConfig config;

  SpeechStream stream(const std::string& id) const {
    return SpeechStream::synthetic(id, duration_ms, 50, 8);
  }
};

Scenario random_scenario(TestRng& rng) {
  Scenario s;
  const int len = rng.next_int(1, 8);
  for (int i = 0; i < len; ++i) s.target.push_back(s.vocab.intern("w" + std::to_string(i)));
  s.duration_ms = rng.next_int(500, 8000);
  const int frames = static_cast<int>(s.duration_ms * 50 / 1000);
  int level = 0;
  for (int i = 0; i < len; ++i) {
    level += rng.next_int(0, std::max(1, frames / len));
    s.reveal.push_back(level);
  }
  s.config.start_ms = rng.next_int(100, 3000);
  s.config.chunk_ms = rng.next_int(100, 3000);
  s.config.hold_n = rng.next_int(0, 5);
  s.config.beam = rng.next_int(1, 4);
  return s;
}

ManifestEntry synthetic_entry(const std::string& id, const std::vector<std::string>& words,
                              std::vector<int> reveal, std::int64_t duration_ms) {
  ManifestEntry entry;
  entry.id = id;
  entry.reference = words.empty() ? std::string() : std::accumulate(
      words.begin() + 1, words.end(), words[0],
      [](std::string acc, const std::string& w) { return std::move(acc) + " " + w; });
  SyntheticSpec spec;
  spec.target = words;
  spec.reveal = std::move(reveal);
  spec.duration_ms = duration_ms;
  entry.synthetic = spec;
  return entry;
}

// ---------------------------------------------------------------------------
// 1. Selective output against a literal transcription of its rule.

std::optional<std::vector<int>> selective_reference(const std::vector<int>& tokens, int n,
                                                    bool source_finished) {
  if (source_finished) return tokens;
  const int l = static_cast<int>(tokens.size());
  const int n_prime = std::min(n, l);
  const std::vector<int> prefix(tokens.begin(), tokens.begin() + (l - n_prime));
  if (!prefix.empty()) return prefix;
  return std::nullopt;
}

bool check_selective_oracle() {
  const Clock::time_point t0 = Clock::now();
  TestRng rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::vector<int> tokens(static_cast<std::size_t>(rng.next_int(0, 20)));
    for (int& t : tokens) t = rng.next_int(3, 50);
    const int n = rng.next_int(0, 12);
    const bool finished = rng.next_int(0, 1) == 1;

    const std::optional<std::vector<int>> want = selective_reference(tokens, n, finished);
    const SelectiveResult got = selective_output(tokens, n, finished);
    if (want.has_value()) {
      if (!expect(got.kind == SelectiveResult::Kind::Output, "expected an output action")) return false;
      if (!expect(got.prefix == *want, "released prefix differs from the transcription")) return false;
    } else {
      if (!expect(got.kind == SelectiveResult::Kind::ReadMore, "expected a read action")) return false;
    }
  }
  return expect(seconds_since(t0) < 1.0, "1000 cases took 1 s or longer");
}

// ---------------------------------------------------------------------------
// 2. Committed output is never revised.

bool check_no_revision() {
  TestRng rng(22);
  for (int run = 0; run < 200; ++run) {
    const Scenario s = random_scenario(rng);
    const TableModel model(s.vocab, s.target, s.reveal);
    const SpeechStream stream = s.stream("rev" + std::to_string(run));
    const AdapterConfig adapter = AdapterConfig::identity(8);
    const MockEncoder encoder;
    const FixedCost cost(0.0);
    StreamSession session(stream, encoder, adapter, model, s.config, cost);

    std::vector<int> committed;
    std::vector<int> written;
    while (!session.finished()) {
      const StepResult step = session.step();
      const std::vector<int> now = session.log().tokens();
      const bool still_prefix =
          now.size() >= committed.size() &&
          std::equal(committed.begin(), committed.end(), now.begin());
      if (!expect(still_prefix, "a previously committed token changed")) return false;
      if (step.action.kind == AgentAction::Kind::Write) {
        written.insert(written.end(), step.action.tokens.begin(), step.action.tokens.end());
      }
      committed = now;
    }
    if (!expect(written == session.log().tokens(),
                "concatenated writes differ from the final output")) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 3. Streaming collapses to offline decoding when the first decision is final.

bool check_offline_equivalence() {
  TestRng rng(33);
  for (int run = 0; run < 100; ++run) {
    Scenario s = random_scenario(rng);
    s.config.start_ms = static_cast<int>(s.duration_ms) + rng.next_int(0, 5000);
    s.config.chunk_ms = static_cast<int>(s.duration_ms) + rng.next_int(0, 5000);
    const TableModel model(s.vocab, s.target, s.reveal);
    const SpeechStream stream = s.stream("off" + std::to_string(run));
    const AdapterConfig adapter = AdapterConfig::identity(8);
    const MockEncoder encoder;
    const FixedCost cost(0.0);

    const StreamResult streaming = run_stream(stream, encoder, adapter, model, s.config, cost);
    const FeatureMatrix full = adapt(mock_encode(stream, stream.total_frames()), adapter);
    const std::vector<Hypothesis> offline =
        beam_search(model, full, s.config.beam, s.config.max_len);
    if (!expect(streaming.steps.size() == 1, "expected a single final decision")) return false;
    if (!expect(streaming.log.tokens() == offline[0].tokens,
                "streaming output differs from offline beam search")) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 4. Conv output rows obey the closed-form length law.

bool check_conv_shape_law() {
  TestRng rng(44);
  for (int i = 0; i < 500; ++i) {
    const int T = rng.next_int(0, 400);
    const int k = rng.next_int(1, 9);
    const int st = rng.next_int(1, 4);
    const int p = rng.next_int(0, 4);
    const int dim = rng.next_int(1, 4);
    const int filters = rng.next_int(1, 3);

    FeatureMatrix input(T, dim);
    for (int t = 0; t < T; ++t) {
      for (int d = 0; d < dim; ++d) input(t, d) = rng.next_double01();
    }
    const ConvSpec spec =
        ConvSpec::seeded(dim, filters, k, st, p, Activation::Rectifier, rng.next_u64());
    const FeatureMatrix out = conv1d_forward(input, spec);
    if (!expect(out.rows() == output_length(T, k, st, p),
                "conv rows differ from the closed form")) {
      return false;
    }
  }

  // The production shape: two k=5, s=2, p=2 layers take 100 steps to 25.
  TestRng fill(4444);
  FeatureMatrix speech(100, 8);
  for (int t = 0; t < 100; ++t) {
    for (int d = 0; d < 8; ++d) speech(t, d) = fill.next_double01();
  }
  const ConvSpec c1 = ConvSpec::seeded(8, 6, 5, 2, 2, Activation::Rectifier, 1);
  const ConvSpec c2 = ConvSpec::seeded(6, 6, 5, 2, 2, Activation::Rectifier, 2);
  const FeatureMatrix h1 = conv1d_forward(speech, c1);
  const FeatureMatrix h2 = conv1d_forward(h1, c2);
  return expect(h1.rows() == 50 && h2.rows() == 25, "(5,2,2) twice on 100 steps must give 25");
}

// ---------------------------------------------------------------------------
// 5. Latency metric hand values, plus the adaptive lower bound.

bool check_latency_hand_values() {
  DelaySeries al_case;
  al_case.delays_ms = {500.0, 1000.0, 1500.0};
  al_case.elapsed_ms = al_case.delays_ms;
  al_case.source_duration_ms = 1500.0;
  al_case.ref_len = 3;
  if (!expect(near(*average_lagging(al_case), 500.0, 1e-9), "AL hand value")) return false;

  DelaySeries laal_case;
  laal_case.delays_ms = {500.0, 1000.0, 1500.0, 1500.0};
  laal_case.elapsed_ms = laal_case.delays_ms;
  laal_case.source_duration_ms = 1500.0;
  laal_case.ref_len = 3;
  if (!expect(near(*laal(laal_case), 625.0, 1e-9), "LAAL hand value")) return false;

  DelaySeries ca_case;
  ca_case.delays_ms = {1000.0, 2000.0};
  ca_case.elapsed_ms = {1400.0, 2600.0};
  ca_case.source_duration_ms = 2000.0;
  ca_case.ref_len = 2;
  if (!expect(near(*laal_ca(ca_case), 1500.0, 1e-9), "computation-aware hand value")) return false;

  TestRng rng(55);
  for (int i = 0; i < 1000; ++i) {
    DelaySeries s;
    s.source_duration_ms = rng.next_int(1, 5000);
    s.ref_len = rng.next_int(1, 50);
    const int hyp = rng.next_int(1, 50);
    double delay = 0.0;
    for (int t = 0; t < hyp; ++t) {
      delay = std::min(s.source_duration_ms, delay + rng.next_int(0, 300));
      s.delays_ms.push_back(delay);
      s.elapsed_ms.push_back(delay);
    }
    if (!expect(*laal(s) >= *average_lagging(s) - 1e-9,
                "length-adaptive lagging fell below plain lagging")) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Offline latency equals the utterance duration; corpus mean follows.

bool check_offline_latency_relation() {
  const std::vector<std::int64_t> durations{1000, 2500, 3000, 4200, 6000};
  TestRng rng(66);
  std::vector<ManifestEntry> entries;
  for (std::size_t u = 0; u < durations.size(); ++u) {
    const int len = rng.next_int(1, 5);
    std::vector<std::string> words;
    std::vector<int> reveal;
    const int frames = static_cast<int>(durations[u] * 50 / 1000);
    for (int i = 0; i < len; ++i) {
      words.push_back("u" + std::to_string(u) + "w" + std::to_string(i));
      reveal.push_back(static_cast<int>((static_cast<std::int64_t>(i + 1) * frames) / len));
    }
    entries.push_back(synthetic_entry("u" + std::to_string(u), words, reveal, durations[u]));
  }

  PolicyConfig config;
  config.start_ms = 10000000;  // past every stream end: the one decision is final
  config.chunk_ms = 10000000;
  const EvalResult result = run_eval(entries, config, HarnessOptions{});
  if (!expect(result.report.failures.empty(), "offline corpus had failures")) return false;
  if (!expect(result.logs.size() == durations.size(), "instance count")) return false;

  double mean = 0.0;
  for (std::size_t u = 0; u < durations.size(); ++u) {
    const std::optional<double> al = result.report.instance_latency[u].al_ms;
    if (!expect(al.has_value() && *al == static_cast<double>(durations[u]),
                "per-utterance offline lagging must equal the duration exactly")) {
      return false;
    }
    mean += static_cast<double>(durations[u]);
  }
  mean /= static_cast<double>(durations.size());
  return expect(near(*result.report.corpus.mean_latency.al_ms, mean, 1e-9),
                "corpus offline lagging must equal the mean duration");
}

// ---------------------------------------------------------------------------
// 7. Raising the hold count never cuts latency and never moves quality.

bool check_hold_sweep_tradeoff() {
  TestRng rng(77);
  std::vector<ManifestEntry> entries;
  for (int u = 0; u < 3; ++u) {
    const int len = rng.next_int(2, 6);
    const std::int64_t duration = rng.next_int(2000, 7000);
    const int frames = static_cast<int>(duration * 50 / 1000);
    std::vector<std::string> words;
    std::vector<int> reveal;
    int level = 0;
    for (int i = 0; i < len; ++i) {
      words.push_back("s" + std::to_string(u) + "w" + std::to_string(i));
      level += rng.next_int(1, std::max(1, frames / len));
      reveal.push_back(std::min(level, frames));
    }
    entries.push_back(synthetic_entry("s" + std::to_string(u), words, reveal, duration));
  }

  HarnessOptions options;
  options.sweep_hold_n = {0, 2, 4, 7, 10};
  const EvalResult result = run_eval(entries, PolicyConfig{}, options);
  if (!expect(result.report.failures.empty(), "sweep corpus had failures")) return false;
  if (!expect(result.report.curve.size() == 5, "expected five curve points")) return false;

  for (std::size_t i = 0; i < result.report.curve.size(); ++i) {
    const CurvePoint& point = result.report.curve[i];
    if (!expect(point.al_ms.has_value(), "curve point lost its latency value")) return false;
    if (i > 0) {
      if (!expect(*result.report.curve[i - 1].al_ms <= *point.al_ms + 1e-9,
                  "lagging decreased as the hold count grew")) {
        return false;
      }
      if (!expect(point.bleu == result.report.curve[0].bleu,
                  "quality moved with the hold count")) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. Corpus BLEU hand values.

bool check_bleu_hand_values() {
  const std::vector<std::string> same{"a b c d", "x y z"};
  if (!expect(near(corpus_bleu(same, same).score, 100.0, 1e-9), "identity must score 100")) {
    return false;
  }
  const double hand = corpus_bleu({"a b c d e"}, {"a b c d f"}).score;
  if (!expect(near(hand, 66.87, 0.01), "substituted-tail hand value")) return false;
  const double zero = corpus_bleu({"a b c d e"}, {"a b x c d"}).score;
  return expect(zero == 0.0, "a missing 4-gram must zero the score");
}

// ---------------------------------------------------------------------------
// 9. The end-to-end golden trace, plus the runtime budget.

bool check_golden_trace() {
  const ManifestEntry entry =
      synthetic_entry("golden", {"t1", "t2", "t3", "t4"}, {50, 100, 200, 250}, 6000);
  PolicyConfig config;
  config.hold_n = 2;
  config.beam = 1;
  const EvalResult result = run_eval({entry}, config, HarnessOptions{});
  if (!expect(result.report.failures.empty() && result.logs.size() == 1, "golden run failed")) {
    return false;
  }
  const InstanceLog& log = result.logs[0];
  if (!expect(log.prediction == "t1 t2 t3 t4", "golden prediction")) return false;
  if (!expect(log.delays_ms == std::vector<std::int64_t>{4500, 6000, 6000, 6000},
              "golden delays")) {
    return false;
  }
  const std::optional<double> al = result.report.corpus.mean_latency.al_ms;
  if (!expect(al.has_value() && near(*al, 4500.0, 1e-9) && format_seconds(*al) == "4.50",
              "golden lagging")) {
    return false;
  }
  return expect(seconds_since(g_start) < 60.0, "acceptance suite exceeded 60 s");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<bool()>>> criteria{
      {"selective output matches a literal transcription on 1000 randomized cases",
       check_selective_oracle},
      {"no committed token is ever revised across 200 randomized streams", check_no_revision},
      {"streaming equals offline decoding once the first decision sees the whole stream",
       check_offline_equivalence},
      {"conv output rows obey the closed-form length law on 500 randomized shapes",
       check_conv_shape_law},
      {"latency metrics reproduce hand-computed values and the adaptive lower bound",
       check_latency_hand_values},
      {"offline latency equals utterance duration, per utterance and in corpus mean",
       check_offline_latency_relation},
      {"raising hold-n never lowers latency and never changes quality", check_hold_sweep_tradeoff},
      {"corpus BLEU reproduces hand-computed scores", check_bleu_hand_values},
      {"the end-to-end golden trace is exact and the suite stays inside its time budget",
       check_golden_trace},
  };

  bool all_ok = true;
  for (const auto& [name, fn] : criteria) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::printf("        threw: %s\n", e.what());
      ok = false;
    }
    std::printf("%s  %s\n", ok ? "PASS" : "FAIL", name);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
