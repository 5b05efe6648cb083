// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace simulst {

/// Per-utterance emission timing: one delay (source audio consumed, ms) and
/// one clock stamp (ms since stream start, compute time included) per emitted
/// token, plus the stream length and reference token count the latency
/// formulas need.
struct DelaySeries {
  std::vector<double> delays_ms;
  std::vector<double> elapsed_ms;
  double source_duration_ms = 0.0;
  int ref_len = 0;

  int hyp_len() const { return static_cast<int>(delays_ms.size()); }

  /// Throws std::invalid_argument on structural violations: size mismatch,
  /// decreasing delays, a delay past the stream end, or a clock stamp earlier
  /// than its delay.
  void validate() const;
};

/// Average lagging: mean gap between each token's delay and an ideal evenly
/// paced schedule of ref_len tokens over the stream, truncated at the first
/// token emitted at or after the stream end (all tokens if none is). Empty
/// hypothesis -> nullopt (the utterance has no latency value).
std::optional<double> average_lagging(const DelaySeries& series);

/// Length-adaptive variant: the ideal schedule paces max(hyp_len, ref_len)
/// tokens instead, so over-generation is not rewarded.
std::optional<double> laal(const DelaySeries& series);

/// Computation-aware variant of laal(): clock stamps replace delays inside the
/// summation, while the truncation point still comes from the delays.
std::optional<double> laal_ca(const DelaySeries& series);

/// Corpus BLEU result. score is 0..100; precisions are the corpus-aggregated
/// clipped n-gram precisions p1..p4.
struct BleuReport {
  double score = 0.0;
  std::array<double, 4> precisions{};
  double brevity_penalty = 0.0;
  long long hyp_tokens = 0;  ///< total hypothesis tokens (c)
  long long ref_tokens = 0;  ///< total reference tokens (r)
};

/// Metric tokenization: . , ! ? become their own tokens, then split on
/// whitespace.
std::vector<std::string> bleu_tokenize(const std::string& text);

/// Corpus BLEU over parallel text lists: clipped n-gram counts are pooled
/// across the corpus, BP = min(1, exp(1 - r/c)), and the score is the
/// geometric mean of p1..p4 times BP; any zero precision zeroes the score.
/// Throws std::invalid_argument on length mismatch or empty input.
BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references);

/// Latency values for one utterance; a field is empty when undefined (no
/// tokens were emitted).
struct LatencyReport {
  std::optional<double> al_ms;
  std::optional<double> laal_ms;
  std::optional<double> laal_ca_ms;
};

/// Computes all three latency metrics for one series.
LatencyReport latency_report(const DelaySeries& series);

/// Corpus-level rollup: unweighted means of the per-utterance latency values
/// (utterances with no latency value are counted but excluded from the means)
/// plus a single corpus-level BLEU.
struct CorpusReport {
  int utterances = 0;
  int with_latency = 0;
  LatencyReport mean_latency;  ///< means in ms; empty when no utterance had a value
  BleuReport bleu;
};

/// Folds per-utterance latency reports and the parallel text lists into one
/// corpus report. All three lists must have the same nonzero length; throws
/// std::invalid_argument otherwise.
CorpusReport aggregate(const std::vector<LatencyReport>& latencies,
                       const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references);

/// "4.50"-style seconds with 2 decimals from a millisecond value.
std::string format_seconds(double ms);

/// "66.9"-style BLEU with 1 decimal.
std::string format_bleu(double score);

}  // namespace simulst
