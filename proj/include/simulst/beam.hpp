// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "simulst/feature.hpp"
#include "simulst/tokenizer.hpp"

namespace simulst {

/// Scores one decoding step. Implementations must be deterministic: the same
/// (speech, prefix) pair always yields the same distribution.
class ScoreModel {
 public:
  virtual ~ScoreModel() = default;

  /// Log-probabilities over the full vocabulary for the token following
  /// `prefix`, given the speech features visible so far. The returned vector
  /// has one entry per vocabulary id (including reserved ids).
  virtual std::vector<double> next_logprobs(const FeatureMatrix& speech,
                                            std::span<const int> prefix) const = 0;

  /// Vocabulary size; every next_logprobs() result has exactly this length.
  virtual int vocab_size() const = 0;
};

/// One beam-search candidate. `tokens` never contains the end-of-sequence id;
/// reaching it sets `finished` instead. `score` is the raw sum of chosen token
/// log-probabilities (end-of-sequence included when taken), unnormalized.
struct Hypothesis {
  std::vector<int> tokens;
  double score = 0.0;
  bool finished = false;

  bool operator==(const Hypothesis&) const = default;
};

/// Length-synchronous beam search.
///
/// All live candidates are extended one token per round; a candidate that
/// takes `eos_id` freezes and competes by its raw score. `forced_prefix` is
/// scored but not searched: the first |forced_prefix| steps each commit the
/// forced token and add its log-probability. Ranking is by score (higher
/// first), then fewer tokens, then lexicographically smaller token sequence,
/// then finished before unfinished. Returns up to `beam` hypotheses, best
/// first; at least one is always returned.
std::vector<Hypothesis> beam_search(const ScoreModel& model, const FeatureMatrix& speech,
                                    int beam, int max_len,
                                    std::span<const int> forced_prefix = {},
                                    int eos_id = Vocabulary::kEos);

/// Deterministic table-driven score model used by tests and the synthetic
/// evaluation path. The model emits `target` one token per step, but token i
/// only becomes available once at least `reveal[i]` feature rows are visible;
/// before that (or past the end of the target) the whole mass sits on the
/// end-of-sequence id. The preferred token gets log-probability 0 and every
/// other id gets the floor.
class TableModel final : public ScoreModel {
 public:
  static constexpr double kFloorLogProb = -1e9;

  /// `reveal` must be non-decreasing and the same length as `target`; tokens
  /// must be valid non-reserved ids in `vocab`.
  TableModel(const Vocabulary& vocab, std::vector<int> target, std::vector<int> reveal);

  std::vector<double> next_logprobs(const FeatureMatrix& speech,
                                    std::span<const int> prefix) const override;
  int vocab_size() const override { return vocab_size_; }

  /// Distribution given an explicit visible-row count, independent of any
  /// feature matrix. next_logprobs() forwards here with speech.rows().
  std::vector<double> logprobs_at(int visible_rows, std::span<const int> prefix) const;

  const std::vector<int>& target() const { return target_; }
  const std::vector<int>& reveal() const { return reveal_; }

 private:
  int vocab_size_;
  std::vector<int> target_;
  std::vector<int> reveal_;
};

}  // namespace simulst
