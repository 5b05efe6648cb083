// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/beam.hpp"

#include <algorithm>
#include <stdexcept>

namespace simulst {

namespace {

// Ranking used everywhere a candidate pool is trimmed: score desc, then fewer
// tokens, then lexicographically smaller tokens, then finished first. The
// trailing keys make the sort a total order so results never depend on the
// pool's construction order.
bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
  if (a.tokens != b.tokens) return a.tokens < b.tokens;
  return a.finished && !b.finished;
}

std::vector<double> scores_for(const ScoreModel& model, const FeatureMatrix& speech,
                               const std::vector<int>& prefix) {
  std::vector<double> lp = model.next_logprobs(speech, prefix);
  if (static_cast<int>(lp.size()) != model.vocab_size()) {
    throw std::logic_error("score model returned " + std::to_string(lp.size()) +
                           " log-probabilities for a vocabulary of size " +
                           std::to_string(model.vocab_size()));
  }
  return lp;
}

}  // namespace

std::vector<Hypothesis> beam_search(const ScoreModel& model, const FeatureMatrix& speech,
                                    int beam, int max_len, std::span<const int> forced_prefix,
                                    int eos_id) {
  if (beam < 1) {
    throw std::invalid_argument("beam width must be >= 1, got " + std::to_string(beam));
  }
  if (max_len < static_cast<int>(forced_prefix.size())) {
    throw std::invalid_argument("max_len " + std::to_string(max_len) +
                                " is smaller than the forced prefix length " +
                                std::to_string(forced_prefix.size()));
  }
  const int vocab = model.vocab_size();
  if (vocab < 1) {
    throw std::invalid_argument("score model reports an empty vocabulary");
  }
  if (eos_id < 0 || eos_id >= vocab) {
    throw std::invalid_argument("eos id " + std::to_string(eos_id) +
                                " is outside the vocabulary of size " + std::to_string(vocab));
  }
  for (int tok : forced_prefix) {
    if (tok < 0 || tok >= vocab) {
      throw std::invalid_argument("forced prefix token " + std::to_string(tok) +
                                  " is outside the vocabulary of size " + std::to_string(vocab));
    }
    if (tok == eos_id) {
      throw std::invalid_argument("forced prefix must not contain the end-of-sequence id");
    }
  }

  // Score the forced prefix: one committed token per step, no branching.
  Hypothesis seed;
  seed.tokens.reserve(forced_prefix.size());
  for (int tok : forced_prefix) {
    std::vector<double> lp = scores_for(model, speech, seed.tokens);
    seed.score += lp[static_cast<std::size_t>(tok)];
    seed.tokens.push_back(tok);
  }

  std::vector<Hypothesis> live;
  std::vector<Hypothesis> done;
  if (static_cast<int>(seed.tokens.size()) >= max_len) {
    done.push_back(std::move(seed));
  } else {
    live.push_back(std::move(seed));
  }

  while (!live.empty()) {
    std::vector<Hypothesis> pool = done;
    pool.reserve(done.size() + live.size() * static_cast<std::size_t>(vocab));
    for (const Hypothesis& hyp : live) {
      std::vector<double> lp = scores_for(model, speech, hyp.tokens);
      for (int tok = 0; tok < vocab; ++tok) {
        Hypothesis next = hyp;
        next.score += lp[static_cast<std::size_t>(tok)];
        if (tok == eos_id) {
          next.finished = true;
        } else {
          next.tokens.push_back(tok);
        }
        pool.push_back(std::move(next));
      }
    }
    std::sort(pool.begin(), pool.end(), better);
    if (static_cast<int>(pool.size()) > beam) pool.resize(static_cast<std::size_t>(beam));

    live.clear();
    done.clear();
    for (Hypothesis& hyp : pool) {
      if (hyp.finished || static_cast<int>(hyp.tokens.size()) >= max_len) {
        done.push_back(std::move(hyp));
      } else {
        live.push_back(std::move(hyp));
      }
    }
  }

  std::sort(done.begin(), done.end(), better);
  if (static_cast<int>(done.size()) > beam) done.resize(static_cast<std::size_t>(beam));
  return done;
}

TableModel::TableModel(const Vocabulary& vocab, std::vector<int> target, std::vector<int> reveal)
    : vocab_size_(vocab.size()), target_(std::move(target)), reveal_(std::move(reveal)) {
  if (target_.size() != reveal_.size()) {
    throw std::invalid_argument("target has " + std::to_string(target_.size()) +
                                " tokens but reveal has " + std::to_string(reveal_.size()) +
                                " thresholds");
  }
  for (int tok : target_) {
    if (tok < 0 || tok >= vocab_size_) {
      throw std::invalid_argument("target token " + std::to_string(tok) +
                                  " is outside the vocabulary of size " +
                                  std::to_string(vocab_size_));
    }
    if (tok == Vocabulary::kPad || tok == Vocabulary::kBos || tok == Vocabulary::kEos) {
      throw std::invalid_argument("target token " + std::to_string(tok) +
                                  " is a reserved id");
    }
  }
  for (std::size_t i = 0; i < reveal_.size(); ++i) {
    if (reveal_[i] < 0) {
      throw std::invalid_argument("reveal threshold " + std::to_string(reveal_[i]) +
                                  " is negative");
    }
    if (i > 0 && reveal_[i] < reveal_[i - 1]) {
      throw std::invalid_argument("reveal thresholds must be non-decreasing");
    }
  }
}

std::vector<double> TableModel::next_logprobs(const FeatureMatrix& speech,
                                              std::span<const int> prefix) const {
  return logprobs_at(speech.rows(), prefix);
}

std::vector<double> TableModel::logprobs_at(int visible_rows, std::span<const int> prefix) const {
  if (visible_rows < 0) {
    throw std::invalid_argument("visible row count must be >= 0, got " +
                                std::to_string(visible_rows));
  }
  const std::size_t pos = prefix.size();
  int chosen = Vocabulary::kEos;
  if (pos < target_.size() && reveal_[pos] <= visible_rows) {
    chosen = target_[pos];
  }
  std::vector<double> lp(static_cast<std::size_t>(vocab_size_), kFloorLogProb);
  lp[static_cast<std::size_t>(chosen)] = 0.0;
  return lp;
}

}  // namespace simulst
