// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace simulst {

namespace {

// Shared lagging core. `emitted` supplies the per-token timing values summed
// (delays, or clock stamps for the computation-aware variant); `cutoff_delays`
// always supplies the truncation point; `pace_len` sets the ideal schedule's
// token count.
double lagging(const std::vector<double>& emitted, const std::vector<double>& cutoff_delays,
               double duration_ms, int pace_len) {
  const std::size_t n = emitted.size();
  std::size_t tau = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (cutoff_delays[i] >= duration_ms) {
      tau = i + 1;
      break;
    }
  }
  const double step = duration_ms / static_cast<double>(pace_len);
  double sum = 0.0;
  for (std::size_t i = 0; i < tau; ++i) {
    sum += emitted[i] - step * static_cast<double>(i);
  }
  return sum / static_cast<double>(tau);
}

void require_ref_len(const DelaySeries& series) {
  if (series.ref_len < 1) {
    throw std::invalid_argument("latency metrics need ref_len >= 1, got " +
                                std::to_string(series.ref_len));
  }
}

}  // namespace

void DelaySeries::validate() const {
  if (delays_ms.size() != elapsed_ms.size()) {
    throw std::invalid_argument("delay series has " + std::to_string(delays_ms.size()) +
                                " delays but " + std::to_string(elapsed_ms.size()) +
                                " clock stamps");
  }
  if (!(source_duration_ms >= 0.0)) {
    throw std::invalid_argument("source duration must be >= 0 ms");
  }
  if (ref_len < 0) {
    throw std::invalid_argument("ref_len must be >= 0, got " + std::to_string(ref_len));
  }
  for (std::size_t i = 0; i < delays_ms.size(); ++i) {
    if (!std::isfinite(delays_ms[i]) || !std::isfinite(elapsed_ms[i])) {
      throw std::invalid_argument("delay series entry " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && delays_ms[i] < delays_ms[i - 1]) {
      throw std::invalid_argument("delays must be non-decreasing; entry " + std::to_string(i) +
                                  " decreases");
    }
    if (delays_ms[i] > source_duration_ms) {
      throw std::invalid_argument("delay " + std::to_string(delays_ms[i]) +
                                  " ms exceeds the source duration " +
                                  std::to_string(source_duration_ms) + " ms");
    }
    if (elapsed_ms[i] < delays_ms[i]) {
      throw std::invalid_argument("clock stamp " + std::to_string(elapsed_ms[i]) +
                                  " ms is earlier than its delay " +
                                  std::to_string(delays_ms[i]) + " ms");
    }
  }
}

std::optional<double> average_lagging(const DelaySeries& series) {
  series.validate();
  if (series.delays_ms.empty()) return std::nullopt;
  require_ref_len(series);
  return lagging(series.delays_ms, series.delays_ms, series.source_duration_ms, series.ref_len);
}

std::optional<double> laal(const DelaySeries& series) {
  series.validate();
  if (series.delays_ms.empty()) return std::nullopt;
  require_ref_len(series);
  const int pace_len = std::max(series.hyp_len(), series.ref_len);
  return lagging(series.delays_ms, series.delays_ms, series.source_duration_ms, pace_len);
}

std::optional<double> laal_ca(const DelaySeries& series) {
  series.validate();
  if (series.delays_ms.empty()) return std::nullopt;
  require_ref_len(series);
  const int pace_len = std::max(series.hyp_len(), series.ref_len);
  return lagging(series.elapsed_ms, series.delays_ms, series.source_duration_ms, pace_len);
}

LatencyReport latency_report(const DelaySeries& series) {
  LatencyReport report;
  report.al_ms = average_lagging(series);
  report.laal_ms = laal(series);
  report.laal_ca_ms = laal_ca(series);
  return report;
}

std::vector<std::string> bleu_tokenize(const std::string& text) {
  std::string spaced;
  spaced.reserve(text.size() + 8);
  for (char c : text) {
    if (c == '.' || c == ',' || c == '!' || c == '?') {
      spaced.push_back(' ');
      spaced.push_back(c);
      spaced.push_back(' ');
    } else {
      spaced.push_back(c);
    }
  }
  std::vector<std::string> tokens;
  std::istringstream in(spaced);
  std::string token;
  while (in >> token) tokens.push_back(std::move(token));
  return tokens;
}

BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references) {
  if (hypotheses.size() != references.size()) {
    throw std::invalid_argument("corpus BLEU needs parallel lists; got " +
                                std::to_string(hypotheses.size()) + " hypotheses and " +
                                std::to_string(references.size()) + " references");
  }
  if (hypotheses.empty()) {
    throw std::invalid_argument("corpus BLEU needs at least one sentence pair");
  }

  constexpr int kMaxOrder = 4;
  std::array<long long, kMaxOrder> matched{};
  std::array<long long, kMaxOrder> total{};
  BleuReport report;

  for (std::size_t pair = 0; pair < hypotheses.size(); ++pair) {
    const std::vector<std::string> hyp = bleu_tokenize(hypotheses[pair]);
    const std::vector<std::string> ref = bleu_tokenize(references[pair]);
    report.hyp_tokens += static_cast<long long>(hyp.size());
    report.ref_tokens += static_cast<long long>(ref.size());

    for (int order = 1; order <= kMaxOrder; ++order) {
      // Clipped matches: each hypothesis n-gram counts at most as often as it
      // appears in the reference. N-grams are keyed by joining tokens with a
      // separator that cannot appear inside one.
      auto ngram_counts = [order](const std::vector<std::string>& tokens) {
        std::unordered_map<std::string, long long> counts;
        for (std::size_t start = 0; start + order <= tokens.size(); ++start) {
          std::string key;
          for (int j = 0; j < order; ++j) {
            if (j > 0) key.push_back('\x1f');
            key += tokens[start + j];
          }
          ++counts[key];
        }
        return counts;
      };
      const auto hyp_counts = ngram_counts(hyp);
      const auto ref_counts = ngram_counts(ref);
      for (const auto& [key, count] : hyp_counts) {
        const auto it = ref_counts.find(key);
        if (it != ref_counts.end()) {
          matched[order - 1] += std::min(count, it->second);
        }
        total[order - 1] += count;
      }
    }
  }

  bool any_zero = false;
  double log_precision_sum = 0.0;
  for (int order = 0; order < kMaxOrder; ++order) {
    const double precision =
        total[order] > 0 ? static_cast<double>(matched[order]) / static_cast<double>(total[order])
                         : 0.0;
    report.precisions[static_cast<std::size_t>(order)] = precision;
    if (precision > 0.0) {
      log_precision_sum += std::log(precision);
    } else {
      any_zero = true;
    }
  }

  if (report.hyp_tokens == 0) {
    report.brevity_penalty = 0.0;
    report.score = 0.0;
    return report;
  }
  report.brevity_penalty = std::min(
      1.0, std::exp(1.0 - static_cast<double>(report.ref_tokens) /
                              static_cast<double>(report.hyp_tokens)));
  report.score = any_zero ? 0.0
                          : 100.0 * report.brevity_penalty *
                                std::exp(log_precision_sum / static_cast<double>(kMaxOrder));
  return report;
}

CorpusReport aggregate(const std::vector<LatencyReport>& latencies,
                       const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references) {
  if (latencies.size() != hypotheses.size() || hypotheses.size() != references.size()) {
    throw std::invalid_argument("aggregate needs parallel per-utterance lists");
  }
  if (latencies.empty()) {
    throw std::invalid_argument("aggregate needs at least one utterance");
  }

  CorpusReport corpus;
  corpus.utterances = static_cast<int>(latencies.size());

  double al_sum = 0.0, laal_sum = 0.0, ca_sum = 0.0;
  int al_n = 0, laal_n = 0, ca_n = 0;
  for (const LatencyReport& one : latencies) {
    if (one.al_ms) {
      al_sum += *one.al_ms;
      ++al_n;
    }
    if (one.laal_ms) {
      laal_sum += *one.laal_ms;
      ++laal_n;
    }
    if (one.laal_ca_ms) {
      ca_sum += *one.laal_ca_ms;
      ++ca_n;
    }
  }
  corpus.with_latency = al_n;
  if (al_n > 0) corpus.mean_latency.al_ms = al_sum / al_n;
  if (laal_n > 0) corpus.mean_latency.laal_ms = laal_sum / laal_n;
  if (ca_n > 0) corpus.mean_latency.laal_ca_ms = ca_sum / ca_n;

  corpus.bleu = corpus_bleu(hypotheses, references);
  return corpus;
}

std::string format_seconds(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", ms / 1000.0);
  return buf;
}

std::string format_bleu(double score) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", score);
  return buf;
}

}  // namespace simulst
