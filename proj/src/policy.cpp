// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/policy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace simulst {

void PolicyConfig::validate() const {
  if (start_ms < 1) {
    throw std::invalid_argument("start_ms must be >= 1, got " + std::to_string(start_ms));
  }
  if (chunk_ms < 1) {
    throw std::invalid_argument("chunk_ms must be >= 1, got " + std::to_string(chunk_ms));
  }
  if (hold_n < 0) {
    throw std::invalid_argument("hold_n must be >= 0, got " + std::to_string(hold_n));
  }
  if (beam < 1) {
    throw std::invalid_argument("beam must be >= 1, got " + std::to_string(beam));
  }
  if (max_len < 1) {
    throw std::invalid_argument("max_len must be >= 1, got " + std::to_string(max_len));
  }
}

FixedCost::FixedCost(double ms) : ms_(ms) {
  if (!(ms >= 0.0)) {
    throw std::invalid_argument("fixed decision cost must be >= 0 ms");
  }
}

double FixedCost::charge_ms(double /*measured_wall_ms*/) const { return ms_; }

double MeasuredCost::charge_ms(double measured_wall_ms) const {
  return std::max(measured_wall_ms, 0.0);
}

SelectiveResult selective_output(std::span<const int> hypothesis, int hold_n,
                                 bool source_finished) {
  if (hold_n < 0) {
    throw std::invalid_argument("hold_n must be >= 0, got " + std::to_string(hold_n));
  }
  if (source_finished) {
    return SelectiveResult::output({hypothesis.begin(), hypothesis.end()});
  }
  const int length = static_cast<int>(hypothesis.size());
  const int held = std::min(hold_n, length);
  const int stable = length - held;
  if (stable == 0) return SelectiveResult::read_more();
  return SelectiveResult::output({hypothesis.begin(), hypothesis.begin() + stable});
}

StreamSession::StreamSession(const SpeechStream& stream, const Encoder& encoder,
                             const AdapterConfig& adapter, const ScoreModel& model,
                             PolicyConfig config, const CostModel& cost)
    : stream_(&stream),
      encoder_(&encoder),
      adapter_(&adapter),
      model_(&model),
      config_(config),
      cost_(&cost) {
  config_.validate();
  adapter_->validate();
  schedule_ = build_schedule(stream.duration_ms(), config_.start_ms, config_.chunk_ms);
}

bool StreamSession::finished() const { return next_decision_ >= schedule_.decision_times_ms.size(); }

StepResult StreamSession::step() {
  if (finished()) {
    throw std::logic_error("step() called after the stream finished");
  }
  const std::int64_t now_ms = schedule_.decision_times_ms[next_decision_];
  const bool source_finished =
      next_decision_ + 1 == schedule_.decision_times_ms.size();
  ++next_decision_;

  const auto wall_start = std::chrono::steady_clock::now();

  const int frames = frames_available(*stream_, now_ms);
  const FeatureMatrix encoded = encoder_->encode(*stream_, frames);
  const FeatureMatrix adapted = adapt(encoded, *adapter_);

  const std::vector<int> committed = log_.tokens();
  const std::vector<Hypothesis> hyps =
      beam_search(*model_, adapted, config_.beam, config_.max_len, committed);
  const Hypothesis& best = hyps.front();
  // Impossible under forced-prefix decoding; trapped defensively because a
  // hypothesis that drops committed tokens would mean revising sent output.
  if (best.tokens.size() < committed.size() ||
      !std::equal(committed.begin(), committed.end(), best.tokens.begin())) {
    throw std::logic_error("decoder hypothesis does not extend the committed tokens");
  }

  const SelectiveResult decision = selective_output(best.tokens, config_.hold_n, source_finished);

  const auto wall_end = std::chrono::steady_clock::now();
  const double measured_ms =
      std::chrono::duration<double, std::milli>(wall_end - wall_start).count();
  const double charged_ms = cost_->charge_ms(measured_ms);
  if (!(charged_ms >= 0.0)) {
    throw std::logic_error("cost model charged a negative decision cost");
  }
  compute_ms_ += charged_ms;

  StepResult result;
  result.decision_time_ms = now_ms;
  result.source_finished = source_finished;
  result.hypothesis = best.tokens;
  result.compute_ms = charged_ms;

  if (decision.kind == SelectiveResult::Kind::Output && decision.prefix.size() > committed.size()) {
    const std::vector<int> fresh(decision.prefix.begin() +
                                     static_cast<std::ptrdiff_t>(committed.size()),
                                 decision.prefix.end());
    // The stable prefix extends the committed tokens by construction (they
    // were forced during decoding); only the extension is committed.
    const std::int64_t elapsed_ms = now_ms + static_cast<std::int64_t>(std::llround(compute_ms_));
    log_.commit(fresh, now_ms, elapsed_ms);
    result.action = AgentAction::write(fresh);
  } else {
    result.action = AgentAction::read();
  }
  return result;
}

StreamResult run_stream(const SpeechStream& stream, const Encoder& encoder,
                        const AdapterConfig& adapter, const ScoreModel& model,
                        const PolicyConfig& config, const CostModel& cost) {
  StreamSession session(stream, encoder, adapter, model, config, cost);
  StreamResult result;
  while (!session.finished()) {
    result.steps.push_back(session.step());
  }
  result.log = session.log();
  result.total_compute_ms = session.total_compute_ms();
  return result;
}

}  // namespace simulst
