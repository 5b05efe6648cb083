// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "simulst/adapter.hpp"
#include "simulst/beam.hpp"
#include "simulst/stream.hpp"

namespace simulst {

/// Streaming policy settings. Defaults match the evaluation harness defaults.
struct PolicyConfig {
  int start_ms = 2000;  ///< first decision point (clamped to the stream end)
  int chunk_ms = 2500;  ///< spacing between later decision points
  int hold_n = 7;       ///< trailing hypothesis tokens withheld until more speech arrives
  int beam = 4;
  int max_len = 256;    ///< hard cap on hypothesis length, committed tokens included

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Converts the wall time a decision's compute took into the cost charged
/// against the session clock. A fixed cost keeps runs reproducible; a measured
/// cost yields computation-aware latency numbers.
class CostModel {
 public:
  virtual ~CostModel() = default;
  virtual double charge_ms(double measured_wall_ms) const = 0;
};

/// Charges a constant per decision, ignoring the measurement.
class FixedCost final : public CostModel {
 public:
  explicit FixedCost(double ms);
  double charge_ms(double measured_wall_ms) const override;

 private:
  double ms_;
};

/// Charges the measured wall time itself.
class MeasuredCost final : public CostModel {
 public:
  double charge_ms(double measured_wall_ms) const override;
};

/// Outcome of the truncation rule: either a stable prefix of the hypothesis to
/// output, or the request to read more speech first. The prefix may equal the
/// full hypothesis (and may even be empty) once the source has finished.
struct SelectiveResult {
  enum class Kind { Output, ReadMore };
  Kind kind = Kind::ReadMore;
  std::vector<int> prefix;  ///< meaningful only when kind == Output

  static SelectiveResult read_more() { return {}; }
  static SelectiveResult output(std::vector<int> prefix) {
    return {Kind::Output, std::move(prefix)};
  }
};

/// Truncation rule applied to a chunk's best hypothesis.
///
/// While the source is still producing speech, the last min(hold_n, l) tokens
/// of the l-token hypothesis are withheld and only the leading stable part may
/// be output; an empty stable part means read more speech instead. Once the
/// source has finished, the full hypothesis is output. The result carries the
/// whole stable prefix, not a delta.
SelectiveResult selective_output(std::span<const int> hypothesis, int hold_n,
                                 bool source_finished);

/// What one decision point did. `action` is Write with exactly the tokens
/// newly committed at this decision, or Read when nothing new was released
/// (including a final decision that added nothing).
struct StepResult {
  std::int64_t decision_time_ms = 0;
  bool source_finished = false;
  AgentAction action;
  std::vector<int> hypothesis;  ///< full best-hypothesis tokens at this decision
  double compute_ms = 0.0;      ///< cost charged against the clock for this decision
};

/// Drives one stream through the decision schedule: at each decision point it
/// encodes the speech seen so far, re-decodes with the committed tokens forced,
/// and commits whatever new tokens the truncation rule releases.
class StreamSession {
 public:
  /// All referenced objects must outlive the session.
  StreamSession(const SpeechStream& stream, const Encoder& encoder, const AdapterConfig& adapter,
                const ScoreModel& model, PolicyConfig config, const CostModel& cost);

  bool finished() const;

  /// Runs the next decision point. Throws std::logic_error when finished().
  StepResult step();

  const CommitLog& log() const { return log_; }
  const ChunkSchedule& schedule() const { return schedule_; }
  double total_compute_ms() const { return compute_ms_; }

 private:
  const SpeechStream* stream_;
  const Encoder* encoder_;
  const AdapterConfig* adapter_;
  const ScoreModel* model_;
  PolicyConfig config_;
  const CostModel* cost_;
  ChunkSchedule schedule_;
  std::size_t next_decision_ = 0;
  CommitLog log_;
  double compute_ms_ = 0.0;
};

/// Everything run_stream() produces for one stream.
struct StreamResult {
  std::vector<StepResult> steps;
  CommitLog log;
  double total_compute_ms = 0.0;
};

/// Runs a fresh session over the whole stream and returns the trace.
StreamResult run_stream(const SpeechStream& stream, const Encoder& encoder,
                        const AdapterConfig& adapter, const ScoreModel& model,
                        const PolicyConfig& config, const CostModel& cost);

}  // namespace simulst
