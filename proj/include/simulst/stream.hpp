// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simulst/feature.hpp"

namespace simulst {

/// A timed source signal. Frames are either stored up front (precomputed
/// features) or generated deterministically on demand (synthetic streams).
class SpeechStream {
 public:
  static SpeechStream with_frames(std::string id, std::int64_t duration_ms, int frame_rate_hz,
                                  FeatureMatrix frames);
  static SpeechStream synthetic(std::string id, std::int64_t duration_ms, int frame_rate_hz,
                                int feature_dim = 8);

  const std::string& id() const { return id_; }
  std::int64_t duration_ms() const { return duration_ms_; }
  int frame_rate_hz() const { return frame_rate_hz_; }
  int feature_dim() const { return feature_dim_; }

  /// floor(duration_ms * frame_rate_hz / 1000)
  int total_frames() const;

  bool has_stored_frames() const { return frames_.has_value(); }
  const FeatureMatrix& stored_frames() const;

 private:
  SpeechStream() = default;

  std::string id_;
  std::int64_t duration_ms_ = 0;
  int frame_rate_hz_ = 0;
  int feature_dim_ = 0;
  std::optional<FeatureMatrix> frames_;
};

/// Source audio frames available at time t_ms: floor(t_ms * rate / 1000).
int frames_available(const SpeechStream& stream, std::int64_t t_ms);

/// Decision points of a chunked stream: the first at min(start_ms, duration_ms),
/// then one every chunk_ms, the last clamped to the stream end. The final
/// decision time is always exactly duration_ms and is the source_finished point.
struct ChunkSchedule {
  std::vector<std::int64_t> decision_times_ms;
  std::int64_t source_finished_at = 0;
};

ChunkSchedule build_schedule(std::int64_t duration_ms, std::int64_t start_ms,
                             std::int64_t chunk_ms);

struct AgentAction {
  enum class Kind { Read, Write };
  Kind kind = Kind::Read;
  std::vector<int> tokens;  // non-empty iff kind == Write

  static AgentAction read() { return {}; }
  static AgentAction write(std::vector<int> tokens);
};

struct CommitEntry {
  int token = 0;
  std::int64_t delay_ms = 0;    // source audio consumed at emission
  std::int64_t elapsed_ms = 0;  // clock time since stream start at emission

  bool operator==(const CommitEntry&) const = default;
};

/// Append-only record of emitted target tokens. Delays and elapsed stamps are
/// monotone and entries are never revised; a violated precondition is a bug in
/// the caller and throws std::logic_error.
class CommitLog {
 public:
  void commit(std::span<const int> tokens, std::int64_t delay_ms, std::int64_t elapsed_ms);

  const std::vector<CommitEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<int> tokens() const;
  std::vector<std::int64_t> delays_ms() const;
  std::vector<std::int64_t> elapsed_ms() const;

 private:
  std::vector<CommitEntry> entries_;
};

}  // namespace simulst
