// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/stream.hpp"

#include <algorithm>
#include <stdexcept>

namespace simulst {

namespace {

void check_timing(std::int64_t duration_ms, int frame_rate_hz) {
  if (duration_ms <= 0) {
    throw std::invalid_argument("SpeechStream: duration_ms must be positive");
  }
  if (frame_rate_hz <= 0) {
    throw std::invalid_argument("SpeechStream: frame_rate_hz must be positive");
  }
}

}  // namespace

SpeechStream SpeechStream::with_frames(std::string id, std::int64_t duration_ms, int frame_rate_hz,
                                       FeatureMatrix frames) {
  check_timing(duration_ms, frame_rate_hz);
  SpeechStream s;
  s.id_ = std::move(id);
  s.duration_ms_ = duration_ms;
  s.frame_rate_hz_ = frame_rate_hz;
  s.feature_dim_ = frames.dim();
  s.frames_ = std::move(frames);
  if (s.frames_->rows() != s.total_frames()) {
    throw std::invalid_argument("SpeechStream: stored frame count " +
                                std::to_string(s.frames_->rows()) + " does not equal floor(" +
                                std::to_string(duration_ms) + "*" + std::to_string(frame_rate_hz) +
                                "/1000)");
  }
  return s;
}

SpeechStream SpeechStream::synthetic(std::string id, std::int64_t duration_ms, int frame_rate_hz,
                                     int feature_dim) {
  check_timing(duration_ms, frame_rate_hz);
  if (feature_dim < 1) {
    throw std::invalid_argument("SpeechStream: feature_dim must be >= 1");
  }
  SpeechStream s;
  s.id_ = std::move(id);
  s.duration_ms_ = duration_ms;
  s.frame_rate_hz_ = frame_rate_hz;
  s.feature_dim_ = feature_dim;
  return s;
}

int SpeechStream::total_frames() const {
  return static_cast<int>(duration_ms_ * frame_rate_hz_ / 1000);
}

const FeatureMatrix& SpeechStream::stored_frames() const {
  if (!frames_) {
    throw std::logic_error("SpeechStream: synthetic stream has no stored frames");
  }
  return *frames_;
}

int frames_available(const SpeechStream& stream, std::int64_t t_ms) {
  if (t_ms < 0 || t_ms > stream.duration_ms()) {
    throw std::out_of_range("frames_available: t_ms outside [0, duration_ms]");
  }
  return static_cast<int>(t_ms * stream.frame_rate_hz() / 1000);
}

ChunkSchedule build_schedule(std::int64_t duration_ms, std::int64_t start_ms,
                             std::int64_t chunk_ms) {
  if (duration_ms <= 0 || start_ms <= 0 || chunk_ms <= 0) {
    throw std::invalid_argument("build_schedule: all arguments must be positive");
  }
  ChunkSchedule schedule;
  std::int64_t t = std::min(start_ms, duration_ms);
  schedule.decision_times_ms.push_back(t);
  while (t < duration_ms) {
    t = std::min(t + chunk_ms, duration_ms);
    schedule.decision_times_ms.push_back(t);
  }
  schedule.source_finished_at = duration_ms;
  return schedule;
}

AgentAction AgentAction::write(std::vector<int> tokens) {
  if (tokens.empty()) {
    throw std::invalid_argument("AgentAction: Write requires at least one token");
  }
  return {Kind::Write, std::move(tokens)};
}

void CommitLog::commit(std::span<const int> tokens, std::int64_t delay_ms,
                       std::int64_t elapsed_ms) {
  if (tokens.empty()) {
    throw std::invalid_argument("CommitLog::commit: empty token sequence");
  }
  if (elapsed_ms < delay_ms) {
    throw std::logic_error("CommitLog::commit: emission before the consumed audio has played");
  }
  if (!entries_.empty()) {
    const CommitEntry& last = entries_.back();
    if (delay_ms < last.delay_ms) {
      throw std::logic_error("CommitLog::commit: delay regression");
    }
    if (elapsed_ms < last.elapsed_ms) {
      throw std::logic_error("CommitLog::commit: elapsed-time regression");
    }
  }
  for (int token : tokens) {
    entries_.push_back(CommitEntry{token, delay_ms, elapsed_ms});
  }
}

std::vector<int> CommitLog::tokens() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const CommitEntry& e : entries_) {
    out.push_back(e.token);
  }
  return out;
}

std::vector<std::int64_t> CommitLog::delays_ms() const {
  std::vector<std::int64_t> out;
  out.reserve(entries_.size());
  for (const CommitEntry& e : entries_) {
    out.push_back(e.delay_ms);
  }
  return out;
}

std::vector<std::int64_t> CommitLog::elapsed_ms() const {
  std::vector<std::int64_t> out;
  out.reserve(entries_.size());
  for (const CommitEntry& e : entries_) {
    out.push_back(e.elapsed_ms);
  }
  return out;
}

}  // namespace simulst
