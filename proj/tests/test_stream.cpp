// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/stream.hpp"

#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "test_util.hpp"

using namespace simulst;

TEST_CASE("build_schedule walks start then chunk steps, clamped to the stream end") {
  SUBCASE("regular schedule") {
    const ChunkSchedule s = build_schedule(6000, 2000, 2500);
    CHECK(s.decision_times_ms == std::vector<std::int64_t>{2000, 4500, 6000});
    CHECK(s.source_finished_at == 6000);
  }
  SUBCASE("stream ends exactly at the start wait") {
    const ChunkSchedule s = build_schedule(2000, 2000, 2500);
    CHECK(s.decision_times_ms == std::vector<std::int64_t>{2000});
    CHECK(s.source_finished_at == 2000);
  }
  SUBCASE("stream shorter than the start wait") {
    const ChunkSchedule s = build_schedule(1500, 2000, 2500);
    CHECK(s.decision_times_ms == std::vector<std::int64_t>{1500});
    CHECK(s.source_finished_at == 1500);
  }
  SUBCASE("non-positive arguments are rejected") {
    CHECK_THROWS_AS(build_schedule(0, 2000, 2500), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(6000, 0, 2500), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(6000, 2000, 0), std::invalid_argument);
  }
}

TEST_CASE("schedule invariants hold on randomized inputs") {
  test::TestRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t duration = rng.next_int(1, 20000);
    const std::int64_t start = rng.next_int(1, 5000);
    const std::int64_t chunk = rng.next_int(1, 5000);
    const ChunkSchedule s = build_schedule(duration, start, chunk);

    REQUIRE(!s.decision_times_ms.empty());
    CHECK(s.decision_times_ms.front() == std::min(start, duration));
    CHECK(s.decision_times_ms.back() == duration);
    CHECK(s.source_finished_at == duration);
    for (std::size_t j = 1; j < s.decision_times_ms.size(); ++j) {
      CHECK(s.decision_times_ms[j] > s.decision_times_ms[j - 1]);
      // Gaps equal chunk except possibly the final clamped one.
      if (j + 1 < s.decision_times_ms.size()) {
        CHECK(s.decision_times_ms[j] - s.decision_times_ms[j - 1] == chunk);
      } else {
        CHECK(s.decision_times_ms[j] - s.decision_times_ms[j - 1] <= chunk);
      }
    }
  }
}

TEST_CASE("frames_available floors elapsed time to whole frames") {
  const SpeechStream stream = SpeechStream::synthetic("s", 6000, 50);
  CHECK(frames_available(stream, 2000) == 100);
  CHECK(frames_available(stream, 0) == 0);
  CHECK(frames_available(stream, 4500) == 225);
  CHECK(frames_available(stream, 6000) == stream.total_frames());

  CHECK_THROWS_AS(frames_available(stream, -1), std::out_of_range);
  CHECK_THROWS_AS(frames_available(stream, 6001), std::out_of_range);

  // Monotone in t.
  int prev = 0;
  for (std::int64_t t = 0; t <= 6000; t += 97) {
    const int f = frames_available(stream, t);
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("SpeechStream validates its shape") {
  CHECK_THROWS_AS(SpeechStream::synthetic("s", 0, 50), std::invalid_argument);
  CHECK_THROWS_AS(SpeechStream::synthetic("s", 6000, 0), std::invalid_argument);

  // Stored frames must match floor(duration * rate / 1000) exactly.
  CHECK_THROWS_AS(SpeechStream::with_frames("s", 6000, 50, FeatureMatrix(299, 4)),
                  std::invalid_argument);
  const SpeechStream ok = SpeechStream::with_frames("s", 6000, 50, FeatureMatrix(300, 4));
  CHECK(ok.total_frames() == 300);
  CHECK(ok.feature_dim() == 4);
  CHECK(ok.has_stored_frames());

  const SpeechStream synth = SpeechStream::synthetic("t", 1000, 50, 8);
  CHECK(synth.total_frames() == 50);
  CHECK(!synth.has_stored_frames());
  CHECK_THROWS_AS(synth.stored_frames(), std::logic_error);
}

TEST_CASE("CommitLog appends monotone entries and never revises") {
  CommitLog log;
  CHECK(log.empty());

  SUBCASE("append to empty, then extend") {
    log.commit(std::vector<int>{10, 11}, 4500, 4600);
    CHECK(log.size() == 2);
    CHECK(log.delays_ms() == std::vector<std::int64_t>{4500, 4500});
    CHECK(log.elapsed_ms() == std::vector<std::int64_t>{4600, 4600});

    const std::vector<CommitEntry> before = log.entries();
    log.commit(std::vector<int>{12}, 6000, 6100);
    CHECK(log.size() == 3);
    CHECK(log.delays_ms() == std::vector<std::int64_t>{4500, 4500, 6000});
    CHECK(log.tokens() == std::vector<int>{10, 11, 12});
    // Earlier entries are bit-identical after the append.
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(log.entries()[i] == before[i]);
    }
  }

  SUBCASE("contract violations are bug traps") {
    log.commit(std::vector<int>{10}, 6000, 6000);
    CHECK_THROWS_AS(log.commit(std::vector<int>{11}, 4500, 6500), std::logic_error);
    CHECK_THROWS_AS(log.commit(std::vector<int>{11}, 6200, 6100), std::logic_error);
    CHECK_THROWS_AS(log.commit(std::vector<int>{11}, 6000, 5900), std::logic_error);
  }

  SUBCASE("empty token list is an input error") {
    CHECK_THROWS_AS(log.commit(std::vector<int>{}, 100, 100), std::invalid_argument);
  }
}

TEST_CASE("AgentAction Write must carry at least one token") {
  CHECK(AgentAction::read().kind == AgentAction::Kind::Read);
  CHECK(AgentAction::write({1}).kind == AgentAction::Kind::Write);
  CHECK_THROWS_AS(AgentAction::write({}), std::invalid_argument);
}
