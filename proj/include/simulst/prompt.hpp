// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <variant>
#include <vector>

#include "simulst/feature.hpp"

namespace simulst {

// Decoder input template segments. The template is symbolic: embedding lookup
// of token segments is the score model's concern.
enum class Marker { User, Assistant };

struct SystemPrompt {
  std::vector<int> tokens;
};

struct SpeechEmbedding {
  FeatureMatrix features;
};

struct TargetPrefix {
  std::vector<int> tokens;
};

using PromptSegment = std::variant<SystemPrompt, Marker, SpeechEmbedding, TargetPrefix>;

/// Always exactly five segments, in order:
/// [SystemPrompt, Marker::User, SpeechEmbedding, Marker::Assistant, TargetPrefix].
struct PromptSequence {
  std::vector<PromptSegment> segments;
};

inline PromptSequence compose_template(std::vector<int> system_prompt, FeatureMatrix speech,
                                       std::vector<int> target_prefix) {
  PromptSequence seq;
  seq.segments.reserve(5);
  seq.segments.emplace_back(SystemPrompt{std::move(system_prompt)});
  seq.segments.emplace_back(Marker::User);
  seq.segments.emplace_back(SpeechEmbedding{std::move(speech)});
  seq.segments.emplace_back(Marker::Assistant);
  seq.segments.emplace_back(TargetPrefix{std::move(target_prefix)});
  return seq;
}

}  // namespace simulst
