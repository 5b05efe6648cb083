// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simulst {

/// Toy whitespace tokenizer with an interning vocabulary. Ids 0..2 are
/// reserved; word ids are assigned in first-seen order. detokenize(tokenize(x))
/// round-trips any text made of single-space separated words.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;

  Vocabulary();

  int intern(std::string_view word);
  std::optional<int> lookup(std::string_view word) const;
  const std::string& word(int id) const;
  int size() const { return static_cast<int>(words_.size()); }

  std::vector<int> tokenize(std::string_view text);
  std::string detokenize(std::span<const int> ids) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

/// Splits text on whitespace without touching a vocabulary.
std::vector<std::string> split_words(std::string_view text);

}  // namespace simulst
