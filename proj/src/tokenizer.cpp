// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/tokenizer.hpp"

#include <cctype>
#include <stdexcept>

namespace simulst {

Vocabulary::Vocabulary() {
  words_ = {"<pad>", "<s>", "</s>"};
  for (int i = 0; i < static_cast<int>(words_.size()); ++i) {
    ids_.emplace(words_[i], i);
  }
}

int Vocabulary::intern(std::string_view word) {
  if (word.empty()) {
    throw std::invalid_argument("Vocabulary::intern: empty word");
  }
  auto it = ids_.find(std::string(word));
  if (it != ids_.end()) {
    return it->second;
  }
  const int id = static_cast<int>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

std::optional<int> Vocabulary::lookup(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) {
    return std::nullopt;
  }
  return it->second;
}

const std::string& Vocabulary::word(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("Vocabulary::word: unknown id " + std::to_string(id));
  }
  return words_[id];
}

std::vector<int> Vocabulary::tokenize(std::string_view text) {
  std::vector<int> ids;
  for (const std::string& w : split_words(text)) {
    ids.push_back(intern(w));
  }
  return ids;
}

std::string Vocabulary::detokenize(std::span<const int> ids) const {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += word(ids[i]);
  }
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        words.push_back(std::move(current));
        current.clear();
      }
    } else {
      current += c;
    }
  }
  if (!current.empty()) {
    words.push_back(std::move(current));
  }
  return words;
}

}  // namespace simulst
