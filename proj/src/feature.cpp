// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/feature.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace simulst {

namespace {

void check_shape(int rows, int dim) {
  if (rows < 0 || dim < 0) {
    throw std::invalid_argument("FeatureMatrix: negative shape");
  }
}

}  // namespace

FeatureMatrix::FeatureMatrix(int rows, int dim)
    : rows_(rows), dim_(dim), values_(static_cast<std::size_t>(rows) * dim, 0.0) {
  check_shape(rows, dim);
}

FeatureMatrix::FeatureMatrix(int rows, int dim, std::vector<double> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  check_shape(rows, dim);
  if (values_.size() != static_cast<std::size_t>(rows) * dim) {
    throw std::invalid_argument("FeatureMatrix: value count does not match rows*dim");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("FeatureMatrix: non-finite value");
    }
  }
}

std::span<const double> FeatureMatrix::row(int r) const {
  if (r < 0 || r >= rows_) {
    throw std::out_of_range("FeatureMatrix::row: index out of range");
  }
  return {values_.data() + static_cast<std::size_t>(r) * dim_, static_cast<std::size_t>(dim_)};
}

FeatureFile read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open feature file: " + path.string());
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("feature file " + path.string() + ": missing header");
  }
  int rate = 0;
  int dim = 0;
  if (std::sscanf(header.c_str(), "frame_rate_hz=%d dim=%d", &rate, &dim) != 2 || rate <= 0 ||
      dim <= 0) {
    throw std::runtime_error("feature file " + path.string() + ": bad header '" + header + "'");
  }

  std::vector<double> values;
  std::string line;
  int lineno = 1;
  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream row(line);
    std::vector<double> vals;
    double v = 0.0;
    while (row >> v) {
      vals.push_back(v);
    }
    if (vals.empty()) {
      continue;  // blank line
    }
    if (static_cast<int>(vals.size()) != dim) {
      throw std::runtime_error("feature file " + path.string() + " line " +
                               std::to_string(lineno) + ": expected " + std::to_string(dim) +
                               " values, got " + std::to_string(vals.size()));
    }
    values.insert(values.end(), vals.begin(), vals.end());
    ++rows;
  }
  return FeatureFile{rate, FeatureMatrix(rows, dim, std::move(values))};
}

void write_feature_file(const std::filesystem::path& path, const FeatureFile& file) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write feature file: " + path.string());
  }
  out << "frame_rate_hz=" << file.frame_rate_hz << " dim=" << file.frames.dim() << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int r = 0; r < file.frames.rows(); ++r) {
    for (int c = 0; c < file.frames.dim(); ++c) {
      if (c > 0) {
        out << ' ';
      }
      out << file.frames(r, c);
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

}  // namespace simulst
