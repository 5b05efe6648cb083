// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace simulst {

/// Row-major T x d matrix of feature vectors. Rows are time steps.
/// All values must be finite; rows may be zero (empty prefix).
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(int rows, int dim);
  FeatureMatrix(int rows, int dim, std::vector<double> values);

  int rows() const { return rows_; }
  int dim() const { return dim_; }
  bool empty() const { return rows_ == 0; }

  double operator()(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * dim_ + col];
  }
  double& operator()(int row, int col) {
    return values_[static_cast<std::size_t>(row) * dim_ + col];
  }
  std::span<const double> row(int r) const;
  const std::vector<double>& values() const { return values_; }

  bool operator==(const FeatureMatrix&) const = default;

 private:
  int rows_ = 0;
  int dim_ = 0;
  std::vector<double> values_;
};

struct FeatureFile {
  int frame_rate_hz = 0;
  FeatureMatrix frames;
};

/// Text format: header line "frame_rate_hz=<int> dim=<int>", then one
/// whitespace-separated row of `dim` reals per frame.
FeatureFile read_feature_file(const std::filesystem::path& path);
void write_feature_file(const std::filesystem::path& path, const FeatureFile& file);

}  // namespace simulst
