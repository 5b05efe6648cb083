// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "simulst/feature.hpp"
#include "simulst/stream.hpp"

namespace simulst {

enum class Activation { None, Rectifier };

/// One 1-d convolution layer over the time axis with zero padding on both
/// sides. Weight layout is row-major filters x (kernel * input_dim), a
/// filter's row ordered by tap position then input channel.
struct ConvSpec {
  int kernel = 1;
  int stride = 1;
  int padding = 0;
  int filters = 1;
  int input_dim = 1;
  std::vector<double> weights;
  std::vector<double> bias;
  Activation activation = Activation::None;

  void validate() const;

  static ConvSpec identity(int dim);
  static ConvSpec seeded(int input_dim, int filters, int kernel, int stride, int padding,
                         Activation activation, std::uint64_t seed);
};

/// Output rows of a strided conv: floor((T - k + 2p) / s) + 1.
/// Returns 0 when T - k + 2p < 0, i.e. no valid window even after padding;
/// a zero result is the degenerate-input signal.
int output_length(int T, int k, int s, int p);

FeatureMatrix conv1d_forward(const FeatureMatrix& input, const ConvSpec& spec);

/// Two stacked convolutions followed by a row-wise affine projection into the
/// decoder embedding space.
struct AdapterConfig {
  ConvSpec conv1;
  ConvSpec conv2;
  std::vector<double> projector_weights;  // output_dim x conv2.filters, row-major
  std::vector<double> projector_bias;     // output_dim

  int output_dim() const { return static_cast<int>(projector_bias.size()); }
  void validate() const;

  /// Shape-preserving adapter: 1x1 identity convs and an identity projector.
  static AdapterConfig identity(int dim);
  /// Toy adapter at real-model shape: two (k=5, s=2, p=2) rectifier convs and
  /// a seeded random projector.
  static AdapterConfig seeded(int input_dim, int filters, int output_dim, std::uint64_t seed);
};

FeatureMatrix adapt(const FeatureMatrix& input, const AdapterConfig& config);

/// Pluggable speech encoder. Every call re-computes the representation of the
/// given prefix from scratch; no state is carried between calls, and rows
/// produced for a short prefix carry no guarantee about longer ones.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual FeatureMatrix encode(const SpeechStream& stream, int frames) const = 0;
};

/// Deterministic f x d matrix for the first `frames` frames of the stream:
/// the prefix of the stored frames when present, otherwise synthesized rows
/// keyed on the stream id.
FeatureMatrix mock_encode(const SpeechStream& stream, int frames);

class MockEncoder final : public Encoder {
 public:
  FeatureMatrix encode(const SpeechStream& stream, int frames) const override {
    return mock_encode(stream, frames);
  }
};

}  // namespace simulst
