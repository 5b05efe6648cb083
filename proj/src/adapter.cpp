// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/adapter.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace simulst {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [-1, 1), bit-exact across platforms.
double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0) * 2.0 - 1.0;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

void ConvSpec::validate() const {
  if (kernel < 1 || stride < 1 || padding < 0 || filters < 1 || input_dim < 1) {
    throw std::invalid_argument("ConvSpec: invalid geometry");
  }
  const std::size_t want = static_cast<std::size_t>(filters) * kernel * input_dim;
  if (weights.size() != want) {
    throw std::invalid_argument("ConvSpec: weight count " + std::to_string(weights.size()) +
                                " does not match filters*kernel*input_dim=" + std::to_string(want));
  }
  if (bias.size() != static_cast<std::size_t>(filters)) {
    throw std::invalid_argument("ConvSpec: bias count does not match filters");
  }
}

ConvSpec ConvSpec::identity(int dim) {
  if (dim < 1) {
    throw std::invalid_argument("ConvSpec::identity: dim must be >= 1");
  }
  ConvSpec spec;
  spec.kernel = 1;
  spec.stride = 1;
  spec.padding = 0;
  spec.filters = dim;
  spec.input_dim = dim;
  spec.weights.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int f = 0; f < dim; ++f) {
    spec.weights[static_cast<std::size_t>(f) * dim + f] = 1.0;
  }
  spec.bias.assign(dim, 0.0);
  spec.activation = Activation::None;
  return spec;
}

ConvSpec ConvSpec::seeded(int input_dim, int filters, int kernel, int stride, int padding,
                          Activation activation, std::uint64_t seed) {
  ConvSpec spec;
  spec.kernel = kernel;
  spec.stride = stride;
  spec.padding = padding;
  spec.filters = filters;
  spec.input_dim = input_dim;
  spec.activation = activation;
  const std::size_t n = static_cast<std::size_t>(filters) * kernel * input_dim;
  spec.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    spec.weights[i] = 0.5 * to_unit(splitmix64(seed + i));
  }
  spec.bias.resize(filters);
  for (int f = 0; f < filters; ++f) {
    spec.bias[f] = 0.1 * to_unit(splitmix64(seed + n + f));
  }
  spec.validate();
  return spec;
}

int output_length(int T, int k, int s, int p) {
  if (T < 0 || k < 1 || s < 1 || p < 0) {
    throw std::invalid_argument("output_length: invalid arguments");
  }
  const int reach = T - k + 2 * p;
  if (reach < 0) {
    return 0;
  }
  return reach / s + 1;
}

FeatureMatrix conv1d_forward(const FeatureMatrix& input, const ConvSpec& spec) {
  spec.validate();
  if (input.dim() != spec.input_dim) {
    throw std::invalid_argument("conv1d_forward: input dim " + std::to_string(input.dim()) +
                                " does not match spec input_dim " +
                                std::to_string(spec.input_dim));
  }
  const int T = input.rows();
  const int n = output_length(T, spec.kernel, spec.stride, spec.padding);
  FeatureMatrix out(n, spec.filters);
  const int d = spec.input_dim;
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < spec.filters; ++f) {
      double acc = spec.bias[f];
      const double* w = spec.weights.data() + static_cast<std::size_t>(f) * spec.kernel * d;
      for (int j = 0; j < spec.kernel; ++j) {
        const int src = t * spec.stride + j - spec.padding;
        if (src < 0 || src >= T) {
          continue;  // zero padding
        }
        for (int ch = 0; ch < d; ++ch) {
          acc += w[j * d + ch] * input(src, ch);
        }
      }
      if (spec.activation == Activation::Rectifier) {
        acc = std::max(0.0, acc);
      }
      out(t, f) = acc;
    }
  }
  return out;
}

void AdapterConfig::validate() const {
  conv1.validate();
  conv2.validate();
  if (conv2.input_dim != conv1.filters) {
    throw std::invalid_argument("AdapterConfig: conv2 input dim must equal conv1 filters");
  }
  if (projector_bias.empty()) {
    throw std::invalid_argument("AdapterConfig: projector bias must be non-empty");
  }
  if (projector_weights.size() !=
      projector_bias.size() * static_cast<std::size_t>(conv2.filters)) {
    throw std::invalid_argument("AdapterConfig: projector weight count does not match "
                                "output_dim*conv2.filters");
  }
}

AdapterConfig AdapterConfig::identity(int dim) {
  AdapterConfig config;
  config.conv1 = ConvSpec::identity(dim);
  config.conv2 = ConvSpec::identity(dim);
  config.projector_weights.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    config.projector_weights[static_cast<std::size_t>(i) * dim + i] = 1.0;
  }
  config.projector_bias.assign(dim, 0.0);
  return config;
}

AdapterConfig AdapterConfig::seeded(int input_dim, int filters, int output_dim,
                                    std::uint64_t seed) {
  AdapterConfig config;
  config.conv1 =
      ConvSpec::seeded(input_dim, filters, 5, 2, 2, Activation::Rectifier, splitmix64(seed));
  config.conv2 =
      ConvSpec::seeded(filters, filters, 5, 2, 2, Activation::Rectifier, splitmix64(seed + 1));
  const std::size_t n = static_cast<std::size_t>(output_dim) * filters;
  config.projector_weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    config.projector_weights[i] = 0.5 * to_unit(splitmix64(seed + 2 + i));
  }
  config.projector_bias.resize(output_dim);
  for (int i = 0; i < output_dim; ++i) {
    config.projector_bias[i] = 0.1 * to_unit(splitmix64(seed + 2 + n + i));
  }
  config.validate();
  return config;
}

FeatureMatrix adapt(const FeatureMatrix& input, const AdapterConfig& config) {
  config.validate();
  const FeatureMatrix z = conv1d_forward(conv1d_forward(input, config.conv1), config.conv2);
  const int d_in = config.conv2.filters;
  const int d_out = config.output_dim();
  FeatureMatrix out(z.rows(), d_out);
  for (int r = 0; r < z.rows(); ++r) {
    for (int o = 0; o < d_out; ++o) {
      double acc = config.projector_bias[o];
      const double* w = config.projector_weights.data() + static_cast<std::size_t>(o) * d_in;
      for (int i = 0; i < d_in; ++i) {
        acc += w[i] * z(r, i);
      }
      out(r, o) = acc;
    }
  }
  return out;
}

FeatureMatrix mock_encode(const SpeechStream& stream, int frames) {
  if (frames < 0 || frames > stream.total_frames()) {
    throw std::out_of_range("mock_encode: frame count outside [0, total_frames]");
  }
  const int dim = stream.feature_dim();
  if (stream.has_stored_frames()) {
    const FeatureMatrix& stored = stream.stored_frames();
    std::vector<double> values(stored.values().begin(),
                               stored.values().begin() + static_cast<std::size_t>(frames) * dim);
    return FeatureMatrix(frames, dim, std::move(values));
  }
  const std::uint64_t seed = fnv1a(stream.id());
  std::vector<double> values(static_cast<std::size_t>(frames) * dim);
  for (int r = 0; r < frames; ++r) {
    for (int c = 0; c < dim; ++c) {
      values[static_cast<std::size_t>(r) * dim + c] =
          to_unit(splitmix64(seed ^ (static_cast<std::uint64_t>(r) * dim + c + 1)));
    }
  }
  return FeatureMatrix(frames, dim, std::move(values));
}

}  // namespace simulst
