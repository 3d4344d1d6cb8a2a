// Copyright 2026 The mvawe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#ifndef MVAWE_TENSOR_HPP
#define MVAWE_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "mvawe/common.hpp"

namespace mvawe {

// Dense row-major tensor of doubles.  All training computation is double
// precision so finite-difference gradient checks are trustworthy.
struct Tensor {
  std::vector<size_t> shape;
  std::vector<double> data;
  bool requires_grad = false;

  Tensor() = default;
  Tensor(std::vector<size_t> s, double fill = 0.0)
      : shape(std::move(s)), data(numel_of(shape), fill) {}
  Tensor(std::vector<size_t> s, std::vector<double> d)
      : shape(std::move(s)), data(std::move(d)) {
    if (numel_of(shape) != data.size())
      throw ConfigError("tensor shape/data size mismatch");
  }

  static size_t numel_of(const std::vector<size_t>& s) {
    size_t n = 1;
    for (size_t d : s) {
      if (d == 0) throw ConfigError("tensor dimension must be positive");
      n *= d;
    }
    return n;
  }

  size_t numel() const { return data.size(); }
  size_t rank() const { return shape.size(); }

  // Matrix accessors (rank-2 tensors).
  size_t rows() const { return shape.at(0); }
  size_t cols() const { return shape.size() > 1 ? shape[1] : 1; }
  double& at(size_t r, size_t c) { return data[r * cols() + c]; }
  double at(size_t r, size_t c) const { return data[r * cols() + c]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  // Value equality; the requires_grad flag is bookkeeping, not content.
  bool operator==(const Tensor& o) const {
    return shape == o.shape && data == o.data;
  }
  bool operator!=(const Tensor& o) const { return !(*this == o); }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  static Tensor vec(std::vector<double> d) {
    std::vector<size_t> s{d.size()};
    return Tensor(std::move(s), std::move(d));
  }
  static Tensor scalar(double v) { return Tensor({1}, std::vector<double>{v}); }

  // Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
  static Tensor uniform_fan_in(std::vector<size_t> shape, size_t fan_in, Rng& rng) {
    Tensor t(std::move(shape));
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : t.data) v = rng.uniform(-bound, bound);
    return t;
  }
};

inline std::string shape_str(const std::vector<size_t>& s) {
  std::string out = "[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

}  // namespace mvawe

#endif  // MVAWE_TENSOR_HPP
