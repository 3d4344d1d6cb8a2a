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

#include "mvawe/adam.hpp"

#include <cmath>

namespace mvawe {

void AdamState::update(ParamSet& params, const ParamSet& grads) {
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (auto& [name, p] : params) {
    auto git = grads.find(name);
    static const std::vector<double> kEmpty;
    const std::vector<double>* g = git != grads.end() ? &git->second.data : nullptr;
    if (g && g->size() != p.numel())
      throw ConfigError("adam: gradient shape mismatch for " + name);
    Tensor& m = m_.try_emplace(name, Tensor(p.shape)).first->second;
    Tensor& v = v_.try_emplace(name, Tensor(p.shape)).first->second;
    if (!m.same_shape(p) || !v.same_shape(p))
      throw ConfigError("adam: accumulator shape mismatch for " + name);
    for (size_t i = 0; i < p.numel(); ++i) {
      double gi = g ? (*g)[i] : 0.0;
      m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * gi;
      v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * gi * gi;
      double mhat = m.data[i] / bc1;
      double vhat = v.data[i] / bc2;
      p.data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace mvawe
