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

#ifndef MVAWE_ADAM_HPP
#define MVAWE_ADAM_HPP

#include "mvawe/params.hpp"

namespace mvawe {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam.  Moment accumulators mirror the parameter shapes;
// the step counter increases by exactly 1 per update() call.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

  // Applies one update in place.  Parameters without a gradient entry are
  // treated as zero-gradient (moments still decay).
  void update(ParamSet& params, const ParamSet& grads);

  uint64_t step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  uint64_t t_ = 0;
  ParamSet m_, v_;
};

}  // namespace mvawe

#endif  // MVAWE_ADAM_HPP
