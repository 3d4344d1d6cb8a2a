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

#ifndef MVAWE_GRADCHECK_HPP
#define MVAWE_GRADCHECK_HPP

#include <functional>

#include "mvawe/params.hpp"

namespace mvawe {

// Deterministic scalar objective over a parameter set.  When `grads` is
// non-null the analytic gradient must be filled in (one tensor per
// parameter, same shapes).
using LossFn = std::function<double(const ParamSet& params, ParamSet* grads)>;

// Compares analytic gradients against central finite differences and
// returns max over all coordinates of
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-5).
// The 1e-5 floor keeps finite-difference roundoff on near-zero-gradient
// coordinates from registering as relative error; absolute gradient errors
// down to ~1e-9 are still detected at typical tolerances.
// The objective must be deterministic (dropout disabled, fixed inputs);
// two differing evaluations at the same point raise UsageError.
// Inputs with a rectifier kink exactly at 0 are excluded by contract: the
// subgradient there is defined as 0 while central differences straddle the
// kink, so such points are not meaningful to check.
double gradient_check(const LossFn& loss_fn, const ParamSet& params, double step);

}  // namespace mvawe

#endif  // MVAWE_GRADCHECK_HPP
