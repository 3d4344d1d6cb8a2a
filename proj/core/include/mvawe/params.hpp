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

#ifndef MVAWE_PARAMS_HPP
#define MVAWE_PARAMS_HPP

#include <map>
#include <string>

#include "mvawe/tensor.hpp"

namespace mvawe {

// Named learnable tensors.  std::map keeps iteration order deterministic,
// which fixes the gradient accumulation and update order across runs.
using ParamSet = std::map<std::string, Tensor>;

// Versioned binary container: magic "MVAWE1", u32 format version, u32 tensor
// count, then per tensor (u32 name length, UTF-8 name, u32 rank, u64 dims,
// little-endian f64 payload).  Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const ParamSet& params);
ParamSet load_checkpoint(const std::string& path);

}  // namespace mvawe

#endif  // MVAWE_PARAMS_HPP
