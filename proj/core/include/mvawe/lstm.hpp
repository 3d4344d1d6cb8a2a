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

#ifndef MVAWE_LSTM_HPP
#define MVAWE_LSTM_HPP

#include <utility>

#include "mvawe/tape.hpp"

namespace mvawe {

struct LstmState {
  Var h, c;
};

// One LSTM step.  Weights are packed as a single matrix W of shape
// [4H, in+H] applied to concat(x, h_prev), plus bias b of shape [4H].
// Gate order in the packed rows: input, forget, cell candidate, output.
//   i = sigmoid(z[0:H])     f = sigmoid(z[H:2H])
//   g = tanh(z[2H:3H])      o = sigmoid(z[3H:4H])
//   c = f*c_prev + i*g      h = o*tanh(c)
LstmState lstm_cell(Tape& tape, Var x, LstmState prev, Var w, Var b);

// Convenience overload on plain tensors (builds a throwaway tape).
std::pair<Tensor, Tensor> lstm_cell(const Tensor& x, const Tensor& h_prev,
                                    const Tensor& c_prev, const Tensor& w,
                                    const Tensor& b);

}  // namespace mvawe

#endif  // MVAWE_LSTM_HPP
