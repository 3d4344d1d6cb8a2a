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

#include "mvawe/lstm.hpp"

namespace mvawe {

LstmState lstm_cell(Tape& t, Var x, LstmState prev, Var w, Var b) {
  const Tensor& wt = t.value(w);
  const Tensor& bt = t.value(b);
  if (wt.rank() != 2 || bt.numel() % 4 != 0)
    throw ConfigError("lstm_cell: bad parameter shapes");
  size_t hidden = bt.numel() / 4;
  size_t in_dim = t.value(x).numel();
  if (wt.rows() != 4 * hidden || wt.cols() != in_dim + hidden ||
      t.value(prev.h).numel() != hidden || t.value(prev.c).numel() != hidden)
    throw ConfigError("lstm_cell: dimension mismatch (W " + shape_str(wt.shape) +
                      ", x " + shape_str(t.value(x).shape) + ")");

  Var z = t.add(t.matvec(w, t.concat(x, prev.h)), b);
  Var gi = t.sigmoid(t.slice(z, 0, hidden));
  Var gf = t.sigmoid(t.slice(z, hidden, hidden));
  Var gg = t.tanh_(t.slice(z, 2 * hidden, hidden));
  Var go = t.sigmoid(t.slice(z, 3 * hidden, hidden));
  Var c = t.add(t.mul(gf, prev.c), t.mul(gi, gg));
  Var h = t.mul(go, t.tanh_(c));
  return {h, c};
}

std::pair<Tensor, Tensor> lstm_cell(const Tensor& x, const Tensor& h_prev,
                                    const Tensor& c_prev, const Tensor& w,
                                    const Tensor& b) {
  Tape t;
  Var xv = t.constant(x);
  LstmState prev{t.constant(h_prev), t.constant(c_prev)};
  LstmState out = lstm_cell(t, xv, prev, t.constant(w), t.constant(b));
  return {t.value(out.h), t.value(out.c)};
}

}  // namespace mvawe
