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

#include "mvawe/tape.hpp"

#include <algorithm>
#include <cmath>

namespace mvawe {

void Tape::check_finite(const Tensor& t) const {
  if (!t.all_finite())
    throw NumericError("non-finite value produced in forward operation");
}

Var Tape::push(Tensor value, bool requires_grad, std::function<void(Tape&)> back) {
  check_finite(value);
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.back = std::move(back);
  if (requires_grad) n.grad.assign(n.value.numel(), 0.0);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

Var Tape::matvec(Var wv, Var xv) {
  const Tensor& w = nodes_[wv.idx].value;
  const Tensor& x = nodes_[xv.idx].value;
  if (w.rank() != 2 || x.rank() != 1 || w.cols() != x.numel())
    throw ConfigError("matvec: shape mismatch " + shape_str(w.shape) + " * " +
                      shape_str(x.shape));
  size_t m = w.rows(), n = w.cols();
  Tensor y({m});
  const double* wd = w.data.data();
  const double* xd = x.data.data();
  for (size_t i = 0; i < m; ++i) {
    const double* row = wd + i * n;
    double acc = 0.0;
    for (size_t j = 0; j < n; ++j) acc += row[j] * xd[j];
    y.data[i] = acc;
  }
  bool rg = wants(wv.idx) || wants(xv.idx);
  int wi = wv.idx, xi = xv.idx;
  return push(std::move(y), rg, [wi, xi, m, n](Tape& t) {
    const std::vector<double>& gy = t.nodes_[t.cur_].grad;
    const double* wd = t.val(wi).data();
    const double* xd = t.val(xi).data();
    if (t.wants(wi)) {
      double* gw = t.g(wi).data();
      for (size_t i = 0; i < m; ++i) {
        double gi = gy[i];
        if (gi == 0.0) continue;
        double* grow = gw + i * n;
        for (size_t j = 0; j < n; ++j) grow[j] += gi * xd[j];
      }
    }
    if (t.wants(xi)) {
      double* gx = t.g(xi).data();
      for (size_t i = 0; i < m; ++i) {
        double gi = gy[i];
        if (gi == 0.0) continue;
        const double* row = wd + i * n;
        for (size_t j = 0; j < n; ++j) gx[j] += gi * row[j];
      }
    }
  });
}

Var Tape::add(Var a, Var b) {
  const Tensor& ta = nodes_[a.idx].value;
  const Tensor& tb = nodes_[b.idx].value;
  if (!ta.same_shape(tb)) throw ConfigError("add: shape mismatch");
  Tensor y = ta;
  for (size_t i = 0; i < y.numel(); ++i) y.data[i] += tb.data[i];
  bool rg = wants(a.idx) || wants(b.idx);
  int ai = a.idx, bi = b.idx;
  return push(std::move(y), rg, [ai, bi](Tape& t) {
    const auto& gy = t.nodes_[t.cur_].grad;
    if (t.wants(ai)) {
      auto& ga = t.g(ai);
      for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
    }
    if (t.wants(bi)) {
      auto& gb = t.g(bi);
      for (size_t i = 0; i < gy.size(); ++i) gb[i] += gy[i];
    }
  });
}

Var Tape::sub(Var a, Var b) {
  const Tensor& ta = nodes_[a.idx].value;
  const Tensor& tb = nodes_[b.idx].value;
  if (!ta.same_shape(tb)) throw ConfigError("sub: shape mismatch");
  Tensor y = ta;
  for (size_t i = 0; i < y.numel(); ++i) y.data[i] -= tb.data[i];
  bool rg = wants(a.idx) || wants(b.idx);
  int ai = a.idx, bi = b.idx;
  return push(std::move(y), rg, [ai, bi](Tape& t) {
    const auto& gy = t.nodes_[t.cur_].grad;
    if (t.wants(ai)) {
      auto& ga = t.g(ai);
      for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
    }
    if (t.wants(bi)) {
      auto& gb = t.g(bi);
      for (size_t i = 0; i < gy.size(); ++i) gb[i] -= gy[i];
    }
  });
}

Var Tape::mul(Var a, Var b) {
  const Tensor& ta = nodes_[a.idx].value;
  const Tensor& tb = nodes_[b.idx].value;
  if (!ta.same_shape(tb)) throw ConfigError("mul: shape mismatch");
  Tensor y = ta;
  for (size_t i = 0; i < y.numel(); ++i) y.data[i] *= tb.data[i];
  bool rg = wants(a.idx) || wants(b.idx);
  int ai = a.idx, bi = b.idx;
  return push(std::move(y), rg, [ai, bi](Tape& t) {
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& va = t.val(ai);
    const auto& vb = t.val(bi);
    if (t.wants(ai)) {
      auto& ga = t.g(ai);
      for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * vb[i];
    }
    if (t.wants(bi)) {
      auto& gb = t.g(bi);
      for (size_t i = 0; i < gy.size(); ++i) gb[i] += gy[i] * va[i];
    }
  });
}

Var Tape::div(Var a, Var b) {
  const Tensor& ta = nodes_[a.idx].value;
  const Tensor& tb = nodes_[b.idx].value;
  if (!ta.same_shape(tb)) throw ConfigError("div: shape mismatch");
  Tensor y = ta;
  for (size_t i = 0; i < y.numel(); ++i) y.data[i] /= tb.data[i];
  bool rg = wants(a.idx) || wants(b.idx);
  int ai = a.idx, bi = b.idx;
  return push(std::move(y), rg, [ai, bi](Tape& t) {
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& va = t.val(ai);
    const auto& vb = t.val(bi);
    if (t.wants(ai)) {
      auto& ga = t.g(ai);
      for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] / vb[i];
    }
    if (t.wants(bi)) {
      auto& gb = t.g(bi);
      for (size_t i = 0; i < gy.size(); ++i)
        gb[i] -= gy[i] * va[i] / (vb[i] * vb[i]);
    }
  });
}

Var Tape::scale(Var a, double k) {
  Tensor y = nodes_[a.idx].value;
  for (double& v : y.data) v *= k;
  int ai = a.idx;
  return push(std::move(y), wants(ai), [ai, k](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    auto& ga = t.g(ai);
    for (size_t i = 0; i < gy.size(); ++i) ga[i] += k * gy[i];
  });
}

Var Tape::add_scalar(Var a, double k) {
  Tensor y = nodes_[a.idx].value;
  for (double& v : y.data) v += k;
  int ai = a.idx;
  return push(std::move(y), wants(ai), [ai](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    auto& ga = t.g(ai);
    for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
  });
}

Var Tape::concat(Var a, Var b) {
  const Tensor& ta = nodes_[a.idx].value;
  const Tensor& tb = nodes_[b.idx].value;
  Tensor y({ta.numel() + tb.numel()});
  std::copy(ta.data.begin(), ta.data.end(), y.data.begin());
  std::copy(tb.data.begin(), tb.data.end(), y.data.begin() + ta.numel());
  bool rg = wants(a.idx) || wants(b.idx);
  int ai = a.idx, bi = b.idx;
  size_t na = ta.numel();
  return push(std::move(y), rg, [ai, bi, na](Tape& t) {
    const auto& gy = t.nodes_[t.cur_].grad;
    if (t.wants(ai)) {
      auto& ga = t.g(ai);
      for (size_t i = 0; i < ga.size(); ++i) ga[i] += gy[i];
    }
    if (t.wants(bi)) {
      auto& gb = t.g(bi);
      for (size_t i = 0; i < gb.size(); ++i) gb[i] += gy[na + i];
    }
  });
}

Var Tape::slice(Var a, size_t off, size_t len) {
  const Tensor& ta = nodes_[a.idx].value;
  if (off + len > ta.numel()) throw ConfigError("slice: out of range");
  Tensor y({len});
  std::copy(ta.data.begin() + off, ta.data.begin() + off + len, y.data.begin());
  int ai = a.idx;
  return push(std::move(y), wants(ai), [ai, off](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    auto& ga = t.g(ai);
    for (size_t i = 0; i < gy.size(); ++i) ga[off + i] += gy[i];
  });
}

Var Tape::sigmoid(Var a) {
  Tensor y = nodes_[a.idx].value;
  for (double& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
  int ai = a.idx;
  int yi = static_cast<int>(nodes_.size());
  return push(std::move(y), wants(ai), [ai, yi](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& vy = t.val(yi);
    auto& ga = t.g(ai);
    for (size_t i = 0; i < gy.size(); ++i)
      ga[i] += gy[i] * vy[i] * (1.0 - vy[i]);
  });
}

Var Tape::tanh_(Var a) {
  Tensor y = nodes_[a.idx].value;
  for (double& v : y.data) v = std::tanh(v);
  int ai = a.idx;
  int yi = static_cast<int>(nodes_.size());
  return push(std::move(y), wants(ai), [ai, yi](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& vy = t.val(yi);
    auto& ga = t.g(ai);
    for (size_t i = 0; i < gy.size(); ++i)
      ga[i] += gy[i] * (1.0 - vy[i] * vy[i]);
  });
}

Var Tape::relu(Var a) {
  Tensor y = nodes_[a.idx].value;
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  int ai = a.idx;
  return push(std::move(y), wants(ai), [ai](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& va = t.val(ai);
    auto& ga = t.g(ai);
    // subgradient at exactly 0 is 0
    for (size_t i = 0; i < gy.size(); ++i)
      if (va[i] > 0.0) ga[i] += gy[i];
  });
}

Var Tape::sqrt_(Var a) {
  Tensor y = nodes_[a.idx].value;
  for (double& v : y.data) v = std::sqrt(v);
  int ai = a.idx;
  int yi = static_cast<int>(nodes_.size());
  return push(std::move(y), wants(ai), [ai, yi](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& vy = t.val(yi);
    auto& ga = t.g(ai);
    for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * 0.5 / vy[i];
  });
}

Var Tape::log_clamped(Var a, double floor) {
  const Tensor& ta = nodes_[a.idx].value;
  Tensor y = ta;
  for (double& v : y.data) v = std::log(v < floor ? floor : v);
  int ai = a.idx;
  return push(std::move(y), wants(ai), [ai, floor](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& va = t.val(ai);
    auto& ga = t.g(ai);
    for (size_t i = 0; i < gy.size(); ++i)
      if (va[i] >= floor) ga[i] += gy[i] / va[i];
  });
}

Var Tape::softmax(Var a) {
  const Tensor& ta = nodes_[a.idx].value;
  Tensor y = ta;
  double mx = *std::max_element(y.data.begin(), y.data.end());
  double z = 0.0;
  for (double& v : y.data) {
    v = std::exp(v - mx);
    z += v;
  }
  for (double& v : y.data) v /= z;
  int ai = a.idx;
  int yi = static_cast<int>(nodes_.size());
  return push(std::move(y), wants(ai), [ai, yi](Tape& t) {
    if (!t.wants(ai)) return;
    const auto& gy = t.nodes_[t.cur_].grad;
    const auto& p = t.val(yi);
    auto& ga = t.g(ai);
    double inner = 0.0;
    for (size_t i = 0; i < gy.size(); ++i) inner += gy[i] * p[i];
    for (size_t i = 0; i < gy.size(); ++i) ga[i] += p[i] * (gy[i] - inner);
  });
}

Var Tape::dot(Var a, Var b) {
  const Tensor& ta = nodes_[a.idx].value;
  const Tensor& tb = nodes_[b.idx].value;
  if (ta.numel() != tb.numel()) throw ConfigError("dot: size mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < ta.numel(); ++i) acc += ta.data[i] * tb.data[i];
  bool rg = wants(a.idx) || wants(b.idx);
  int ai = a.idx, bi = b.idx;
  return push(Tensor::scalar(acc), rg, [ai, bi](Tape& t) {
    double gy = t.nodes_[t.cur_].grad[0];
    if (gy == 0.0) return;
    const auto& va = t.val(ai);
    const auto& vb = t.val(bi);
    if (t.wants(ai)) {
      auto& ga = t.g(ai);
      for (size_t i = 0; i < ga.size(); ++i) ga[i] += gy * vb[i];
    }
    if (t.wants(bi)) {
      auto& gb = t.g(bi);
      for (size_t i = 0; i < gb.size(); ++i) gb[i] += gy * va[i];
    }
  });
}

Var Tape::sum(Var a) {
  const Tensor& ta = nodes_[a.idx].value;
  double acc = 0.0;
  for (double v : ta.data) acc += v;
  int ai = a.idx;
  return push(Tensor::scalar(acc), wants(ai), [ai](Tape& t) {
    if (!t.wants(ai)) return;
    double gy = t.nodes_[t.cur_].grad[0];
    auto& ga = t.g(ai);
    for (double& v : ga) v += gy;
  });
}

void Tape::backward(Var loss) {
  if (!loss.valid() || loss.idx >= static_cast<int>(nodes_.size()))
    throw UsageError("backward: invalid loss variable");
  Node& l = nodes_[loss.idx];
  if (l.value.numel() != 1) throw UsageError("backward: loss must be scalar");
  if (!l.requires_grad) return;  // nothing reachable requires grad
  l.grad[0] += 1.0;
  for (int i = loss.idx; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.back) continue;
    cur_ = i;
    n.back(*this);
  }
}

}  // namespace mvawe
