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

#ifndef MVAWE_TAPE_HPP
#define MVAWE_TAPE_HPP

#include <functional>
#include <span>
#include <vector>

#include "mvawe/tensor.hpp"

namespace mvawe {

// Handle to a value recorded on a Tape.
struct Var {
  int idx = -1;
  bool valid() const { return idx >= 0; }
};

// Reverse-mode differentiation record.  Operations append nodes in
// topological order; backward() replays the chain rule in reverse, so each
// requires_grad leaf accumulates exactly one gradient per backward pass.
// A Tape is confined to one worker; there is no shared mutable state.
class Tape {
 public:
  Tape() { nodes_.reserve(1024); }

  Var leaf(Tensor t) {
    bool rg = t.requires_grad;
    return push(std::move(t), rg, {});
  }
  Var leaf(Tensor t, bool requires_grad) {
    t.requires_grad = requires_grad;
    return push(std::move(t), requires_grad, {});
  }
  Var constant(Tensor t) { return push(std::move(t), false, {}); }
  Var scalar_const(double v) { return constant(Tensor::scalar(v)); }

  const Tensor& value(Var v) const { return nodes_[v.idx].value; }
  double scalar_value(Var v) const {
    const Tensor& t = value(v);
    if (t.numel() != 1) throw UsageError("expected scalar value");
    return t.data[0];
  }
  // Valid after backward(); zero-sized for nodes not requiring grad.
  std::span<const double> grad(Var v) const {
    const auto& g = nodes_[v.idx].grad;
    return {g.data(), g.size()};
  }
  size_t size() const { return nodes_.size(); }

  // --- primitive operations ------------------------------------------------

  // y = W x  (W: [m,n] matrix, x: [n] vector)
  Var matvec(Var w, Var x);
  Var add(Var a, Var b);             // elementwise, same shape
  Var sub(Var a, Var b);             // elementwise, same shape
  Var mul(Var a, Var b);             // elementwise (Hadamard), same shape
  Var div(Var a, Var b);             // elementwise, same shape
  Var scale(Var a, double k);        // k * a
  Var add_scalar(Var a, double k);   // a + k
  Var concat(Var a, Var b);          // 1-D concatenation
  Var slice(Var a, size_t off, size_t len);  // 1-D slice
  Var sigmoid(Var a);
  Var tanh_(Var a);
  Var relu(Var a);                   // subgradient at 0 defined as 0
  Var sqrt_(Var a);
  Var log_clamped(Var a, double floor);  // log(max(a, floor)); zero grad below floor
  Var softmax(Var a);                // 1-D, numerically stable
  Var dot(Var a, Var b);             // scalar
  Var sum(Var a);                    // scalar

  // Accumulates gradients of every requires_grad node reachable from `loss`.
  // `loss` must be scalar.
  void backward(Var loss);

 private:
  struct Node {
    Tensor value;
    std::vector<double> grad;
    bool requires_grad = false;
    std::function<void(Tape&)> back;
  };

  Var push(Tensor value, bool requires_grad, std::function<void(Tape&)> back);
  void check_finite(const Tensor& t) const;

  const std::vector<double>& val(int i) const { return nodes_[i].value.data; }
  std::vector<double>& g(int i) { return nodes_[i].grad; }
  bool wants(int i) const { return nodes_[i].requires_grad; }

  std::vector<Node> nodes_;
  int cur_ = -1;  // node whose backward fn is currently running
};

}  // namespace mvawe

#endif  // MVAWE_TAPE_HPP
