// Copyright (C) 2026 The advrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVRANK_CORE_TAPE_HPP
#define ADVRANK_CORE_TAPE_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "advrank/core/tensor.hpp"

namespace advrank {

// Handle to a value recorded on a Tape.
struct Var {
  static constexpr std::size_t kInvalid = std::numeric_limits<std::size_t>::max();
  std::size_t id = kInvalid;

  bool valid() const { return id != kInvalid; }
};

// Reverse-mode recording of primitive applications.
//
// Nodes are appended in forward order; backward() walks them in exact
// reverse order, calling each node's pullback, which accumulates into the
// gradients of its inputs. Gradients of a node with several consumers are
// the sum of the contributions. A tape built with record=false keeps only
// values, which is what pure scoring uses.
template <typename Scalar>
class Tape {
 public:
  using Mat = Matrix<Scalar>;
  using Pullback = std::function<void(Tape&, const Mat& grad)>;

  explicit Tape(bool record = true) : record_(record) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }
  std::size_t size() const { return nodes_.size(); }

  // Leaf owning its value whose gradient is tracked.
  Var input(Mat value) {
    Node n;
    n.owned = std::move(value);
    n.requires_grad = record_;
    return push(std::move(n));
  }

  // Leaf owning its value, never differentiated.
  Var constant(Mat value) {
    Node n;
    n.owned = std::move(value);
    return push(std::move(n));
  }

  // Leaf referring to an external matrix (no copy). The referent must
  // outlive the tape. A non-negative param_id makes it show up in
  // parameter_grads() after backward.
  Var reference(const Mat& value, long param_id = -1) {
    Node n;
    n.ref = &value;
    n.param_id = param_id;
    n.requires_grad = record_ && param_id >= 0;
    return push(std::move(n));
  }

  const Mat& value(Var v) const { return node(v).get(); }

  bool requires_grad(Var v) const { return node(v).requires_grad; }

  // Records the result of a primitive. The pullback is stored only when
  // recording and at least one input needs a gradient.
  Var record(Mat value, std::span<const Var> inputs, Pullback pullback) {
    Node n;
    n.owned = std::move(value);
    if (record_) {
      for (Var in : inputs) {
        if (node(in).requires_grad) {
          n.requires_grad = true;
          break;
        }
      }
      if (n.requires_grad) n.pullback = std::move(pullback);
    }
    return push(std::move(n));
  }

  Var record(Mat value, std::initializer_list<Var> inputs, Pullback pullback) {
    return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                  std::move(pullback));
  }

  // Adds g into the gradient of v (no-op for nodes without gradients).
  template <typename Derived>
  void accumulate(Var v, const Eigen::MatrixBase<Derived>& g) {
    Node& n = node(v);
    if (!n.requires_grad) return;
    if (n.grad.size() == 0) {
      n.grad = g;
    } else {
      n.grad += g;
    }
  }

  // Runs the reverse sweep from `output` seeded with `seed`.
  void backward(Var output, const Mat& seed) {
    if (!record_ || nodes_.empty() || !output.valid() || output.id >= nodes_.size()) {
      throw UsageError("backward called without a recorded forward pass");
    }
    if (backward_done_) {
      throw UsageError("backward already ran on this tape");
    }
    const Mat& out = value(output);
    if (seed.rows() != out.rows() || seed.cols() != out.cols()) {
      throw ShapeError("backward: seed " + shape_string(seed) +
                       " does not match output " + shape_string(out));
    }
    backward_done_ = true;
    accumulate(output, seed);
    for (std::size_t i = output.id + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (!n.pullback || n.grad.size() == 0) continue;
      n.pullback(*this, n.grad);
    }
  }

  // Gradient of the last backward output with respect to v. Zeros when
  // nothing flowed into v.
  Mat grad(Var v) const {
    const Node& n = node(v);
    if (n.grad.size() == 0) return Mat::Zero(n.get().rows(), n.get().cols());
    return n.grad;
  }

  std::map<long, Mat> parameter_grads() const {
    std::map<long, Mat> out;
    for (const Node& n : nodes_) {
      if (n.param_id < 0 || n.grad.size() == 0) continue;
      auto it = out.find(n.param_id);
      if (it == out.end()) {
        out.emplace(n.param_id, n.grad);
      } else {
        it->second += n.grad;
      }
    }
    return out;
  }

 private:
  struct Node {
    Mat owned;
    const Mat* ref = nullptr;
    Mat grad;
    Pullback pullback;
    long param_id = -1;
    bool requires_grad = false;

    const Mat& get() const { return ref ? *ref : owned; }
  };

  Var push(Node n) {
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
  }

  Node& node(Var v) {
    if (!v.valid() || v.id >= nodes_.size()) throw UsageError("invalid tape handle");
    return nodes_[v.id];
  }
  const Node& node(Var v) const {
    if (!v.valid() || v.id >= nodes_.size()) throw UsageError("invalid tape handle");
    return nodes_[v.id];
  }

  std::vector<Node> nodes_;
  bool record_;
  bool backward_done_ = false;
};

}  // namespace advrank

#endif  // ADVRANK_CORE_TAPE_HPP
