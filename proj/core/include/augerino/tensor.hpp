// Copyright 2026 The Augerino Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace augerino {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until the first accumulation
  bool requires_grad = false;
  std::uint64_t generation = 0;  // 0 for leaves created outside any op
};

}  // namespace detail

/// Dense row-major array of doubles that can take part in reverse-mode
/// differentiation.
///
/// A Tensor is a handle: copies share storage. Leaves (parameters, data) are
/// created with the static factories; every op in ops.hpp returns a new node
/// recorded on the calling thread's Tape when any operand requires a gradient.
class Tensor {
 public:
  Tensor();

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const { return node_->values.size(); }

  std::span<const double> values() const { return node_->values; }
  /// Mutable view of the values; only meaningful for leaves.
  std::span<double> mutable_values() { return node_->values; }
  double item() const;
  double at(std::size_t flat_index) const { return node_->values.at(flat_index); }

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool on) { node_->requires_grad = on; }

  bool has_grad() const { return !node_->grad.empty() || node_->values.empty(); }
  /// Gradient buffer; a never-touched tensor reports zeros.
  std::span<const double> grad() const;
  /// Gradient buffer for accumulation. Handles share the node, so this is const.
  std::span<double> mutable_grad() const;
  void zero_grad();

  /// Copy of the values as a fresh leaf with no history.
  Tensor detach() const;

  std::uint64_t generation() const { return node_->generation; }
  bool same_node(const Tensor& other) const { return node_ == other.node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  std::shared_ptr<detail::Node> node_;

  friend class Tape;
  friend Tensor make_op_result(const char*, Shape, std::vector<double>,
                               std::initializer_list<Tensor>,
                               std::function<void(std::span<const double>)>);
};

/// Receives the gradient of the loss w.r.t. an op's output and accumulates
/// into the operands' gradient buffers.
using BackwardFn = std::function<void(std::span<const double> grad_out)>;

/// Builds the output node of an op. Throws NumericError when a value is not
/// finite. The backward closure is recorded only if an operand requires a
/// gradient; it should capture the operand Tensors it writes into.
Tensor make_op_result(const char* op, Shape shape, std::vector<double> values,
                      std::initializer_list<Tensor> inputs, BackwardFn backward);

/// Ordered record of the ops executed on one thread since the last reset.
///
/// Ops are appended in execution order, so the record is already topologically
/// sorted and a single reverse sweep visits every op exactly once.
class Tape {
 public:
  static Tape& current();

  /// Drops every recorded op and starts a new generation. Tensors produced
  /// before the reset can no longer be used as a backward root.
  void reset();

  void backward(const Tensor& loss);

  std::size_t size() const { return entries_.size(); }
  std::uint64_t generation() const { return generation_; }
  /// Number of ops the most recent backward sweep visited.
  std::size_t last_backward_visits() const { return last_visits_; }

 private:
  struct Entry {
    const char* op;
    std::shared_ptr<detail::Node> output;
    BackwardFn backward;
  };

  Tape() = default;
  void record(const char* op, std::shared_ptr<detail::Node> output, BackwardFn fn);

  std::vector<Entry> entries_;
  std::uint64_t generation_ = 1;
  bool backward_done_ = false;
  std::size_t last_visits_ = 0;

  friend Tensor make_op_result(const char*, Shape, std::vector<double>,
                               std::initializer_list<Tensor>, BackwardFn);
};

/// Populates the gradient of every requires_grad tensor reachable from `loss`.
void backward(const Tensor& loss);

/// Resets the calling thread's tape.
void reset_tape();

/// While alive, ops on this thread record nothing and return tensors without
/// gradient tracking. Nests.
class NoGradScope {
 public:
  NoGradScope();
  ~NoGradScope();
  NoGradScope(const NoGradScope&) = delete;
  NoGradScope& operator=(const NoGradScope&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

}  // namespace augerino
