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
#include "augerino/tensor.hpp"

#include <cmath>
#include <sstream>

#include "augerino/error.hpp"

namespace augerino {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor() : node_(std::make_shared<detail::Node>()) { node_->shape = {0}; }

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  auto node = std::make_shared<detail::Node>();
  node->values.assign(shape_numel(shape), value);
  node->shape = std::move(shape);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad) {
  if (shape_numel(shape) != values.size()) {
    throw DimensionError("Tensor::from: shape " + shape_str(shape) + " holds " +
                         std::to_string(shape_numel(shape)) + " values, got " +
                         std::to_string(values.size()));
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool requires_grad) { return from({}, {value}, requires_grad); }

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= rank()) {
    throw DimensionError("axis " + std::to_string(axis) + " out of range for shape " + shape_str(shape()));
  }
  return node_->shape[axis];
}

double Tensor::item() const {
  if (numel() != 1) throw DimensionError("item() on tensor of shape " + shape_str(shape()));
  return node_->values[0];
}

std::span<const double> Tensor::grad() const {
  if (node_->grad.size() != node_->values.size()) node_->grad.assign(node_->values.size(), 0.0);
  return node_->grad;
}

std::span<double> Tensor::mutable_grad() const {
  if (node_->grad.size() != node_->values.size()) node_->grad.assign(node_->values.size(), 0.0);
  return node_->grad;
}

void Tensor::zero_grad() { node_->grad.clear(); }

Tensor Tensor::detach() const { return from(node_->shape, node_->values, false); }

namespace {
thread_local bool t_grad_enabled = true;
}

bool grad_enabled() { return t_grad_enabled; }

NoGradScope::NoGradScope() : previous_(t_grad_enabled) { t_grad_enabled = false; }

NoGradScope::~NoGradScope() { t_grad_enabled = previous_; }

Tape& Tape::current() {
  thread_local Tape tape;
  return tape;
}

void Tape::reset() {
  entries_.clear();
  ++generation_;
  backward_done_ = false;
}

void Tape::record(const char* op, std::shared_ptr<detail::Node> output, BackwardFn fn) {
  entries_.push_back(Entry{op, std::move(output), std::move(fn)});
}

void Tape::backward(const Tensor& loss) {
  if (loss.numel() != 1) {
    throw TapeError("backward: loss must be a scalar, got shape " + shape_str(loss.shape()));
  }
  if (loss.generation() != generation_) {
    throw TapeError("backward: loss was not produced on the current tape (stale tape)");
  }
  if (backward_done_) {
    throw TapeError("backward: already called on this tape; reset before recording a new loss");
  }
  backward_done_ = true;
  last_visits_ = 0;
  if (!loss.requires_grad()) return;
  loss.node_->grad.assign(1, 1.0);
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    ++last_visits_;
    if (it->output->grad.empty()) continue;  // not reachable from the loss
    it->backward(it->output->grad);
  }
}

Tensor make_op_result(const char* op, Shape shape, std::vector<double> values,
                      std::initializer_list<Tensor> inputs, BackwardFn backward) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError(std::string(op) + ": non-finite value in output");
  }
  Tape& tape = Tape::current();
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->generation = tape.generation();
  bool needs_grad = false;
  if (t_grad_enabled) {
    for (const auto& in : inputs) needs_grad = needs_grad || in.requires_grad();
  }
  node->requires_grad = needs_grad;
  if (needs_grad) tape.record(op, node, std::move(backward));
  return Tensor(std::move(node));
}

void backward(const Tensor& loss) { Tape::current().backward(loss); }

void reset_tape() { Tape::current().reset(); }

}  // namespace augerino
