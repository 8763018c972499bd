#pragma once

#include "trimmer/numerics/tensor.hpp"

#include <array>

namespace trimmer::numerics {

enum class Activation { relu, sigmoid, none };

double sigmoid(double z) noexcept;

// Temporal convolution with kernel width 3 and zero padding of one frame on
// each side. x is N x in, each tap is out x in, result is N x out.
Matrix2D conv1d_forward(const Matrix2D& x, const std::array<Matrix2D, 3>& kernel, const Vector& bias);

// y = act(x * w^T + b), row-wise. w is out x in.
Matrix2D layer_forward(const Matrix2D& x, const Matrix2D& w, const Vector& b, Activation activation);

// Activations retained by a cached forward pass. A default-constructed
// instance is empty and rejected by backward().
class ForwardPass {
 public:
  ForwardPass() = default;

  bool empty() const noexcept { return scores_.size() == 0; }
  const Vector& scores() const noexcept { return scores_; }
  const Matrix2D& input() const noexcept { return input_; }

 private:
  friend ForwardPass forward(const ParameterSet& params, const Matrix2D& x);
  friend GradientSet backward(const ParameterSet& params, const ForwardPass& pass, const Vector& dloss_dscores);

  Matrix2D input_;
  Matrix2D conv_;  // post-ReLU
  Matrix2D h1_;    // post-ReLU
  Matrix2D h2_;    // post-ReLU
  Vector scores_;
};

// conv -> relu -> fc1 -> relu -> fc2 -> relu -> fc3 -> sigmoid, with caching.
ForwardPass forward(const ParameterSet& params, const Matrix2D& x);

// Uncached forward; returns the score vector only.
Vector forward_scores(const ParameterSet& params, const Matrix2D& x);

// Exact reverse pass. dloss_dscores holds dLoss/dp_t for every frame.
GradientSet backward(const ParameterSet& params, const ForwardPass& pass, const Vector& dloss_dscores);

}  // namespace trimmer::numerics
