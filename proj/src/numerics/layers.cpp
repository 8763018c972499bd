#include "trimmer/numerics/layers.hpp"

#include "trimmer/errors.hpp"

#include <cmath>
#include <string>

namespace trimmer::numerics {

namespace {

std::string dims(Eigen::Index r, Eigen::Index c) { return std::to_string(r) + "x" + std::to_string(c); }

void apply(Matrix2D& y, Activation activation) {
  switch (activation) {
    case Activation::relu:
      y = y.cwiseMax(0.0);
      break;
    case Activation::sigmoid:
      y = y.unaryExpr([](double z) { return sigmoid(z); });
      break;
    case Activation::none:
      break;
  }
}

// Backprop through a ReLU given its output.
Matrix2D relu_backward(const Matrix2D& upstream, const Matrix2D& output) {
  return (output.array() > 0.0).select(upstream, 0.0);
}

}  // namespace

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Matrix2D conv1d_forward(const Matrix2D& x, const std::array<Matrix2D, 3>& kernel, const Vector& bias) {
  const Eigen::Index n = x.rows();
  if (n < 1) throw ShapeError("conv1d_forward: input has no frames");
  for (const auto& tap : kernel) {
    if (tap.cols() != x.cols() || tap.rows() != kernel[1].rows())
      throw ShapeError("conv1d_forward: kernel tap " + dims(tap.rows(), tap.cols()) + " incompatible with input " +
                       dims(x.rows(), x.cols()));
  }
  if (bias.size() != kernel[1].rows())
    throw ShapeError("conv1d_forward: bias length " + std::to_string(bias.size()) + " != output channels " +
                     std::to_string(kernel[1].rows()));

  Matrix2D y = x * kernel[1].transpose();
  if (n > 1) {
    y.bottomRows(n - 1).noalias() += x.topRows(n - 1) * kernel[0].transpose();
    y.topRows(n - 1).noalias() += x.bottomRows(n - 1) * kernel[2].transpose();
  }
  y.rowwise() += bias.transpose();
  return y;
}

Matrix2D layer_forward(const Matrix2D& x, const Matrix2D& w, const Vector& b, Activation activation) {
  if (x.cols() != w.cols() || b.size() != w.rows())
    throw ShapeError("layer_forward: input " + dims(x.rows(), x.cols()) + ", weight " + dims(w.rows(), w.cols()) +
                     ", bias " + std::to_string(b.size()));
  Matrix2D y = x * w.transpose();
  y.rowwise() += b.transpose();
  apply(y, activation);
  return y;
}

ForwardPass forward(const ParameterSet& params, const Matrix2D& x) {
  ForwardPass pass;
  pass.input_ = x;
  pass.conv_ = conv1d_forward(x, params.conv_kernel, params.conv_bias);
  apply(pass.conv_, Activation::relu);
  pass.h1_ = layer_forward(pass.conv_, params.fc1_w, params.fc1_b, Activation::relu);
  pass.h2_ = layer_forward(pass.h1_, params.fc2_w, params.fc2_b, Activation::relu);
  const Matrix2D z = layer_forward(pass.h2_, params.fc3_w, params.fc3_b, Activation::sigmoid);
  pass.scores_ = z.col(0);
  return pass;
}

Vector forward_scores(const ParameterSet& params, const Matrix2D& x) {
  Matrix2D c = conv1d_forward(x, params.conv_kernel, params.conv_bias);
  apply(c, Activation::relu);
  const Matrix2D h1 = layer_forward(c, params.fc1_w, params.fc1_b, Activation::relu);
  const Matrix2D h2 = layer_forward(h1, params.fc2_w, params.fc2_b, Activation::relu);
  return layer_forward(h2, params.fc3_w, params.fc3_b, Activation::sigmoid).col(0);
}

GradientSet backward(const ParameterSet& params, const ForwardPass& pass, const Vector& dloss_dscores) {
  if (pass.empty()) throw StateError("backward: no cached forward pass");
  const Eigen::Index n = pass.scores_.size();
  if (dloss_dscores.size() != n)
    throw ShapeError("backward: loss gradient has " + std::to_string(dloss_dscores.size()) + " entries, expected " +
                     std::to_string(n));

  GradientSet g = GradientSet::zeros_like(params);

  // sigmoid: dp/dz = p (1 - p)
  const Vector dz = dloss_dscores.array() * pass.scores_.array() * (1.0 - pass.scores_.array());
  g.fc3_w.noalias() = dz.transpose() * pass.h2_;
  g.fc3_b(0) = dz.sum();

  const Matrix2D dh2 = relu_backward(dz * params.fc3_w, pass.h2_);
  g.fc2_w.noalias() = dh2.transpose() * pass.h1_;
  g.fc2_b = dh2.colwise().sum().transpose();

  const Matrix2D dh1 = relu_backward(dh2 * params.fc2_w, pass.h1_);
  g.fc1_w.noalias() = dh1.transpose() * pass.conv_;
  g.fc1_b = dh1.colwise().sum().transpose();

  const Matrix2D dc = relu_backward(dh1 * params.fc1_w, pass.conv_);
  g.conv_bias = dc.colwise().sum().transpose();
  g.conv_kernel[1].noalias() = dc.transpose() * pass.input_;
  if (n > 1) {
    g.conv_kernel[0].noalias() = dc.bottomRows(n - 1).transpose() * pass.input_.topRows(n - 1);
    g.conv_kernel[2].noalias() = dc.topRows(n - 1).transpose() * pass.input_.bottomRows(n - 1);
  }
  return g;
}

}  // namespace trimmer::numerics
