#include "trimmer/numerics/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace trimmer::numerics {

std::size_t Architecture::parameter_count() const noexcept {
  return conv_channels * input_dim * kKernelWidth + conv_channels + hidden1 * conv_channels + hidden1 +
         hidden2 * hidden1 + hidden2 + hidden2 + 1;
}

Architecture NetworkTensors::architecture() const noexcept {
  return Architecture{static_cast<std::size_t>(conv_kernel[1].cols()), static_cast<std::size_t>(conv_kernel[1].rows()),
                      static_cast<std::size_t>(fc1_w.rows()), static_cast<std::size_t>(fc2_w.rows())};
}

bool NetworkTensors::congruent_with(const NetworkTensors& other) const noexcept {
  bool ok = true;
  for_each_tensor_pair(*this, other, [&](std::string_view, const auto& a, const auto& b) {
    ok = ok && a.rows() == b.rows() && a.cols() == b.cols();
  });
  return ok;
}

void NetworkTensors::set_zero() {
  for_each_tensor(*this, [](std::string_view, auto& t) { t.setZero(); });
}

NetworkTensors NetworkTensors::zeros(const Architecture& arch) {
  const auto in = static_cast<Eigen::Index>(arch.input_dim);
  const auto c = static_cast<Eigen::Index>(arch.conv_channels);
  const auto h1 = static_cast<Eigen::Index>(arch.hidden1);
  const auto h2 = static_cast<Eigen::Index>(arch.hidden2);
  NetworkTensors t;
  for (auto& tap : t.conv_kernel) tap = Matrix2D::Zero(c, in);
  t.conv_bias = Vector::Zero(c);
  t.fc1_w = Matrix2D::Zero(h1, c);
  t.fc1_b = Vector::Zero(h1);
  t.fc2_w = Matrix2D::Zero(h2, h1);
  t.fc2_b = Vector::Zero(h2);
  t.fc3_w = Matrix2D::Zero(1, h2);
  t.fc3_b = Vector::Zero(1);
  return t;
}

ParameterSet ParameterSet::zeros(const Architecture& arch) {
  ParameterSet p;
  static_cast<NetworkTensors&>(p) = NetworkTensors::zeros(arch);
  return p;
}

ParameterSet ParameterSet::initialize(const Architecture& arch, std::uint64_t seed) {
  ParameterSet p = zeros(arch);
  std::mt19937_64 rng(seed);
  auto fill = [&rng](auto& t, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = dist(rng);
  };
  const std::size_t conv_fan_in = arch.input_dim * Architecture::kKernelWidth;
  for (auto& tap : p.conv_kernel) fill(tap, conv_fan_in);
  fill(p.conv_bias, conv_fan_in);
  fill(p.fc1_w, arch.conv_channels);
  fill(p.fc1_b, arch.conv_channels);
  fill(p.fc2_w, arch.hidden1);
  fill(p.fc2_b, arch.hidden1);
  fill(p.fc3_w, arch.hidden2);
  fill(p.fc3_b, arch.hidden2);
  return p;
}

namespace {

template <typename T>
bool bundle_finite(const T& bundle) {
  bool ok = true;
  for_each_tensor(bundle, [&](std::string_view, const auto& t) { ok = ok && t.allFinite(); });
  return ok;
}

}  // namespace

bool ParameterSet::all_finite() const { return bundle_finite(*this); }

GradientSet GradientSet::zeros(const Architecture& arch) {
  GradientSet g;
  static_cast<NetworkTensors&>(g) = NetworkTensors::zeros(arch);
  return g;
}

GradientSet GradientSet::zeros_like(const NetworkTensors& shape) { return zeros(shape.architecture()); }

GradientSet& GradientSet::operator+=(const GradientSet& other) {
  for_each_tensor_pair(*this, other, [](std::string_view, auto& a, const auto& b) { a += b; });
  return *this;
}

GradientSet& GradientSet::operator*=(double s) {
  for_each_tensor(*this, [s](std::string_view, auto& a) { a *= s; });
  return *this;
}

double GradientSet::max_abs() const {
  double m = 0.0;
  for_each_tensor(*this, [&](std::string_view, const auto& t) {
    if (t.size() > 0) m = std::max(m, t.cwiseAbs().maxCoeff());
  });
  return m;
}

bool GradientSet::all_finite() const { return bundle_finite(*this); }

}  // namespace trimmer::numerics
