#pragma once

#include <Eigen/Core>

#include <array>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <type_traits>

namespace trimmer::numerics {

using Matrix2D = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Layer widths of the scorer. Defaults are the full-size network; reduced
// widths exist so that finite-difference checks and desk-scale training stay
// cheap.
struct Architecture {
  std::size_t input_dim = 2048;
  std::size_t conv_channels = 1024;
  std::size_t hidden1 = 512;
  std::size_t hidden2 = 256;

  static constexpr std::size_t kKernelWidth = 3;

  std::size_t parameter_count() const noexcept;
  bool operator==(const Architecture&) const = default;
};

// The eight tensors of the scorer. conv_kernel[j] holds the tap applied to
// frame t + j - 1 and has shape conv_channels x input_dim.
struct NetworkTensors {
  std::array<Matrix2D, 3> conv_kernel;
  Vector conv_bias;
  Matrix2D fc1_w;
  Vector fc1_b;
  Matrix2D fc2_w;
  Vector fc2_b;
  Matrix2D fc3_w;
  Vector fc3_b;

  Architecture architecture() const noexcept;
  bool congruent_with(const NetworkTensors& other) const noexcept;
  void set_zero();

 protected:
  static NetworkTensors zeros(const Architecture& arch);
};

template <typename T>
concept TensorBundle = std::derived_from<std::remove_const_t<T>, NetworkTensors>;

// Visits every tensor as (name, Eigen object) in a fixed canonical order.
template <TensorBundle T, typename F>
void for_each_tensor(T& t, F&& f) {
  f(std::string_view{"conv_kernel[0]"}, t.conv_kernel[0]);
  f(std::string_view{"conv_kernel[1]"}, t.conv_kernel[1]);
  f(std::string_view{"conv_kernel[2]"}, t.conv_kernel[2]);
  f(std::string_view{"conv_bias"}, t.conv_bias);
  f(std::string_view{"fc1_w"}, t.fc1_w);
  f(std::string_view{"fc1_b"}, t.fc1_b);
  f(std::string_view{"fc2_w"}, t.fc2_w);
  f(std::string_view{"fc2_b"}, t.fc2_b);
  f(std::string_view{"fc3_w"}, t.fc3_w);
  f(std::string_view{"fc3_b"}, t.fc3_b);
}

// Visits two congruent bundles side by side.
template <TensorBundle A, TensorBundle B, typename F>
void for_each_tensor_pair(A& a, B& b, F&& f) {
  f(std::string_view{"conv_kernel[0]"}, a.conv_kernel[0], b.conv_kernel[0]);
  f(std::string_view{"conv_kernel[1]"}, a.conv_kernel[1], b.conv_kernel[1]);
  f(std::string_view{"conv_kernel[2]"}, a.conv_kernel[2], b.conv_kernel[2]);
  f(std::string_view{"conv_bias"}, a.conv_bias, b.conv_bias);
  f(std::string_view{"fc1_w"}, a.fc1_w, b.fc1_w);
  f(std::string_view{"fc1_b"}, a.fc1_b, b.fc1_b);
  f(std::string_view{"fc2_w"}, a.fc2_w, b.fc2_w);
  f(std::string_view{"fc2_b"}, a.fc2_b, b.fc2_b);
  f(std::string_view{"fc3_w"}, a.fc3_w, b.fc3_w);
  f(std::string_view{"fc3_b"}, a.fc3_b, b.fc3_b);
}

struct ParameterSet : NetworkTensors {
  static ParameterSet zeros(const Architecture& arch);

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases of
  // each layer; the conv fan-in counts all three taps.
  static ParameterSet initialize(const Architecture& arch, std::uint64_t seed);

  bool all_finite() const;
};

struct GradientSet : NetworkTensors {
  static GradientSet zeros(const Architecture& arch);
  static GradientSet zeros_like(const NetworkTensors& shape);

  GradientSet& operator+=(const GradientSet& other);
  GradientSet& operator*=(double s);

  double max_abs() const;
  bool all_finite() const;
};

}  // namespace trimmer::numerics
