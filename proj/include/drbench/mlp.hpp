#ifndef DRBENCH_MLP_HPP
#define DRBENCH_MLP_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "drbench/types.hpp"

namespace drbench {

/// Fully connected network with tanh hidden layers and a linear output.
/// Batches are column-major: one sample per column.
template <typename Scalar>
struct Mlp {
  std::vector<Matrix<Scalar>> weights;
  std::vector<Vector<Scalar>> biases;

  Mlp() = default;

  /// Zero-initialized network with layer widths `sizes` (input first).
  explicit Mlp(const std::vector<int>& sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("Mlp: need >= 2 layer sizes");
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      weights.push_back(Matrix<Scalar>::Zero(sizes[l + 1], sizes[l]));
      biases.push_back(Vector<Scalar>::Zero(sizes[l + 1]));
    }
  }

  std::size_t num_layers() const { return weights.size(); }
  Eigen::Index input_size() const { return weights.front().cols(); }
  Eigen::Index output_size() const { return weights.back().rows(); }

  /// Scaled-uniform init (Glorot), with the last layer shrunk by
  /// `output_gain`. Biases start at zero.
  template <typename Urbg>
  void init(Urbg& rng, Scalar output_gain) {
    for (std::size_t l = 0; l < num_layers(); ++l) {
      Matrix<Scalar>& w = weights[l];
      const Scalar limit = std::sqrt(Scalar(6) / Scalar(w.rows() + w.cols()));
      std::uniform_real_distribution<Scalar> u(-limit, limit);
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = u(rng);
      if (l + 1 == num_layers()) w *= output_gain;
      biases[l].setZero();
    }
  }

  bool all_finite() const {
    for (std::size_t l = 0; l < num_layers(); ++l)
      if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
    return true;
  }

  /// Activations of every layer; element 0 is the input, the last is the
  /// linear output.
  struct Trace {
    std::vector<Matrix<Scalar>> activations;
    const Matrix<Scalar>& output() const { return activations.back(); }
  };

  Trace forward_trace(const Matrix<Scalar>& input) const {
    if (input.rows() != input_size())
      throw std::invalid_argument("Mlp::forward: input width mismatch");
    Trace t;
    t.activations.reserve(num_layers() + 1);
    t.activations.push_back(input);
    for (std::size_t l = 0; l < num_layers(); ++l) {
      const Matrix<Scalar>& in = t.activations.back();
      Matrix<Scalar> z(weights[l].rows(), in.cols());
      // Column-wise products keep a batched pass bit-identical to evaluating
      // each sample on its own.
      for (Eigen::Index j = 0; j < in.cols(); ++j)
        z.col(j).noalias() = weights[l] * in.col(j);
      z.colwise() += biases[l];
      if (l + 1 < num_layers()) z = z.array().tanh().matrix();
      t.activations.push_back(std::move(z));
    }
    return t;
  }

  Matrix<Scalar> forward(const Matrix<Scalar>& input) const {
    return forward_trace(input).output();
  }

  /// Accumulates dL/dweights and dL/dbiases into `grad` given dL/doutput.
  void backward(const Trace& trace, const Matrix<Scalar>& grad_output,
                Mlp& grad) const {
    Matrix<Scalar> delta = grad_output;
    for (std::size_t l = num_layers(); l-- > 0;) {
      const Matrix<Scalar>& in = trace.activations[l];
      grad.weights[l].noalias() += delta * in.transpose();
      grad.biases[l] += delta.rowwise().sum();
      if (l == 0) break;
      Matrix<Scalar> back = weights[l].transpose() * delta;
      // tanh'(z) = 1 - tanh(z)^2, and `in` holds tanh(z) for hidden layers.
      delta = (back.array() * (Scalar(1) - in.array().square())).matrix();
    }
  }

  Mlp zeros_like() const {
    Mlp z = *this;
    for (auto& w : z.weights) w.setZero();
    for (auto& b : z.biases) b.setZero();
    return z;
  }

  /// this += scale * other
  void axpy(Scalar scale, const Mlp& other) {
    for (std::size_t l = 0; l < num_layers(); ++l) {
      weights[l] += scale * other.weights[l];
      biases[l] += scale * other.biases[l];
    }
  }
};

}  // namespace drbench

#endif  // DRBENCH_MLP_HPP
