#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace levy {

/// Bad caller-supplied arguments (non-finite, out of range, wrong shape).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold
/// (e.g. negative-jump model passed to a Laplace-exponent routine).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The model itself is invalid (non-PSD covariance beyond tolerance, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config-file schema or value violations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent internal state (grid mismatch between coupled paths, ...).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Dense row-major square matrix, sized for small K (model dimension).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {a_.data() + i * n_, n_}; }
  std::span<const double> data() const { return a_; }
  std::span<double> data() { return a_; }

  bool symmetric(double tol = 1e-12) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (std::abs(a_[i * n_ + j] - a_[j * n_ + i]) > tol) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// x^T M x for symmetric M.
inline double quad_form(const Matrix& m, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += x[i] * dot(m.row(i), x);
  return s;
}

}  // namespace levy
