#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "levy/common.hpp"
#include "levy/rng.hpp"

namespace levy {

/// Jump-size distribution of one compound-Poisson component. Every law has a
/// closed-form transform, mean and second moment, so the model exponents and
/// their derivatives at 0+ are exact (no numerical differentiation anywhere).
class JumpLaw {
 public:
  enum class Kind { point_mass, exponential, uniform, mixture };

  static JumpLaw point_mass(std::vector<double> atom);
  /// Exp(mu) jump on one coordinate, zero elsewhere.
  static JumpLaw exponential(std::size_t dim, std::size_t coord, double mu);
  /// Uniform(a, b) jump on one coordinate, zero elsewhere.
  static JumpLaw uniform(std::size_t dim, std::size_t coord, double a, double b);
  /// Finite mixture of point masses; weights are normalised internally.
  static JumpLaw mixture(std::vector<double> weights,
                         std::vector<std::vector<double>> atoms);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool spectrally_positive() const;

  std::vector<double> mean() const;
  Matrix second_moment() const;  // E[J J^T]

  /// E exp(i w . J) for complex w (analytic continuation; the Laplace
  /// transform is chf at w = i*alpha). Input error if outside the law's
  /// convergence strip (exponential law: Im(w_k) must exceed -mu).
  std::complex<double> chf(std::span<const std::complex<double>> w) const;

  /// E exp(-alpha . J), alpha >= 0.
  double lst(std::span<const double> alpha) const;

  void sample(Stream& rng, std::span<double> out) const;

 private:
  Kind kind_;
  std::size_t dim_ = 0;
  std::size_t coord_ = 0;          // exponential / uniform
  double mu_ = 0.0;                // exponential
  double a_ = 0.0, b_ = 0.0;       // uniform
  std::vector<double> weights_;    // mixture (normalised, cumulative kept too)
  std::vector<double> cum_weights_;
  std::vector<std::vector<double>> atoms_;  // mixture / point mass (size 1)
};

struct JumpComponent {
  double rate;  // arrivals per unit time
  JumpLaw law;
};

/// Finite-activity K-dimensional Levy model: drift vector, Gaussian
/// covariance, and a finite list of compound-Poisson jump components.
/// There is no small-jump truncation anywhere: the drift is the actual
/// drift of the simulated paths.
class LevyModel {
 public:
  LevyModel(std::vector<double> drift, Matrix covariance,
            std::vector<JumpComponent> jumps, bool exact = true);

  std::size_t dim() const { return dim_; }
  std::span<const double> drift() const { return drift_; }
  const Matrix& covariance() const { return cov_; }
  std::span<const JumpComponent> jumps() const { return jumps_; }
  bool spectrally_positive() const;
  bool has_gaussian_part() const { return has_gaussian_; }
  /// False for models built by an approximate small-jump truncation.
  bool exact() const { return exact_; }

  /// Characteristic exponent psi(alpha) = log E exp(i alpha . X(1)).
  std::complex<double> psi(std::span<const double> alpha) const;

  /// psi continued to complex arguments; phi(alpha) equals psi_c(i alpha).
  std::complex<double> psi_c(std::span<const std::complex<double>> w) const;

  /// Laplace-Stieltjes exponent phi(alpha) = log E exp(-alpha . X(1)).
  /// Requires a spectrally positive model and alpha >= 0.
  double phi(std::span<const double> alpha) const;

  /// phi restricted to coordinate k (other coordinates zeroed).
  double phi_marginal(std::size_t k, double a) const;
  std::complex<double> psi_marginal(std::size_t k, double a) const;

  /// E X(1), computed analytically; equals -grad phi(0+) when spectrally
  /// positive. Finite for every representable model.
  std::vector<double> mean_vector() const;

  /// Covariance rate of X: Sigma + sum_j rate_j E[J J^T].
  Matrix covariance_rate() const;

  /// A = phi(2 i_vec) - 2 phi(i_vec), evaluated with the drift term cancelled
  /// algebraically, so it is exactly drift-invariant and >= 0.
  double compensator_rate(std::span<const double> i_vec) const;

  /// B with B B^T = clip_psd(Sigma); K x B-cols, used to draw Gaussian
  /// increments. Model error at construction if an eigenvalue < -1e-10.
  const Matrix& gaussian_factor() const { return factor_; }

 private:
  std::size_t dim_;
  std::vector<double> drift_;
  Matrix cov_;
  std::vector<JumpComponent> jumps_;
  Matrix factor_;
  bool has_gaussian_ = false;
  bool exact_ = true;
};

/// Finite-activity approximation of a gamma subordinator (Levy density
/// a exp(-b x)/x on (0, inf)): jumps below eps are folded into the drift plus
/// a Brownian variance correction, and the tail is quantised into point-mass
/// bins on a geometric mesh. The result is flagged non-exact.
LevyModel gamma_subordinator_approx(double a, double b, double eps,
                                    std::size_t bins_per_decade = 8);

/// Exact Laplace exponent of the gamma subordinator, for error checks:
/// phi(alpha) = -a log(1 + alpha/b).
double gamma_subordinator_phi(double a, double b, double alpha);

}  // namespace levy
