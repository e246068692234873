#include "levy/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace levy {

namespace {

using cd = std::complex<double>;

void require_finite(std::span<const double> v, const char* what) {
  for (const double x : v)
    if (!std::isfinite(x)) throw InputError(std::string(what) + ": non-finite entry");
}

// Symmetric Jacobi eigendecomposition; a is overwritten with the diagonal.
// Returns eigenvectors as columns of v.
void jacobi_eigen(Matrix& a, Matrix& v) {
  const std::size_t n = a.size();
  v = Matrix(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) return;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

// ---------------------------------------------------------------------------
// JumpLaw

JumpLaw JumpLaw::point_mass(std::vector<double> atom) {
  if (atom.empty()) throw InputError("JumpLaw::point_mass: empty atom");
  require_finite(atom, "JumpLaw::point_mass");
  JumpLaw l;
  l.kind_ = Kind::point_mass;
  l.dim_ = atom.size();
  l.atoms_.push_back(std::move(atom));
  return l;
}

JumpLaw JumpLaw::exponential(std::size_t dim, std::size_t coord, double mu) {
  if (dim == 0 || coord >= dim) throw InputError("JumpLaw::exponential: bad coordinate");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw InputError("JumpLaw::exponential: mu must be positive");
  JumpLaw l;
  l.kind_ = Kind::exponential;
  l.dim_ = dim;
  l.coord_ = coord;
  l.mu_ = mu;
  return l;
}

JumpLaw JumpLaw::uniform(std::size_t dim, std::size_t coord, double a, double b) {
  if (dim == 0 || coord >= dim) throw InputError("JumpLaw::uniform: bad coordinate");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw InputError("JumpLaw::uniform: need a < b, finite");
  JumpLaw l;
  l.kind_ = Kind::uniform;
  l.dim_ = dim;
  l.coord_ = coord;
  l.a_ = a;
  l.b_ = b;
  return l;
}

JumpLaw JumpLaw::mixture(std::vector<double> weights,
                         std::vector<std::vector<double>> atoms) {
  if (weights.empty() || weights.size() != atoms.size())
    throw InputError("JumpLaw::mixture: weights/atoms size mismatch");
  double total = 0.0;
  for (const double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw InputError("JumpLaw::mixture: weights must be positive");
    total += w;
  }
  const std::size_t dim = atoms.front().size();
  for (const auto& atom : atoms) {
    if (atom.size() != dim) throw InputError("JumpLaw::mixture: atom dim mismatch");
    require_finite(atom, "JumpLaw::mixture");
  }
  JumpLaw l;
  l.kind_ = Kind::mixture;
  l.dim_ = dim;
  l.atoms_ = std::move(atoms);
  l.weights_.resize(weights.size());
  l.cum_weights_.resize(weights.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    l.weights_[i] = weights[i] / total;
    cum += weights[i] / total;
    l.cum_weights_[i] = cum;
  }
  l.cum_weights_.back() = 1.0;
  return l;
}

bool JumpLaw::spectrally_positive() const {
  switch (kind_) {
    case Kind::exponential:
      return true;
    case Kind::uniform:
      return a_ >= 0.0;
    case Kind::point_mass:
    case Kind::mixture:
      for (const auto& atom : atoms_)
        for (const double x : atom)
          if (x < 0.0) return false;
      return true;
  }
  return false;
}

std::vector<double> JumpLaw::mean() const {
  std::vector<double> m(dim_, 0.0);
  switch (kind_) {
    case Kind::point_mass:
      return atoms_.front();
    case Kind::exponential:
      m[coord_] = 1.0 / mu_;
      return m;
    case Kind::uniform:
      m[coord_] = 0.5 * (a_ + b_);
      return m;
    case Kind::mixture:
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        for (std::size_t k = 0; k < dim_; ++k) m[k] += weights_[i] * atoms_[i][k];
      return m;
  }
  return m;
}

Matrix JumpLaw::second_moment() const {
  Matrix s(dim_);
  switch (kind_) {
    case Kind::point_mass:
      for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
          s(i, j) = atoms_.front()[i] * atoms_.front()[j];
      return s;
    case Kind::exponential:
      s(coord_, coord_) = 2.0 / (mu_ * mu_);
      return s;
    case Kind::uniform:
      s(coord_, coord_) = (a_ * a_ + a_ * b_ + b_ * b_) / 3.0;
      return s;
    case Kind::mixture:
      for (std::size_t w = 0; w < atoms_.size(); ++w)
        for (std::size_t i = 0; i < dim_; ++i)
          for (std::size_t j = 0; j < dim_; ++j)
            s(i, j) += weights_[w] * atoms_[w][i] * atoms_[w][j];
      return s;
  }
  return s;
}

std::complex<double> JumpLaw::chf(std::span<const std::complex<double>> w) const {
  if (w.size() != dim_) throw InputError("JumpLaw::chf: dimension mismatch");
  const cd I{0.0, 1.0};
  switch (kind_) {
    case Kind::point_mass: {
      cd e = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) e += w[k] * atoms_.front()[k];
      return std::exp(I * e);
    }
    case Kind::exponential: {
      const cd wk = w[coord_];
      if (mu_ + wk.imag() <= 1e-12)
        throw InputError("JumpLaw::chf: argument outside exponential-law strip");
      return mu_ / (mu_ - I * wk);
    }
    case Kind::uniform: {
      const cd wk = w[coord_];
      if (std::abs(wk) * (b_ - a_) < 1e-8) {
        // second-order expansion around 0
        const double m1 = 0.5 * (a_ + b_);
        const double m2 = (a_ * a_ + a_ * b_ + b_ * b_) / 3.0;
        return 1.0 + I * wk * m1 - 0.5 * wk * wk * m2;
      }
      return (std::exp(I * wk * b_) - std::exp(I * wk * a_)) / (I * wk * (b_ - a_));
    }
    case Kind::mixture: {
      cd total = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        cd e = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) e += w[k] * atoms_[i][k];
        total += weights_[i] * std::exp(I * e);
      }
      return total;
    }
  }
  return 0.0;
}

double JumpLaw::lst(std::span<const double> alpha) const {
  std::vector<cd> w(alpha.size());
  for (std::size_t k = 0; k < alpha.size(); ++k) w[k] = cd{0.0, alpha[k]};
  return chf(w).real();
}

void JumpLaw::sample(Stream& rng, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  switch (kind_) {
    case Kind::point_mass:
      std::copy(atoms_.front().begin(), atoms_.front().end(), out.begin());
      return;
    case Kind::exponential:
      out[coord_] = rng.exponential(mu_);
      return;
    case Kind::uniform:
      out[coord_] = a_ + (b_ - a_) * rng.uniform01();
      return;
    case Kind::mixture: {
      const double u = rng.uniform01();
      const auto it = std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u);
      const std::size_t i =
          std::min<std::size_t>(static_cast<std::size_t>(it - cum_weights_.begin()),
                                atoms_.size() - 1);
      std::copy(atoms_[i].begin(), atoms_[i].end(), out.begin());
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// LevyModel

LevyModel::LevyModel(std::vector<double> drift, Matrix covariance,
                     std::vector<JumpComponent> jumps, bool exact)
    : dim_(drift.size()),
      drift_(std::move(drift)),
      cov_(std::move(covariance)),
      jumps_(std::move(jumps)),
      exact_(exact) {
  if (dim_ == 0) throw InputError("LevyModel: dimension must be positive");
  require_finite(drift_, "LevyModel drift");
  if (cov_.size() != dim_) throw InputError("LevyModel: covariance size mismatch");
  require_finite(cov_.data(), "LevyModel covariance");
  if (!cov_.symmetric(1e-9)) throw ModelError("LevyModel: covariance not symmetric");
  for (const auto& j : jumps_) {
    if (!(j.rate > 0.0) || !std::isfinite(j.rate))
      throw InputError("LevyModel: jump rate must be positive");
    if (j.law.dim() != dim_) throw InputError("LevyModel: jump law dimension mismatch");
  }

  // PSD clip and factorisation (eigenvalues >= -1e-10, clipped to 0)
  Matrix a = cov_;
  Matrix v;
  jacobi_eigen(a, v);
  factor_ = Matrix(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    double lam = a(j, j);
    if (lam < -1e-10)
      throw ModelError("LevyModel: covariance eigenvalue " + std::to_string(lam) +
                       " below PSD tolerance");
    lam = std::max(lam, 0.0);
    if (lam > 0.0) has_gaussian_ = true;
    const double r = std::sqrt(lam);
    for (std::size_t i = 0; i < dim_; ++i) factor_(i, j) = v(i, j) * r;
  }
}

bool LevyModel::spectrally_positive() const {
  return std::all_of(jumps_.begin(), jumps_.end(),
                     [](const JumpComponent& j) { return j.law.spectrally_positive(); });
}

std::complex<double> LevyModel::psi(std::span<const double> alpha) const {
  if (alpha.size() != dim_) throw InputError("psi: alpha dimension mismatch");
  require_finite(alpha, "psi alpha");
  std::vector<cd> w(alpha.begin(), alpha.end());
  return psi_c(w);
}

std::complex<double> LevyModel::psi_c(std::span<const std::complex<double>> w) const {
  if (w.size() != dim_) throw InputError("psi_c: dimension mismatch");
  bool zero = true;
  for (const cd& x : w) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw InputError("psi_c: non-finite argument");
    if (x != cd{0.0, 0.0}) zero = false;
  }
  if (zero) return {0.0, 0.0};

  const cd I{0.0, 1.0};
  cd lin = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) lin += drift_[k] * w[k];
  cd quad = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    cd row = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) row += cov_(i, j) * w[j];
    quad += w[i] * row;
  }
  cd jump = 0.0;
  for (const auto& j : jumps_) jump += j.rate * (j.law.chf(w) - 1.0);
  return I * lin - 0.5 * quad + jump;
}

double LevyModel::phi(std::span<const double> alpha) const {
  if (alpha.size() != dim_) throw InputError("phi: alpha dimension mismatch");
  require_finite(alpha, "phi alpha");
  for (const double a : alpha)
    if (a < 0.0) throw InputError("phi: alpha must be nonnegative");
  if (!spectrally_positive())
    throw PreconditionError("phi: model has negative jumps");
  if (all_zero(alpha)) return 0.0;

  double lin = dot(drift_, alpha);
  double quad = quad_form(cov_, alpha);
  double jump = 0.0;
  for (const auto& j : jumps_) jump += j.rate * (j.law.lst(alpha) - 1.0);
  return -lin + 0.5 * quad + jump;
}

double LevyModel::phi_marginal(std::size_t k, double a) const {
  if (k >= dim_) throw InputError("phi_marginal: bad coordinate");
  std::vector<double> alpha(dim_, 0.0);
  alpha[k] = a;
  return phi(alpha);
}

std::complex<double> LevyModel::psi_marginal(std::size_t k, double a) const {
  if (k >= dim_) throw InputError("psi_marginal: bad coordinate");
  std::vector<double> alpha(dim_, 0.0);
  alpha[k] = a;
  return psi(alpha);
}

std::vector<double> LevyModel::mean_vector() const {
  std::vector<double> m(drift_.begin(), drift_.end());
  for (const auto& j : jumps_) {
    const auto jm = j.law.mean();
    for (std::size_t k = 0; k < dim_; ++k) m[k] += j.rate * jm[k];
  }
  return m;
}

Matrix LevyModel::covariance_rate() const {
  Matrix c = cov_;
  for (const auto& j : jumps_) {
    const Matrix s = j.law.second_moment();
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t k = 0; k < dim_; ++k) c(i, k) += j.rate * s(i, k);
  }
  return c;
}

double LevyModel::compensator_rate(std::span<const double> i_vec) const {
  if (i_vec.size() != dim_) throw InputError("compensator_rate: dimension mismatch");
  require_finite(i_vec, "compensator_rate i_vec");
  for (const double a : i_vec)
    if (a < 0.0) throw InputError("compensator_rate: i_vec must be nonnegative");
  if (!spectrally_positive())
    throw PreconditionError("compensator_rate: model has negative jumps");

  // phi(2a) - 2 phi(a) with the drift cancelled in closed form:
  // Gaussian part contributes a^T Sigma a, jumps contribute
  // rate * E[(1 - e^{-a.J})^2] >= 0 each.
  double total = quad_form(cov_, i_vec);
  std::vector<double> two(i_vec.size());
  for (std::size_t k = 0; k < i_vec.size(); ++k) two[k] = 2.0 * i_vec[k];
  for (const auto& j : jumps_) {
    double part = j.rate * (j.law.lst(two) - 2.0 * j.law.lst(i_vec) + 1.0);
    if (part < 0.0) {
      if (part < -1e-12)
        throw InternalError("compensator_rate: negative jump part " + std::to_string(part));
      part = 0.0;
    }
    total += part;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Gamma subordinator truncation

namespace {
double exp_integral_e1(double x) {
  // E1(x) = -Ei(-x), x > 0
  return -std::expint(-x);
}
}  // namespace

double gamma_subordinator_phi(double a, double b, double alpha) {
  return -a * std::log1p(alpha / b);
}

LevyModel gamma_subordinator_approx(double a, double b, double eps,
                                    std::size_t bins_per_decade) {
  if (!(a > 0.0) || !(b > 0.0) || !(eps > 0.0) || bins_per_decade == 0)
    throw InputError("gamma_subordinator_approx: parameters must be positive");

  // small jumps (0, eps): mean into drift, variance into the Gaussian part
  const double drift = a * (1.0 - std::exp(-b * eps)) / b;
  const double var = a * (1.0 - std::exp(-b * eps) * (1.0 + b * eps)) / (b * b);

  // tail (eps, inf): geometric bins, each a point mass at its conditional mean
  const double g = std::pow(10.0, 1.0 / static_cast<double>(bins_per_decade));
  std::vector<double> weights;
  std::vector<std::vector<double>> atoms;
  double lo = eps;
  double total_rate = 0.0;
  const double rate_floor = 1e-12 * a * exp_integral_e1(b * eps);
  while (true) {
    const double hi = lo * g;
    const double mass_rest = a * exp_integral_e1(b * hi);
    const double mass = a * exp_integral_e1(b * lo) - mass_rest;
    const double mean_num = a * (std::exp(-b * lo) - std::exp(-b * hi)) / b;
    if (mass > 0.0) {
      weights.push_back(mass);
      atoms.push_back({mean_num / mass});
      total_rate += mass;
    }
    if (mass_rest < rate_floor) {
      if (mass_rest > 0.0) {
        weights.push_back(mass_rest);
        atoms.push_back({a * std::exp(-b * hi) / b / mass_rest});
        total_rate += mass_rest;
      }
      break;
    }
    lo = hi;
  }

  Matrix cov(1);
  cov(0, 0) = var;
  std::vector<JumpComponent> jumps;
  jumps.push_back({total_rate, JumpLaw::mixture(std::move(weights), std::move(atoms))});
  return LevyModel({drift}, std::move(cov), std::move(jumps), /*exact=*/false);
}

}  // namespace levy
