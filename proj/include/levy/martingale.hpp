#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "levy/integrands.hpp"
#include "levy/reflection.hpp"

namespace levy {

struct FvJump {
  double time;
  double dy;
};

/// Deterministic finite-variation process Y = y0 + Y^c + sum of jumps, with a
/// continuous piecewise-linear part through (node_times, node_values). Node
/// times must start at 0 with value 0; Y^c stays flat after the last node.
struct FiniteVariationSpec {
  double y0 = 0.0;
  std::vector<double> node_times{0.0};
  std::vector<double> node_values{0.0};
  std::vector<FvJump> jumps;

  double yc_at(double t) const;
};

/// Y realised on a grid. For the reflected case Y(t) = z0 + L(t): the
/// continuous part is the regulator and there are no Y jumps.
struct YPath {
  enum class Kind { explicit_fv, regulator };
  Kind kind = Kind::explicit_fv;
  double y0 = 0.0;
  std::vector<double> yc;               // per grid point, yc[0] = 0
  std::vector<std::size_t> jump_index;  // grid indices of Y jumps
  std::vector<double> jump_dy;
};

/// Realised inputs shared by the martingale/QV evaluators: the composed
/// Z = X~ + Y at grid points plus Z(tau-) at every jump epoch of X~.
struct EvalContext {
  const LevyModel* model = nullptr;
  const RealizedIntegrand* integrand = nullptr;
  const IntegratedPath* xt = nullptr;
  YPath y;
  std::vector<double> z;
  std::vector<double> z_left_at_jump;  // aligned with xt->jump_index

  bool regulator() const { return y.kind == YPath::Kind::regulator; }
};

EvalContext make_context_reflected(const LevyModel& model,
                                   const RealizedIntegrand& integrand,
                                   const IntegratedPath& xt, const ReflectedPath& refl);

/// y_scale is the beta >= 0 factor of the Markov-modulated specialisation
/// (Y replaced by beta Y).
EvalContext make_context_explicit(const LevyModel& model,
                                  const RealizedIntegrand& integrand,
                                  const IntegratedPath& xt,
                                  const FiniteVariationSpec& y_spec,
                                  double y_scale = 1.0);

struct MartingaleOptions {
  /// Multiplies term_phi; != 1 only in negative-control tests.
  double corrupt_term_phi = 1.0;
};

struct MartingaleDecomposition {
  std::vector<double> checkpoints;  // snapped to grid times
  std::vector<double> term_phi;       // int_0^t phi(I(s)) e^{-Z(s)} ds
  std::vector<double> term_boundary;  // e^{-Z(0)} - e^{-Z(t)}
  std::vector<double> term_yc;        // -int_0^t e^{-Z(s)} dY^c(s)
  std::vector<double> term_jumps;     // sum e^{-Z(s)} (1 - e^{dY(s)})
  std::vector<double> total;          // exact sum of the four terms
};

struct ComplexMartingaleDecomposition {
  std::vector<double> checkpoints;
  std::vector<std::complex<double>> term_phi, term_boundary, term_yc, term_jumps, total;
};

/// Real Kella-Whitt martingale (Laplace form). Requires a spectrally positive
/// model and a nonnegative integrand. ds-integrals use left-endpoint sums on
/// the refined grid; Y jumps enter with the post-jump e^{-Z}; for
/// regulator-backed Y the continuous term is -(L(t) - L(0)) by complementarity.
MartingaleDecomposition kw_martingale_real(const EvalContext& ctx,
                                           std::span<const double> checkpoints,
                                           const MartingaleOptions& opts = {});

/// Complex (Fourier) form at parameter theta: weights psi(theta I(s)) and
/// e^{i theta Z}. theta is allowed complex so the Laplace form is the special
/// case theta = i alpha, which the tests use as a dual-evaluation oracle.
ComplexMartingaleDecomposition kw_martingale_complex(const EvalContext& ctx,
                                                     std::complex<double> theta,
                                                     std::span<const double> checkpoints);

/// Markov-modulated specialisation: term_phi computed as
/// sum_k phi_k(alpha_k) int e^{-Z} 1{J(s)=k} ds over the realised CTMC
/// segments. Input error unless the integrand is state-annotated with level
/// vectors alpha_k e_k and the state count matches the model dimension.
MartingaleDecomposition markov_modulated_martingale(const EvalContext& ctx,
                                                    std::span<const double> checkpoints);

struct QVDecomposition {
  std::vector<double> checkpoints;
  std::vector<double> continuous_qv;  // int e^{-2Z} I^T Sigma I ds
  std::vector<double> jump_qv;        // sum e^{-2Z(s-)}(1 - e^{-dX~(s)})^2
  std::vector<double> compensator;    // int e^{-2Z} A(s) ds, A = phi(2I) - 2 phi(I)
};

QVDecomposition quadratic_variation(const EvalContext& ctx,
                                    std::span<const double> checkpoints);

/// CSV dump: t, term_phi, term_boundary, term_yc, term_jumps, M, qv_cont,
/// qv_jump, compensator.
void dump_decomposition_csv(const MartingaleDecomposition& m, const QVDecomposition& qv,
                            std::ostream& os);

/// Per-interval weights coeff[segment(i)] * (t_{i+1} - t_i) for the grid's
/// intervals; the building block of every left-endpoint ds-integral here.
std::vector<double> per_interval_weights(const RealizedIntegrand& integrand,
                                         const TimeGrid& grid,
                                         std::span<const double> segment_coeff);

}  // namespace levy
