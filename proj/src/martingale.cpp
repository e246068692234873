#include "levy/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "levy/csv.hpp"
#include "levy/simd/kernels.hpp"

namespace levy {

namespace {

using cd = std::complex<double>;

std::size_t snap_index(const TimeGrid& grid, double t) {
  const std::size_t i = grid.floor_index(t);
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  if (std::abs(grid[i] - t) <= tol) return i;
  if (i + 1 < grid.size() && std::abs(grid[i + 1] - t) <= tol) return i + 1;
  throw InputError("checkpoint " + std::to_string(t) + " is not a grid point");
}

std::vector<std::size_t> checkpoint_indices(const TimeGrid& grid,
                                            std::span<const double> checkpoints) {
  if (checkpoints.empty()) throw InputError("no checkpoints given");
  std::vector<std::size_t> idx;
  idx.reserve(checkpoints.size());
  for (const double c : checkpoints) {
    if (!(c > 0.0)) throw InputError("checkpoints must be positive");
    idx.push_back(snap_index(grid, c));
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] < idx[i - 1]) throw InputError("checkpoints must be nondecreasing");
  return idx;
}

void check_real_preconditions(const EvalContext& ctx) {
  if (!ctx.model->spectrally_positive())
    throw PreconditionError("kw_martingale_real: model has negative jumps");
  for (std::size_t s = 0; s < ctx.integrand->segments(); ++s)
    for (const double x : ctx.integrand->segment_level(s))
      if (x < 0.0)
        throw PreconditionError("kw_martingale_real: integrand must be nonnegative");
}

}  // namespace

std::vector<double> per_interval_weights(const RealizedIntegrand& integrand,
                                         const TimeGrid& grid,
                                         std::span<const double> segment_coeff) {
  const std::size_t n = grid.size();
  std::vector<double> w(n > 0 ? n - 1 : 0);
  std::size_t seg = 0;
  const auto switches = integrand.switch_times();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    while (seg < switches.size() && grid[i] >= switches[seg] - TimeGrid::kMergeTol) ++seg;
    w[i] = segment_coeff[seg] * (grid[i + 1] - grid[i]);
  }
  return w;
}

double FiniteVariationSpec::yc_at(double t) const {
  const auto& ts = node_times;
  if (ts.empty()) return 0.0;
  if (t <= ts.front()) return node_values.front();
  if (t >= ts.back()) return node_values.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
  return node_values[j - 1] + w * (node_values[j] - node_values[j - 1]);
}

EvalContext make_context_reflected(const LevyModel& model,
                                   const RealizedIntegrand& integrand,
                                   const IntegratedPath& xt, const ReflectedPath& refl) {
  EvalContext ctx;
  ctx.model = &model;
  ctx.integrand = &integrand;
  ctx.xt = &xt;
  ctx.y.kind = YPath::Kind::regulator;
  ctx.y.y0 = refl.z0;
  ctx.y.yc = refl.l;
  ctx.z = refl.z;
  ctx.z_left_at_jump.reserve(xt.jump_index.size());
  for (const std::size_t i : xt.jump_index)
    ctx.z_left_at_jump.push_back(refl.left_limit_z(xt, i));
  return ctx;
}

EvalContext make_context_explicit(const LevyModel& model,
                                  const RealizedIntegrand& integrand,
                                  const IntegratedPath& xt,
                                  const FiniteVariationSpec& y_spec, double y_scale) {
  if (!(y_scale >= 0.0)) throw InputError("make_context_explicit: y_scale must be >= 0");
  if (y_spec.node_times.size() != y_spec.node_values.size() ||
      y_spec.node_times.empty() || y_spec.node_times.front() != 0.0 ||
      y_spec.node_values.front() != 0.0)
    throw InputError("FiniteVariationSpec: nodes must start at (0, 0)");
  for (std::size_t i = 1; i < y_spec.node_times.size(); ++i)
    if (!(y_spec.node_times[i] > y_spec.node_times[i - 1]))
      throw InputError("FiniteVariationSpec: node times must be increasing");

  const TimeGrid& grid = xt.grid;
  const std::size_t n = grid.size();
  EvalContext ctx;
  ctx.model = &model;
  ctx.integrand = &integrand;
  ctx.xt = &xt;
  ctx.y.kind = YPath::Kind::explicit_fv;
  ctx.y.y0 = y_scale * y_spec.y0;
  ctx.y.yc.resize(n);
  for (std::size_t i = 0; i < n; ++i) ctx.y.yc[i] = y_scale * y_spec.yc_at(grid[i]);
  for (const auto& j : y_spec.jumps) {
    ctx.y.jump_index.push_back(snap_index(grid, j.time));
    ctx.y.jump_dy.push_back(y_scale * j.dy);
  }
  if (!std::is_sorted(ctx.y.jump_index.begin(), ctx.y.jump_index.end()))
    throw InputError("FiniteVariationSpec: jumps must be time-ordered");

  ctx.z.resize(n);
  double jump_cum = 0.0;
  std::size_t yj = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (yj < ctx.y.jump_index.size() && ctx.y.jump_index[yj] == i)
      jump_cum += ctx.y.jump_dy[yj++];
    ctx.z[i] = xt.values[i] + ctx.y.y0 + ctx.y.yc[i] + jump_cum;
  }

  ctx.z_left_at_jump.reserve(xt.jump_index.size());
  for (std::size_t r = 0; r < xt.jump_index.size(); ++r) {
    const std::size_t i = xt.jump_index[r];
    double zl = ctx.z[i] - xt.jump_dx[r];
    for (std::size_t k = 0; k < ctx.y.jump_index.size(); ++k)
      if (ctx.y.jump_index[k] == i) zl -= ctx.y.jump_dy[k];
    ctx.z_left_at_jump.push_back(zl);
  }
  return ctx;
}

MartingaleDecomposition kw_martingale_real(const EvalContext& ctx,
                                           std::span<const double> checkpoints,
                                           const MartingaleOptions& opts) {
  check_real_preconditions(ctx);
  const TimeGrid& grid = ctx.xt->grid;
  const auto idx = checkpoint_indices(grid, checkpoints);

  // phi(I) per segment
  std::vector<double> phi_seg(ctx.integrand->segments());
  for (std::size_t s = 0; s < phi_seg.size(); ++s)
    phi_seg[s] = ctx.model->phi(ctx.integrand->segment_level(s));
  const std::vector<double> w_phi = per_interval_weights(*ctx.integrand, grid, phi_seg);

  std::vector<double> w_yc;
  if (!ctx.regulator()) {
    w_yc.resize(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      w_yc[i] = ctx.y.yc[i + 1] - ctx.y.yc[i];
  }

  MartingaleDecomposition out;
  const double ez0 = std::exp(-ctx.z[0]);
  double phi_acc = 0.0, yc_acc = 0.0, jump_acc = 0.0;
  std::size_t prev = 0, yj = 0;
  for (const std::size_t ci : idx) {
    phi_acc += simd::sum_exp_weighted(ctx.z.data() + prev, w_phi.data() + prev,
                                      ci - prev, -1.0);
    if (!ctx.regulator())
      yc_acc += simd::sum_exp_weighted(ctx.z.data() + prev, w_yc.data() + prev,
                                       ci - prev, -1.0);
    while (yj < ctx.y.jump_index.size() && ctx.y.jump_index[yj] <= ci) {
      const std::size_t i = ctx.y.jump_index[yj];
      jump_acc += std::exp(-ctx.z[i]) * (1.0 - std::exp(ctx.y.jump_dy[yj]));
      ++yj;
    }
    prev = ci;

    const double term_phi = opts.corrupt_term_phi * phi_acc;
    const double term_boundary = ez0 - std::exp(-ctx.z[ci]);
    const double term_yc =
        ctx.regulator() ? -(ctx.y.yc[ci] - ctx.y.yc[0]) : -yc_acc;
    out.checkpoints.push_back(grid[ci]);
    out.term_phi.push_back(term_phi);
    out.term_boundary.push_back(term_boundary);
    out.term_yc.push_back(term_yc);
    out.term_jumps.push_back(jump_acc);
    out.total.push_back(term_phi + term_boundary + term_yc + jump_acc);
  }
  return out;
}

ComplexMartingaleDecomposition kw_martingale_complex(const EvalContext& ctx,
                                                     std::complex<double> theta,
                                                     std::span<const double> checkpoints) {
  if (!std::isfinite(theta.real()) || !std::isfinite(theta.imag()))
    throw InputError("kw_martingale_complex: non-finite theta");
  if (ctx.regulator() && !ctx.model->spectrally_positive())
    throw PreconditionError(
        "kw_martingale_complex: reflected evaluation requires a spectrally positive "
        "model (regulator jumps are out of scope)");
  const TimeGrid& grid = ctx.xt->grid;
  const auto idx = checkpoint_indices(grid, checkpoints);
  const cd I{0.0, 1.0};

  // psi(theta I) per segment (analytic continuation for complex theta)
  std::vector<cd> psi_seg(ctx.integrand->segments());
  std::vector<cd> w(ctx.integrand->dim());
  for (std::size_t s = 0; s < psi_seg.size(); ++s) {
    const auto level = ctx.integrand->segment_level(s);
    for (std::size_t k = 0; k < level.size(); ++k) w[k] = theta * level[k];
    psi_seg[s] = ctx.model->psi_c(w);
  }

  ComplexMartingaleDecomposition out;
  const cd eiz0 = std::exp(I * theta * ctx.z[0]);
  cd phi_acc = 0.0, yc_acc = 0.0, jump_acc = 0.0;
  std::size_t prev = 0, yj = 0, seg = 0;
  const auto switches = ctx.integrand->switch_times();
  for (const std::size_t ci : idx) {
    for (std::size_t i = prev; i < ci; ++i) {
      while (seg < switches.size() && grid[i] >= switches[seg] - TimeGrid::kMergeTol)
        ++seg;
      const cd eiz = std::exp(I * theta * ctx.z[i]);
      phi_acc += psi_seg[seg] * eiz * (grid[i + 1] - grid[i]);
      if (!ctx.regulator()) yc_acc += eiz * (ctx.y.yc[i + 1] - ctx.y.yc[i]);
    }
    while (yj < ctx.y.jump_index.size() && ctx.y.jump_index[yj] <= ci) {
      const std::size_t i = ctx.y.jump_index[yj];
      jump_acc += std::exp(I * theta * ctx.z[i]) *
                  (1.0 - std::exp(-I * theta * ctx.y.jump_dy[yj]));
      ++yj;
    }
    prev = ci;

    const cd term_boundary = eiz0 - std::exp(I * theta * ctx.z[ci]);
    const cd term_yc = ctx.regulator()
                           ? I * theta * (ctx.y.yc[ci] - ctx.y.yc[0])
                           : I * theta * yc_acc;
    out.checkpoints.push_back(grid[ci]);
    out.term_phi.push_back(phi_acc);
    out.term_boundary.push_back(term_boundary);
    out.term_yc.push_back(term_yc);
    out.term_jumps.push_back(jump_acc);
    out.total.push_back(phi_acc + term_boundary + term_yc + jump_acc);
  }
  return out;
}

MartingaleDecomposition markov_modulated_martingale(const EvalContext& ctx,
                                                    std::span<const double> checkpoints) {
  check_real_preconditions(ctx);
  const auto states = ctx.integrand->segment_states();
  if (states.empty())
    throw InputError("markov_modulated_martingale: integrand has no state annotation");
  const std::size_t K = ctx.model->dim();

  // level of state k must be alpha_k on coordinate k, zero elsewhere
  std::vector<double> alpha(K, 0.0);
  std::vector<bool> seen(K, false);
  for (std::size_t s = 0; s < ctx.integrand->segments(); ++s) {
    const std::size_t k = states[s];
    if (k >= K)
      throw InputError("markov_modulated_martingale: state count exceeds model dim");
    const auto level = ctx.integrand->segment_level(s);
    for (std::size_t j = 0; j < K; ++j) {
      if (j == k) continue;
      if (level[j] != 0.0)
        throw InputError(
            "markov_modulated_martingale: level map must be alpha_k on coordinate k");
    }
    if (seen[k] && alpha[k] != level[k])
      throw InputError("markov_modulated_martingale: inconsistent alpha for a state");
    alpha[k] = level[k];
    seen[k] = true;
  }

  std::vector<double> phi_k(K, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    if (seen[k]) phi_k[k] = ctx.model->phi_marginal(k, alpha[k]);

  const TimeGrid& grid = ctx.xt->grid;
  const auto idx = checkpoint_indices(grid, checkpoints);
  const std::size_t n = grid.size();

  // occupation integrals int e^{-Z} 1{J=k} ds, accumulated segment-wise
  std::vector<double> ez(n);
  simd::exp_scaled(ctx.z.data(), ez.data(), n, -1.0);

  MartingaleDecomposition out;
  const double ez0 = ez[0];
  std::vector<double> occ(K, 0.0);
  double jump_acc = 0.0;
  std::size_t prev = 0, yj = 0, seg = 0;
  const auto switches = ctx.integrand->switch_times();
  for (const std::size_t ci : idx) {
    for (std::size_t i = prev; i < ci; ++i) {
      while (seg < switches.size() && grid[i] >= switches[seg] - TimeGrid::kMergeTol)
        ++seg;
      occ[states[seg]] += ez[i] * (grid[i + 1] - grid[i]);
    }
    while (yj < ctx.y.jump_index.size() && ctx.y.jump_index[yj] <= ci) {
      const std::size_t i = ctx.y.jump_index[yj];
      jump_acc += ez[i] * (1.0 - std::exp(ctx.y.jump_dy[yj]));
      ++yj;
    }
    prev = ci;

    double term_phi = 0.0;
    for (std::size_t k = 0; k < K; ++k) term_phi += phi_k[k] * occ[k];
    double term_yc;
    if (ctx.regulator()) {
      term_yc = -(ctx.y.yc[ci] - ctx.y.yc[0]);
    } else {
      term_yc = 0.0;
      for (std::size_t i = 0; i < ci; ++i)
        term_yc -= ez[i] * (ctx.y.yc[i + 1] - ctx.y.yc[i]);
    }
    const double term_boundary = ez0 - ez[ci];
    out.checkpoints.push_back(grid[ci]);
    out.term_phi.push_back(term_phi);
    out.term_boundary.push_back(term_boundary);
    out.term_yc.push_back(term_yc);
    out.term_jumps.push_back(jump_acc);
    out.total.push_back(term_phi + term_boundary + term_yc + jump_acc);
  }
  return out;
}

QVDecomposition quadratic_variation(const EvalContext& ctx,
                                    std::span<const double> checkpoints) {
  check_real_preconditions(ctx);
  const TimeGrid& grid = ctx.xt->grid;
  const auto idx = checkpoint_indices(grid, checkpoints);

  std::vector<double> quad_seg(ctx.integrand->segments());
  std::vector<double> a_seg(ctx.integrand->segments());
  for (std::size_t s = 0; s < quad_seg.size(); ++s) {
    const auto level = ctx.integrand->segment_level(s);
    quad_seg[s] = quad_form(ctx.model->covariance(), level);
    a_seg[s] = ctx.model->compensator_rate(level);
  }
  const std::vector<double> w_cont = per_interval_weights(*ctx.integrand, grid, quad_seg);
  const std::vector<double> w_comp = per_interval_weights(*ctx.integrand, grid, a_seg);

  QVDecomposition out;
  double cont_acc = 0.0, comp_acc = 0.0, jump_acc = 0.0;
  std::size_t prev = 0, jr = 0;
  for (const std::size_t ci : idx) {
    cont_acc += simd::sum_exp_weighted(ctx.z.data() + prev, w_cont.data() + prev,
                                       ci - prev, -2.0);
    comp_acc += simd::sum_exp_weighted(ctx.z.data() + prev, w_comp.data() + prev,
                                       ci - prev, -2.0);
    while (jr < ctx.xt->jump_index.size() && ctx.xt->jump_index[jr] <= ci) {
      const double zl = ctx.z_left_at_jump[jr];
      const double d = 1.0 - std::exp(-ctx.xt->jump_dx[jr]);
      jump_acc += std::exp(-2.0 * zl) * d * d;
      ++jr;
    }
    prev = ci;
    out.checkpoints.push_back(grid[ci]);
    out.continuous_qv.push_back(cont_acc);
    out.jump_qv.push_back(jump_acc);
    out.compensator.push_back(comp_acc);
  }
  return out;
}

void dump_decomposition_csv(const MartingaleDecomposition& m, const QVDecomposition& qv,
                            std::ostream& os) {
  if (m.checkpoints.size() != qv.checkpoints.size())
    throw InternalError("dump_decomposition_csv: checkpoint mismatch");
  os << "t,term_phi,term_boundary,term_yc,term_jumps,M,qv_cont,qv_jump,compensator\n";
  for (std::size_t i = 0; i < m.checkpoints.size(); ++i)
    os << csv::fmt(m.checkpoints[i]) << ',' << csv::fmt(m.term_phi[i]) << ','
       << csv::fmt(m.term_boundary[i]) << ',' << csv::fmt(m.term_yc[i]) << ','
       << csv::fmt(m.term_jumps[i]) << ',' << csv::fmt(m.total[i]) << ','
       << csv::fmt(qv.continuous_qv[i]) << ',' << csv::fmt(qv.jump_qv[i]) << ','
       << csv::fmt(qv.compensator[i]) << "\n";
}

}  // namespace levy
