#include "levy/integrands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace levy {

namespace {

void validate_generator(const Matrix& q) {
  const std::size_t n = q.size();
  if (n == 0) throw InputError("ctmc: empty generator");
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(q(i, j))) throw InputError("ctmc: non-finite generator entry");
      if (i != j && q(i, j) < 0.0)
        throw InputError("ctmc: negative off-diagonal rate q(" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      row += q(i, j);
    }
    if (std::abs(row) > 1e-9 * (1.0 + std::abs(q(i, i))))
      throw InputError("ctmc: row " + std::to_string(i) + " does not sum to 0");
  }
}

}  // namespace

std::size_t CtmcPath::state_at(double t) const {
  const auto it = std::upper_bound(transition_times.begin(), transition_times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - transition_times.begin());
  return k == 0 ? initial_state : states_after[k - 1];
}

std::size_t CtmcPath::state_before(double t) const {
  const auto it = std::lower_bound(transition_times.begin(), transition_times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - transition_times.begin());
  return k == 0 ? initial_state : states_after[k - 1];
}

CtmcPath simulate_ctmc(const Matrix& q, std::size_t initial, double horizon, Stream& rng) {
  validate_generator(q);
  if (initial >= q.size()) throw InputError("ctmc: initial state out of range");
  if (!(horizon > 0.0)) throw InputError("ctmc: horizon must be positive");

  CtmcPath path;
  path.initial_state = initial;
  path.horizon = horizon;
  std::size_t s = initial;
  double t = 0.0;
  while (true) {
    const double out_rate = -q(s, s);
    if (out_rate <= 0.0) break;  // absorbing
    t += rng.exponential(out_rate);
    if (t >= horizon) break;
    const double u = rng.uniform01() * out_rate;
    double cum = 0.0;
    std::size_t next = s;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (j == s) continue;
      cum += q(s, j);
      if (u <= cum) {
        next = j;
        break;
      }
    }
    if (next == s) {  // numerical edge: u landed past the last positive rate
      for (std::size_t j = q.size(); j-- > 0;)
        if (j != s && q(s, j) > 0.0) {
          next = j;
          break;
        }
    }
    path.transition_times.push_back(t);
    path.states_after.push_back(next);
    s = next;
  }
  return path;
}

std::vector<double> ctmc_stationary(const Matrix& q) {
  validate_generator(q);
  const std::size_t n = q.size();

  // irreducibility: every state reaches every other through positive rates
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j)
        if (j != v && q(v, j) > 0.0 && !seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      throw ConfigError("ctmc_stationary: generator is not irreducible");
  }

  // solve pi Q = 0 with normalisation replacing the last column
  Matrix m(n);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = q(j, i);
  for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = 1.0;
  rhs[n - 1] = 1.0;

  // Gaussian elimination, partial pivoting
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < 1e-14)
      throw ConfigError("ctmc_stationary: singular system (nonergodic generator)");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> pi(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * pi[j];
    pi[i] = s / m(i, i);
  }
  return pi;
}

// ---------------------------------------------------------------------------

std::size_t integrand_dim(const IntegrandSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantIntegrand>) return s.levels.size();
        else if constexpr (std::is_same_v<T, PiecewiseIntegrand>)
          return s.levels.empty() ? 0 : s.levels.front().size();
        else return s.level_map.empty() ? 0 : s.level_map.front().size();
      },
      spec);
}

bool integrand_nonnegative(const IntegrandSpec& spec) {
  const auto all_nonneg = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  };
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantIntegrand>) return all_nonneg(s.levels);
        else if constexpr (std::is_same_v<T, PiecewiseIntegrand>)
          return std::all_of(s.levels.begin(), s.levels.end(), all_nonneg);
        else
          return std::all_of(s.level_map.begin(), s.level_map.end(), all_nonneg);
      },
      spec);
}

RealizedIntegrand::RealizedIntegrand(std::size_t dim, double horizon,
                                     std::vector<double> switch_times,
                                     std::vector<std::vector<double>> segment_levels,
                                     std::vector<std::size_t> segment_states)
    : dim_(dim),
      horizon_(horizon),
      switch_times_(std::move(switch_times)),
      levels_(std::move(segment_levels)),
      states_(std::move(segment_states)) {
  if (levels_.size() != switch_times_.size() + 1)
    throw InputError("RealizedIntegrand: need one more level than switch times");
  for (const auto& l : levels_) {
    if (l.size() != dim_) throw InputError("RealizedIntegrand: level dimension mismatch");
    for (const double x : l)
      if (!std::isfinite(x)) throw InputError("RealizedIntegrand: non-finite level");
  }
  for (std::size_t i = 1; i < switch_times_.size(); ++i)
    if (!(switch_times_[i] > switch_times_[i - 1]))
      throw InputError("RealizedIntegrand: switch times must be increasing");
  if (!switch_times_.empty() &&
      (switch_times_.front() <= 0.0 || switch_times_.back() >= horizon_))
    throw InputError("RealizedIntegrand: switch times must lie inside (0, horizon)");
  if (!states_.empty() && states_.size() != levels_.size())
    throw InputError("RealizedIntegrand: state annotation size mismatch");
}

std::size_t RealizedIntegrand::segment_of(double t) const {
  const auto it = std::upper_bound(switch_times_.begin(), switch_times_.end(), t);
  return static_cast<std::size_t>(it - switch_times_.begin());
}

std::size_t RealizedIntegrand::segment_before(double t) const {
  const auto it = std::lower_bound(switch_times_.begin(), switch_times_.end(), t);
  return static_cast<std::size_t>(it - switch_times_.begin());
}

double RealizedIntegrand::bound() const {
  double b = 0.0;
  for (const auto& l : levels_) {
    double norm2 = 0.0;
    for (const double x : l) norm2 += x * x;
    b = std::max(b, norm2);
  }
  return std::sqrt(b);
}

RealizedIntegrand realize_integrand(const IntegrandSpec& spec, double horizon,
                                    const SeedPolicy& seeds, std::uint64_t replication,
                                    CtmcPath* ctmc_out) {
  if (const auto* c = std::get_if<ConstantIntegrand>(&spec)) {
    return RealizedIntegrand(c->levels.size(), horizon, {}, {c->levels});
  }
  if (const auto* p = std::get_if<PiecewiseIntegrand>(&spec)) {
    return RealizedIntegrand(integrand_dim(spec), horizon, p->breakpoints, p->levels);
  }
  const auto& mm = std::get<MarkovModulatedIntegrand>(spec);
  if (mm.level_map.size() != mm.q.size())
    throw InputError("MarkovModulatedIntegrand: level map size != state count");
  Stream cs(seeds.derive(replication, "ctmc"));
  CtmcPath ctmc = simulate_ctmc(mm.q, mm.initial_state, horizon, cs);
  std::vector<std::vector<double>> levels;
  std::vector<std::size_t> states;
  levels.push_back(mm.level_map[ctmc.initial_state]);
  states.push_back(ctmc.initial_state);
  for (const std::size_t s : ctmc.states_after) {
    levels.push_back(mm.level_map[s]);
    states.push_back(s);
  }
  if (ctmc_out) *ctmc_out = ctmc;
  return RealizedIntegrand(integrand_dim(spec), horizon, ctmc.transition_times,
                           std::move(levels), std::move(states));
}

std::vector<double> evaluate(const RealizedIntegrand& integrand, double t,
                             bool left_limit) {
  if (t < 0.0 || t > integrand.horizon())
    throw InputError("evaluate: t outside [0, horizon]");
  const std::size_t seg =
      left_limit && t > 0.0 ? integrand.segment_before(t) : integrand.segment_of(t);
  const auto level = integrand.segment_level(seg);
  return {level.begin(), level.end()};
}

// ---------------------------------------------------------------------------

double IntegratedPath::left_limit(std::size_t i) const { return values[i] - jump_at(i); }

double IntegratedPath::jump_at(std::size_t i) const {
  const auto it = std::lower_bound(jump_index.begin(), jump_index.end(), i);
  if (it == jump_index.end() || *it != i) return 0.0;
  return jump_dx[static_cast<std::size_t>(it - jump_index.begin())];
}

IntegratedPath stochastic_integral(const RealizedIntegrand& integrand,
                                   const LevyModel& model, const SamplePath& x,
                                   const IntegrationOptions& opts) {
  if (integrand.dim() != model.dim())
    throw InputError("stochastic_integral: integrand/model dimension mismatch");
  const TimeGrid& grid = x.grid();
  for (const double s : integrand.switch_times()) {
    const std::size_t i = grid.floor_index(s);
    if (std::abs(grid[i] - s) > TimeGrid::kMergeTol)
      throw InternalError("stochastic_integral: switch epoch " + std::to_string(s) +
                          " is not a grid point");
  }

  const std::size_t n = grid.size();
  const std::size_t K = model.dim();
  IntegratedPath out;
  out.values.assign(n, 0.0);
  out.substep_min.assign(n > 0 ? n - 1 : 0, 0.0);
  out.bridge_sampled = opts.bridge_stream != nullptr && model.has_gaussian_part();

  // per-segment bridge variance rates I^T Sigma I
  std::vector<double> seg_var(integrand.segments(), 0.0);
  if (out.bridge_sampled)
    for (std::size_t s = 0; s < integrand.segments(); ++s)
      seg_var[s] = quad_form(model.covariance(), integrand.segment_level(s));

  const bool constant = integrand.segments() == 1;
  const auto jumps = x.jumps();
  std::size_t jn = 0;  // next jump record

  std::size_t seg = 0;
  const auto switches = integrand.switch_times();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    while (seg < switches.size() && grid[i] >= switches[seg] - TimeGrid::kMergeTol) ++seg;
    const auto level = integrand.segment_level(seg);

    double jump = 0.0;
    const bool has_jump = jn < jumps.size() && jumps[jn].grid_index == i + 1;
    if (has_jump) {
      jump = dot(level, jumps[jn].dx);
      out.jump_index.push_back(i + 1);
      out.jump_dx.push_back(jump);
      ++jn;
    }

    if (constant) {
      // single segment: evaluate pointwise, X~ = alpha . X exactly
      double v = 0.0;
      for (std::size_t k = 0; k < K; ++k) v += level[k] * x.value(k, i + 1);
      out.values[i + 1] = v;
    } else {
      double inc = 0.0;
      for (std::size_t k = 0; k < K; ++k)
        inc += level[k] * (x.value(k, i + 1) - x.value(k, i));
      out.values[i + 1] = out.values[i] + inc;
    }

    const double a = out.values[i];
    const double b = out.values[i + 1] - jump;  // left limit at t_{i+1}
    double m = std::min(a, b);
    if (out.bridge_sampled && seg_var[seg] > 0.0) {
      const double var = seg_var[seg] * (grid[i + 1] - grid[i]);
      const double d = b - a;
      const double u = opts.bridge_stream->uniform01();
      m = 0.5 * (a + b - std::sqrt(d * d - 2.0 * var * std::log(u)));
    }
    out.substep_min[i] = m;
  }
  if (jn != jumps.size())
    throw InternalError("stochastic_integral: unconsumed jump records");

  out.grid = grid;
  return out;
}

}  // namespace levy
