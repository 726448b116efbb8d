#include "lens/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lens/eigenpair.hpp"
#include "lens/nonlinear_average.hpp"

namespace lens {

namespace {

constexpr double kFloor = 1e-14;  // |u| floor for constraint gradients, p < 1

double wdot(const Eigen::ArrayXd& m, const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  return (m * a * b).sum();
}

// Removes the components of g along the two constraint gradients n1, n2
// (weighted metric), solving the 2x2 Gram system.
Eigen::ArrayXd project_tangent(const Eigen::ArrayXd& m, const Eigen::ArrayXd& g,
                               const Eigen::ArrayXd& n1, const Eigen::ArrayXd& n2) {
  const double g11 = wdot(m, n1, n1);
  const double g12 = wdot(m, n1, n2);
  const double g22 = wdot(m, n2, n2);
  const double b1 = wdot(m, n1, g);
  const double b2 = wdot(m, n2, g);
  const double det = g11 * g22 - g12 * g12;
  if (!(std::abs(det) > 1e-300)) return g;
  const double alpha = (b1 * g22 - b2 * g12) / det;
  const double beta = (g11 * b2 - g12 * b1) / det;
  return g - alpha * n1 - beta * n2;
}

}  // namespace

double energy_I(const RadialField& u, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("energy_I: p must be > 0");
  const double kinetic = 0.5 * dirichlet_energy(u);
  const double potential =
      (u.grid->volume_weights * u.values.abs().pow(p + 1.0)).sum() / (p + 1.0);
  return kinetic - potential;
}

double energy_I0(const RadialField& u) {
  return 0.5 * dirichlet_energy(u) - (u.grid->volume_weights * u.values.abs()).sum();
}

double dual_energy_phi(const NeumannLaplacian& op, const RadialField& f, double p,
                       double compat_tol) {
  if (!(p > 0.0)) throw std::invalid_argument("dual_energy_phi: p must be > 0");
  const double total = integrate(f);
  const double l1 = (f.grid->volume_weights * f.values.abs()).sum();
  if (l1 > 0.0 && std::abs(total) > compat_tol * l1)
    throw std::invalid_argument("dual_energy_phi: f must have zero average");
  const double q = (p + 1.0) / p;
  const double bulk = (f.grid->volume_weights * f.values.abs().pow(q)).sum();
  return p / (p + 1.0) * bulk - 0.5 * op.quadratic_form(f);
}

double level_L(double p, double lambda) {
  if (p == 1.0) throw std::invalid_argument("level_L: p = 1 is singular");
  if (!(p > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("level_L: need p > 0 and lambda > 0");
  return (p - 1.0) / (2.0 * (p + 1.0)) * std::pow(lambda, (p + 1.0) / (p - 1.0));
}

RadialField scale_to_solution(const RadialField& v, double lambda, double p) {
  if (p == 1.0) throw std::invalid_argument("scale_to_solution: p = 1 is singular");
  return make_field(v.grid, std::pow(lambda, 1.0 / (p - 1.0)) * v.values);
}

namespace {

// || -Δu - coeff |u|^{p-1}u || / || coeff |u|^{p-1}u ||, excluding the two
// cells adjacent to each sign change when p < 1.
double scaled_pde_residual(const NeumannLaplacian& op, const RadialField& u, double p,
                           double coeff) {
  const Eigen::ArrayXd lap = op.apply(u).values;
  const Eigen::ArrayXd rhs = coeff * signed_power(u.values, p);
  const int n = u.size();
  Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(n);
  if (p < 1.0) {
    for (int i = 0; i + 1 < n; ++i) {
      if (u.values(i) == 0.0 || u.values(i) * u.values(i + 1) < 0.0) {
        for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 2); ++j) mask(j) = 0.0;
      }
    }
  }
  const Eigen::ArrayXd& m = u.grid->volume_weights;
  const double num = std::sqrt((m * mask * (lap - rhs).square()).sum());
  const double den = std::sqrt((m * mask * rhs.square()).sum());
  return den > 0.0 ? num / den : num;
}

}  // namespace

double pde_residual(const NeumannLaplacian& op, const RadialField& u, double p) {
  return scaled_pde_residual(op, u, p, 1.0);
}

namespace {

struct DescentState {
  Eigen::ArrayXd u;
  double objective = 0.0;
};

// One full minimize run from a given seed.
VariationalResult run_minimize(const NeumannLaplacian& op, double p,
                               const VariationalConfig& cfg, Eigen::ArrayXd seed) {
  const Eigen::ArrayXd& m = op.mass();
  const GridPtr& grid = op.grid_ptr();

  auto retract = [&](Eigen::ArrayXd u) {
    RadialField w = recenter(make_field(grid, std::move(u)), p, cfg.cp_tol);
    const double norm = lq_norm(w, p + 1.0);
    return Eigen::ArrayXd(w.values / norm);
  };

  Eigen::ArrayXd u = retract(std::move(seed));
  double q = op.stiffness_form(u);
  double step = op.grid().spacing * op.grid().spacing / 4.0;

  Eigen::ArrayXd u_prev, g_prev;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Eigen::ArrayXd au = 2.0 * op.stiffness_apply(u) / m;
    const Eigen::ArrayXd absu = u.abs().max(kFloor);
    const Eigen::ArrayXd n1 = p * absu.pow(p - 1.0);
    const Eigen::ArrayXd n2 = (p + 1.0) * absu.pow(p - 1.0) * u;
    const Eigen::ArrayXd g = project_tangent(m, au, n1, n2);
    const double gn2 = wdot(m, g, g);

    if (u_prev.size() > 0) {
      const Eigen::ArrayXd du = u - u_prev;
      const Eigen::ArrayXd dg = g - g_prev;
      const double den = wdot(m, du, dg);
      if (den > 0.0) step = std::clamp(wdot(m, du, du) / den, 1e-12, 1e8);
    }
    u_prev = u;
    g_prev = g;

    bool accepted = false;
    Eigen::ArrayXd cand;
    double q_cand = q;
    for (int bt = 0; bt < 60; ++bt) {
      cand = retract(u - step * g);
      q_cand = op.stiffness_form(cand);
      if (q_cand <= q - 1e-4 * step * gn2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double rel = (q - q_cand) / std::max(q_cand, 1e-300);
    u = cand;
    q = q_cand;
    if (rel < cfg.objective_tol && it > 100) break;
  }

  VariationalResult res;
  res.p = p;
  res.extremizer = make_field(grid, u);
  res.level = dirichlet_energy(res.extremizer);
  res.el_residual = scaled_pde_residual(op, res.extremizer, p, res.level);
  res.iterations = it;
  res.converged = res.el_residual <= cfg.el_tol;
  return res;
}

}  // namespace

VariationalResult minimize_lambda(const NeumannLaplacian& op, double p,
                                  const VariationalConfig& config,
                                  const RadialField* warm_start) {
  if (!(p > 0.0)) throw std::invalid_argument("minimize_lambda: p must be > 0");

  std::vector<Eigen::ArrayXd> seeds;
  if (warm_start) seeds.push_back(warm_start->values);
  if (config.multi_start || seeds.empty()) {
    const EigenPair pair = radial_eigenpair(op);
    seeds.push_back(pair.psi.values);
    seeds.push_back(-pair.psi.values);
  }

  VariationalResult best;
  for (auto& seed : seeds) {
    VariationalResult r = run_minimize(op, p, config, std::move(seed));
    best.seed_levels.push_back(r.level);
    if (!(best.level == best.level) ||  // first run
        (r.converged && !best.converged) ||
        (r.converged == best.converged && r.level < best.level)) {
      auto levels = best.seed_levels;
      best = std::move(r);
      best.seed_levels = std::move(levels);
    }
  }
  return best;
}

VariationalResult maximize_D(const NeumannLaplacian& op, double p,
                             const VariationalConfig& config,
                             const RadialField* warm_start) {
  if (!(p > 0.0)) throw std::invalid_argument("maximize_D: p must be > 0");
  const Eigen::ArrayXd& m = op.mass();
  const GridPtr& grid = op.grid_ptr();
  const double vol = m.sum();
  const double q_exp = (p + 1.0) / p;

  auto retract = [&](Eigen::ArrayXd f) {
    f -= (m * f).sum() / vol;
    RadialField w = make_field(grid, std::move(f));
    const double norm = lq_norm(w, q_exp);
    return Eigen::ArrayXd(w.values / norm);
  };
  auto kf_of = [&](const Eigen::ArrayXd& f) {
    return op.inverse(make_field(grid, f), 1e-3).values;
  };

  Eigen::ArrayXd f;
  if (warm_start)
    f = retract(warm_start->values);
  else
    f = retract(radial_eigenpair(op).psi.values);

  Eigen::ArrayXd kf = kf_of(f);
  double val = wdot(m, f, kf);
  Eigen::ArrayXd f_prev, g_prev;
  double step = 1.0;
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(f.size());

  int it = 0;
  for (; it < config.max_iterations; ++it) {
    const Eigen::ArrayXd n2 = q_exp * signed_power(f, q_exp - 1.0);
    const Eigen::ArrayXd g = project_tangent(m, Eigen::ArrayXd(2.0 * kf), ones, n2);
    const double gn2 = wdot(m, g, g);

    if (f_prev.size() > 0) {
      const Eigen::ArrayXd df = f - f_prev;
      const Eigen::ArrayXd dg = g - g_prev;
      const double den = -wdot(m, df, dg);
      if (den > 0.0) step = std::clamp(wdot(m, df, df) / den, 1e-12, 1e10);
    }
    f_prev = f;
    g_prev = g;

    bool accepted = false;
    Eigen::ArrayXd cand, kc;
    double val_cand = val;
    for (int bt = 0; bt < 60; ++bt) {
      cand = retract(f + step * g);
      kc = kf_of(cand);
      val_cand = wdot(m, cand, kc);
      if (val_cand >= val + 1e-4 * step * gn2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }

    // fixed-point candidate from the dual equation K_p f = D |f|^{1/p-1} f,
    // accepted only when it improves the objective
    if (it % 10 == 0) {
      RadialField kp = recenter(make_field(grid, kf), p, config.cp_tol);
      Eigen::ArrayXd fp = retract(signed_power(kp.values, p));
      Eigen::ArrayXd kfp = kf_of(fp);
      const double val_fp = wdot(m, fp, kfp);
      if (val_fp > std::max(val, val_cand)) {
        cand = std::move(fp);
        kc = std::move(kfp);
        val_cand = val_fp;
        accepted = true;
      }
    }

    if (!accepted) break;
    const double rel = (val_cand - val) / std::max(val, 1e-300);
    f = cand;
    kf = kc;
    val = val_cand;
    if (rel < config.objective_tol && it > 100) break;
  }

  VariationalResult res;
  res.p = p;
  res.level = val;
  res.extremizer = make_field(grid, f);
  res.iterations = it;

  // Lemma 3.3 (ii) stationarity: K_p f = D_p |f|^{1/p-1} f
  RadialField kp = recenter(make_field(grid, kf), p, config.cp_tol);
  const Eigen::ArrayXd target = val * signed_power(f, 1.0 / p);
  const double num = std::sqrt(wdot(m, kp.values - target, kp.values - target));
  const double den = std::sqrt(wdot(m, target, target));
  res.el_residual = den > 0.0 ? num / den : num;
  res.converged = res.el_residual <= config.el_tol;
  return res;
}

namespace {

double weighted_median(const Eigen::ArrayXd& m, const Eigen::ArrayXd& u) {
  std::vector<int> idx(u.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return u(a) < u(b); });
  const double half = 0.5 * m.sum();
  double acc = 0.0;
  for (int k : idx) {
    acc += m(k);
    if (acc >= half) return u(k);
  }
  return u(idx.back());
}

L0Result l0_subgradient(const NeumannLaplacian& op, const L0Config& cfg) {
  const Eigen::ArrayXd& m = op.mass();
  const GridPtr& grid = op.grid_ptr();
  const EigenPair pair = radial_eigenpair(op);

  auto balance = [&](Eigen::ArrayXd u) {
    const double med = weighted_median(m, u);
    return Eigen::ArrayXd(u - med);
  };
  auto objective = [&](const Eigen::ArrayXd& u) {
    return 0.5 * op.stiffness_form(u) - (m * u.abs()).sum();
  };

  // optimal scaling of the eigenfunction as the seed
  const double t = (m * pair.psi.values.abs()).sum() / op.stiffness_form(pair.psi.values);
  Eigen::ArrayXd u = balance(t * pair.psi.values);
  double obj = objective(u);
  double step = 1.0;
  Eigen::ArrayXd u_prev, g_prev;

  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Eigen::ArrayXd g = op.stiffness_apply(u) / m - u.sign();
    if (u_prev.size() > 0) {
      const Eigen::ArrayXd du = u - u_prev;
      const Eigen::ArrayXd dg = g - g_prev;
      const double den = wdot(m, du, dg);
      if (den > 0.0) step = std::clamp(wdot(m, du, du) / den, 1e-12, 1e8);
    }
    u_prev = u;
    g_prev = g;

    bool accepted = false;
    Eigen::ArrayXd cand;
    double obj_cand = obj;
    for (int bt = 0; bt < 60; ++bt) {
      cand = balance(u - step * g);
      obj_cand = objective(cand);
      if (obj_cand < obj) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double rel = (obj - obj_cand) / std::max(std::abs(obj_cand), 1e-300);
    u = cand;
    obj = obj_cand;
    if (rel < 1e-14 && it > 100) break;
  }

  L0Result res;
  res.minimizer = make_field(grid, u);
  res.level = energy_I0(res.minimizer);
  res.iterations = it;
  res.converged = it < cfg.max_iterations;
  res.method = "subgradient";
  return res;
}

}  // namespace

L0Result minimize_L0(const NeumannLaplacian& op, const L0Config& config) {
  L0Result best = l0_subgradient(op, config);

  if (config.use_continuation) {
    VariationalConfig vc = config.variational;
    vc.multi_start = true;
    const double steps[] = {0.1, 0.01, 0.001};
    RadialField warm;
    bool have_warm = false;
    bool ok = true;
    double levels[3] = {0, 0, 0};
    RadialField u_last;
    for (int k = 0; k < 3; ++k) {
      VariationalResult r =
          minimize_lambda(op, steps[k], vc, have_warm ? &warm : nullptr);
      if (!r.converged) ok = false;
      warm = r.extremizer;
      have_warm = true;
      vc.multi_start = false;
      u_last = scale_to_solution(r.extremizer, r.level, steps[k]);
      levels[k] = energy_I(u_last, steps[k]);
    }
    if (ok) {
      // linear extrapolation of the level to p = 0 from the two smallest p
      const double l0 =
          levels[2] + (levels[2] - levels[1]) * (0.0 - steps[2]) / (steps[2] - steps[1]);
      const double direct = energy_I0(u_last);
      if (direct < best.level || !best.converged) {
        best.minimizer = u_last;
        best.level = std::min(direct, l0);
        best.converged = true;
        best.method = "continuation";
      }
    }
  }
  return best;
}

}  // namespace lens
