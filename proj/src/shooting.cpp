#include "lens/shooting.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lens/operators.hpp"
#include "lens/qualitative.hpp"
#include "lens/variational.hpp"

namespace lens {

namespace {

struct Rhs {
  double p;
  int dimension;
  double coeff;
  // current_sign carries the sign of u on the smooth piece for p = 0,
  // where the forcing is piecewise constant between crossings
  double current_sign = 0.0;

  double force(double u) const {
    if (p == 0.0) return coeff * current_sign;
    return coeff * signed_power(u, p);
  }
  double slope_term(double r, double v) const {
    if (dimension == 1) return 0.0;
    return -(dimension - 1) / r * v;
  }
  double accel(double r, double u, double v) const {
    return slope_term(r, v) - force(u);
  }
};

struct StepResult {
  double u, v;
};

StepResult rk4_step(const Rhs& rhs, double r, double u, double v, double h) {
  const double k1u = v, k1v = rhs.accel(r, u, v);
  const double k2u = v + 0.5 * h * k1v,
               k2v = rhs.accel(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
  const double k3u = v + 0.5 * h * k2v,
               k3v = rhs.accel(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
  const double k4u = v + h * k3v,
               k4v = rhs.accel(r + h, u + h * k3u, v + h * k3v);
  return {u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
          v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

// Advance one grid step for p = 0 with event location: when the value
// changes sign inside the step, bisect the substep length to land within
// 1e-12 of the zero, flip the piece sign, and finish the remaining length.
StepResult sign_problem_step(Rhs& rhs, double r, double u, double v, double h,
                             int& crossings, double& first_zero) {
  double remaining = h;
  while (remaining > 0.0) {
    StepResult trial = rk4_step(rhs, r, u, v, remaining);
    if (u == 0.0 || u * trial.u > 0.0) {
      u = trial.u;
      v = trial.v;
      r += remaining;
      break;
    }
    double lo = 0.0, hi = remaining;
    StepResult at_hi = trial;
    for (int k = 0; k < 200 && hi - lo > 1e-13 * h; ++k) {
      const double mid = 0.5 * (lo + hi);
      StepResult sm = rk4_step(rhs, r, u, v, mid);
      if (sm.u == 0.0 || sm.u * u > 0.0)
        lo = mid;
      else {
        hi = mid;
        at_hi = sm;
      }
    }
    ++crossings;
    if (std::isnan(first_zero)) first_zero = r + hi;
    r += hi;
    remaining -= hi;
    u = 0.0;  // land on the zero
    v = at_hi.v;
    rhs.current_sign = -rhs.current_sign;
  }
  return {u, v};
}

}  // namespace

ShootingTrajectory integrate_radial(double p, double initial_value,
                                    const RadialDomain& domain,
                                    const OdeOptions& options) {
  if (!(p >= 0.0)) throw std::invalid_argument("integrate_radial: p must be >= 0");
  if (initial_value == 0.0)
    throw std::invalid_argument("integrate_radial: initial value must be nonzero");
  const int m = options.steps;
  if (m < 16) throw std::invalid_argument("integrate_radial: too few steps");

  const double a = domain.inner_radius;
  const double b = domain.outer_radius;
  const double h = (b - a) / m;

  ShootingTrajectory out;
  out.initial_value = initial_value;
  out.radii = Eigen::ArrayXd::LinSpaced(m + 1, a, b);
  out.values.resize(m + 1);
  out.slopes.resize(m + 1);

  Rhs rhs{p, domain.dimension, options.coefficient,
          initial_value > 0.0 ? 1.0 : -1.0};

  out.values(0) = initial_value;
  out.slopes(0) = 0.0;
  int start = 0;

  if (domain.is_ball() && domain.dimension > 1) {
    // series start: u = s - f(s) r^2 / (2N) + c4 r^4 + O(r^6)
    const double n = domain.dimension;
    const double fs = options.coefficient * signed_power(initial_value, p);
    const double fp = p > 0.0
                          ? options.coefficient * p * std::pow(std::abs(initial_value), p - 1.0)
                          : 0.0;
    const double c4 = fp * fs / (8.0 * n * (n + 2.0));
    out.values(1) = initial_value - fs * h * h / (2.0 * n) + c4 * h * h * h * h;
    out.slopes(1) = -fs * h / n + 4.0 * c4 * h * h * h;
    start = 1;
  }

  double u = out.values(start);
  double v = out.slopes(start);
  for (int i = start; i < m; ++i) {
    const double r = out.radii(i);
    StepResult s = p == 0.0
                       ? sign_problem_step(rhs, r, u, v, h, out.crossings, out.first_zero)
                       : rk4_step(rhs, r, u, v, h);
    u = s.u;
    v = s.v;
    out.values(i + 1) = u;
    out.slopes(i + 1) = v;
    if (!std::isfinite(u) || !std::isfinite(v) || std::abs(u) > options.blowup_limit ||
        std::abs(v) > options.blowup_limit) {
      out.blew_up = true;
      out.values.tail(m - i).setZero();
      out.slopes.tail(m - i).setZero();
      out.values(i + 1) = u;
      out.slopes(i + 1) = v;
      break;
    }
  }
  out.terminal_slope = out.blew_up ? kNaN : v;

  if (p > 0.0) {
    for (int i = 0; i < m; ++i) {
      const double x = out.values(i), y = out.values(i + 1);
      if (x == 0.0 || x * y < 0.0) {
        ++out.crossings;
        if (std::isnan(out.first_zero)) {
          const double t = x / (x - y);
          out.first_zero = out.radii(i) + t * h;
        }
      }
    }
  }
  return out;
}

namespace {

RadialField trajectory_field(const ShootingTrajectory& t, const RadialDomain& domain) {
  auto grid = build_grid(domain, static_cast<int>(t.radii.size()) - 1);
  return make_field(grid, t.values);
}

double trajectory_energy(const ShootingTrajectory& t, const RadialDomain& domain, double p) {
  RadialField u = trajectory_field(t, domain);
  return p == 0.0 ? energy_I0(u) : energy_I(u, p);
}

}  // namespace

SolutionRecord shoot(double p, const RadialDomain& domain, const ShootConfig& config) {
  if (p == 1.0)
    throw std::invalid_argument("shoot: p = 1 is linear and has no isolated roots");

  double lo = config.bracket_lo, hi = config.bracket_hi;
  if (config.bracket_hint > 0.0) {
    lo = config.bracket_hint / 50.0;
    hi = config.bracket_hint * 50.0;
  }

  SolutionRecord record;
  record.p = p;
  record.method = "shooting";

  struct Sample {
    double s, miss;
    int crossings;
    bool ok;
  };

  auto probe = [&](double s) {
    ShootingTrajectory t = integrate_radial(p, s, domain, config.ode);
    return Sample{s, t.terminal_slope, t.crossings, !t.blew_up};
  };

  std::vector<double> roots;
  const int k = std::max(config.scan_points, 8);
  for (double sign : {1.0, -1.0}) {
    std::vector<Sample> scan;
    scan.reserve(k);
    for (int i = 0; i < k; ++i) {
      const double mag = lo * std::pow(hi / lo, double(i) / double(k - 1));
      scan.push_back(probe(sign * mag));
    }
    for (int i = 0; i + 1 < k; ++i) {
      const Sample& s0 = scan[i];
      const Sample& s1 = scan[i + 1];
      if (!s0.ok || !s1.ok) continue;
      if (s0.crossings != 1 || s1.crossings != 1) continue;
      if (s0.miss == 0.0) {
        roots.push_back(s0.s);
        continue;
      }
      if (s0.miss * s1.miss > 0.0) continue;
      double a = s0.s, b = s1.s, ma = s0.miss;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const Sample sm = probe(mid);
        if (!sm.ok) break;
        if (sm.miss == 0.0 || sm.miss * ma > 0.0) {
          a = mid;
          ma = sm.miss;
        } else {
          b = mid;
        }
        if (std::abs(b - a) < 1e-15 * std::abs(b)) break;
      }
      roots.push_back(0.5 * (a + b));
    }
  }

  std::optional<ShootingTrajectory> best;
  double best_energy = 0.0;
  for (double s : roots) {
    ShootingTrajectory t = integrate_radial(p, s, domain, config.ode);
    const double scale = t.slopes.abs().maxCoeff();
    ShootBranch branch;
    branch.initial_value = s;
    branch.miss = t.terminal_slope;
    branch.crossings = t.crossings;
    branch.energy = trajectory_energy(t, domain, p);
    const bool hit = std::abs(t.terminal_slope) <= config.miss_tol * scale;
    if (t.crossings == 1 && hit && !t.blew_up) {
      branch.accepted = true;
      if (!best || branch.energy < best_energy) {
        best = t;
        best_energy = branch.energy;
      }
    }
    record.branches.push_back(branch);
  }

  if (!best) {
    record.converged = false;
    record.note = "no single-crossing Neumann closure found in the bracket";
    return record;
  }

  const ShootingTrajectory& t = *best;
  record.profile = trajectory_field(t, domain);
  record.level_L = best_energy;
  record.sup_norm = sup_norm(record.profile);
  record.crossings = t.crossings;
  record.monotone = check_monotone(record.profile, 1e-10).monotone;
  record.converged = true;

  const double denom = p == 0.0
                           ? (record.profile.grid->volume_weights *
                              record.profile.values.abs().sign())
                                 .sum()
                           : (record.profile.grid->volume_weights *
                              record.profile.values.abs().pow(p))
                                 .sum();
  record.compat = integrate(*record.profile.grid,
                            signed_power(record.profile.values, p)) /
                  (denom > 0.0 ? denom : 1.0);
  NeumannLaplacian op(record.profile.grid);
  record.residual = pde_residual(op, record.profile, p);
  return record;
}

}  // namespace lens
