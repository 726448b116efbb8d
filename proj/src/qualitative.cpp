#include "lens/qualitative.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lens {

MonotoneReport check_monotone(const RadialField& u, double tol) {
  const int n = u.size();
  double max_up = 0.0, max_down = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = u.values(i + 1) - u.values(i);
    max_up = std::max(max_up, d);
    max_down = std::max(max_down, -d);
  }
  const double band = tol * u.values.abs().maxCoeff();
  MonotoneReport rep;
  rep.worst_violation = std::min(max_up, max_down);
  rep.monotone = rep.worst_violation <= band;
  return rep;
}

PohozaevProfile pohozaev_profile(const RadialField& u) {
  const int dim = u.grid->domain.dimension;
  if (dim < 3) throw std::invalid_argument("pohozaev_profile: needs N >= 3");
  const double n = dim;
  const double crit = 2.0 * n / (n - 2.0);  // 2N/(N-2)
  const Eigen::ArrayXd& r = u.grid->nodes;
  const Eigen::ArrayXd du = radial_derivative(*u.grid, u.values);

  PohozaevProfile prof;
  prof.values = r.pow(n) / (2.0 * n) * du.square() +
                (n - 2.0) / (2.0 * n) * r.pow(n - 1.0) * du * u.values +
                (n - 2.0) / (2.0 * n * n) * r.pow(n) * u.values.abs().pow(crit);
  prof.max_deviation = (prof.values - prof.values(0)).abs().maxCoeff();

  for (int i = 0; i + 1 < u.size(); ++i) {
    const double x = u.values(i), y = u.values(i + 1);
    if (x == 0.0 || x * y < 0.0) {
      const double t = x == 0.0 ? 0.0 : x / (x - y);
      prof.first_zero = r(i) + t * u.grid->spacing;
      const double slope = du(i) * (1.0 - t) + du(i + 1) * t;
      prof.endpoint_rhs = std::pow(prof.first_zero, n) / (2.0 * n) * slope * slope;
      break;
    }
  }
  const double a = u.grid->domain.inner_radius;
  prof.endpoint_lhs =
      (n - 2.0) / (2.0 * n * n) * std::pow(a, n) * std::pow(std::abs(u.values(0)), crit);
  return prof;
}

NonexistenceScan ball_nonexistence_scan(double p, const RadialDomain& domain,
                                        const ShootConfig& config) {
  if (!domain.is_ball())
    throw std::invalid_argument("ball_nonexistence_scan: domain must be a ball");
  if (domain.dimension < 3)
    throw std::invalid_argument("ball_nonexistence_scan: needs N >= 3");

  NonexistenceScan scan;
  scan.p = p;
  const double n = domain.dimension;
  const int k = std::max(config.scan_points, 8);
  const double lo = config.bracket_lo, hi = config.bracket_hi;

  double min_miss = kNaN, min_poho = kNaN;
  int prev_sign = 0;
  bool prev_single = false;
  for (int i = 0; i < k; ++i) {
    const double s = lo * std::pow(hi / lo, double(i) / double(k - 1));
    ShootingTrajectory t = integrate_radial(p, s, domain, config.ode);
    ScanSample sample;
    sample.s = s;
    sample.miss = t.terminal_slope;
    sample.crossings = t.crossings;
    sample.blew_up = t.blew_up;
    const double vmax = t.slopes.abs().maxCoeff();
    if (!t.blew_up && t.crossings == 1 && vmax > 0.0) {
      const double rel_miss = std::abs(t.terminal_slope) / vmax;
      if (std::isnan(min_miss) || rel_miss < min_miss) min_miss = rel_miss;
      if (!std::isnan(t.first_zero)) {
        // interpolated slope at the first zero
        const int j = std::min<int>(
            static_cast<int>((t.first_zero - domain.inner_radius) /
                             (t.radii(1) - t.radii(0))),
            static_cast<int>(t.radii.size()) - 2);
        const double frac = (t.first_zero - t.radii(j)) / (t.radii(1) - t.radii(0));
        const double slope = t.slopes(j) * (1.0 - frac) + t.slopes(j + 1) * frac;
        sample.pohozaev_value = std::pow(t.first_zero / domain.outer_radius, n) *
                                (slope / vmax) * (slope / vmax);
        if (std::isnan(min_poho) || sample.pohozaev_value < min_poho)
          min_poho = sample.pohozaev_value;
      }
      const int sgn = t.terminal_slope > 0.0 ? 1 : (t.terminal_slope < 0.0 ? -1 : 0);
      if (prev_single && prev_sign != 0 && sgn != 0 && sgn != prev_sign)
        scan.root_found = true;
      prev_sign = sgn;
      prev_single = true;
    } else {
      prev_single = false;
    }
    scan.samples.push_back(sample);
  }
  scan.min_single_crossing_miss = min_miss;
  scan.min_pohozaev_value = min_poho;
  scan.verdict = scan.root_found ? "root found" : "no Neumann closure found";
  return scan;
}

RearrangementResult flip_rearrange(const NeumannLaplacian& op, const RadialField& f,
                                   double q, double mean_tol) {
  require_finite(f, "flip_rearrange");
  const Eigen::ArrayXd& vw = f.grid->volume_weights;
  const int n = f.size();

  const double total = (vw * f.values).sum();
  const double l1 = (vw * f.values.abs()).sum();
  if (l1 > 0.0 && std::abs(total) > mean_tol * l1)
    throw std::invalid_argument("flip_rearrange: f must have zero average");

  // cumulative integral evaluated at each node's volume-slot center
  Eigen::ArrayXd cum(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    cum(i) = acc + 0.5 * vw(i) * f.values(i);
    acc += vw(i) * f.values(i);
  }

  // flip: chi_{I>0} - chi_{I<=0}
  Eigen::ArrayXd g(n);
  for (int i = 0; i < n; ++i) g(i) = cum(i) > 0.0 ? f.values(i) : -f.values(i);

  // decreasing rearrangement of the (value, volume) atoms; stable ties
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g(a) > g(b); });

  // sorted layout over [0,|Omega|]; sample it at each node's slot center
  Eigen::ArrayXd out(n);
  {
    int k = 0;
    double layout_end = vw(order[0]);
    double slot_center = 0.0;
    for (int i = 0; i < n; ++i) {
      slot_center += 0.5 * vw(i);
      while (slot_center > layout_end && k + 1 < n) {
        ++k;
        layout_end += vw(order[k]);
      }
      out(i) = g(order[k]);
      slot_center += 0.5 * vw(i);
    }
  }

  RearrangementResult res;
  res.input = f;
  res.flipped = make_field(f.grid, g);
  res.output = make_field(f.grid, out);
  res.q_in = op.quadratic_form(f);
  res.q_out = op.quadratic_form(res.output);

  // distribution-level checks: the transform permutes atoms, so these are
  // roundoff-exact by construction
  double norm_in = 0.0, norm_out = 0.0, mean_in = 0.0, mean_out = 0.0;
  for (int i = 0; i < n; ++i) {
    norm_in += vw(i) * std::pow(std::abs(f.values(i)), q);
    mean_in += vw(i) * f.values(i);
  }
  for (int k = 0; k < n; ++k) {
    const int i = order[k];
    norm_out += vw(i) * std::pow(std::abs(g(i)), q);
    mean_out += vw(i) * g(i);
  }
  res.norm_defect = std::abs(std::pow(norm_out, 1.0 / q) - std::pow(norm_in, 1.0 / q));
  res.mean_defect = std::abs(mean_out - mean_in);
  return res;
}

}  // namespace lens
