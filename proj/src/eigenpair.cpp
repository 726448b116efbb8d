#include "lens/eigenpair.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lens {

namespace {

double weighted_dot(const Eigen::ArrayXd& w, const Eigen::ArrayXd& a,
                    const Eigen::ArrayXd& b) {
  return (w * a * b).sum();
}

}  // namespace

EigenPair radial_eigenpair(const NeumannLaplacian& op, double tol, int max_iterations) {
  const RadialGrid& g = op.grid();
  const Eigen::ArrayXd& m = op.mass();
  const double vol = m.sum();

  // seed with a generic sign-changing profile
  Eigen::ArrayXd x =
      (g.nodes - g.nodes(0)).cos() + 0.3 * (2.0 * (g.nodes - g.nodes(0))).sin();
  x -= (m * x).sum() / vol;
  x /= std::sqrt(weighted_dot(m, x, x));

  double mu_op = 0.0;
  double res = 0.0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    RadialField y = op.inverse(make_field(op.grid_ptr(), x), 1e-3);
    Eigen::ArrayXd z = y.values - (m * y.values).sum() / vol;
    z /= std::sqrt(weighted_dot(m, z, z));
    x = z;

    const Eigen::ArrayXd tx = op.stiffness_apply(x) / m;
    mu_op = weighted_dot(m, x, tx);
    res = std::sqrt(weighted_dot(m, tx - mu_op * x, tx - mu_op * x));
    if (res <= tol * std::abs(mu_op) && it >= 3) break;
  }
  if (it >= max_iterations)
    throw std::runtime_error("radial_eigenpair: inverse iteration did not converge");

  if (x(0) < 0.0) x = -x;
  RadialField psi = make_field(op.grid_ptr(), x);
  EigenPair pair;
  pair.psi = psi;
  pair.mu = dirichlet_energy(psi) / weighted_dot(m, x, x);
  const Eigen::ArrayXd tpsi = op.stiffness_apply(x) / m;
  pair.residual = std::sqrt(weighted_dot(m, tpsi - pair.mu * x, tpsi - pair.mu * x));
  pair.iterations = it + 1;
  return pair;
}

TuneResult tune_annulus(int dimension, double inner_radius, double target_mu,
                        double tol, int intervals) {
  if (!(target_mu > 0.0)) throw std::invalid_argument("tune_annulus: target must be > 0");
  if (inner_radius < 0.0) throw std::invalid_argument("tune_annulus: inner radius < 0");

  TuneResult result;
  auto mu_of = [&](double b) {
    RadialDomain dom{inner_radius, b, dimension};
    NeumannLaplacian op(build_grid(dom, intervals));
    const double mu = radial_eigenpair(op).mu;
    result.trace.push_back({b, mu});
    return mu;
  };

  // expand a bracket [b_lo, b_hi] with mu(b_lo) > target > mu(b_hi);
  // mu decreases when the domain widens
  const double floor_b = inner_radius > 0.0 ? 1.01 * inner_radius : 1e-2;
  const double ceil_b = inner_radius > 0.0 ? 1e3 * inner_radius : 1e3;
  double b_lo = floor_b;
  double mu_lo = mu_of(b_lo);
  if (mu_lo < target_mu)
    throw std::runtime_error("tune_annulus: target above mu at the smallest bracket radius");
  double b_hi = b_lo;
  double mu_hi = mu_lo;
  while (mu_hi > target_mu) {
    b_hi *= 2.0;
    if (b_hi > ceil_b) throw std::runtime_error("tune_annulus: no bracket found");
    mu_hi = mu_of(b_hi);
  }

  // bisection with a secant candidate in log(mu); both stay in the bracket
  double b = b_hi, mu = mu_hi;
  for (int k = 0; k < 200; ++k) {
    if (std::abs(mu - target_mu) <= tol) break;
    double cand = b_lo + (b_hi - b_lo) * (mu_lo - target_mu) / (mu_lo - mu_hi);
    if (!(cand > b_lo && cand < b_hi)) cand = 0.5 * (b_lo + b_hi);
    b = cand;
    mu = mu_of(b);
    if (mu > target_mu) {
      b_lo = b;
      mu_lo = mu;
    } else {
      b_hi = b;
      mu_hi = mu;
    }
    if (b_hi - b_lo < 1e-14 * b_hi) break;
  }
  if (std::abs(mu - target_mu) > tol)
    throw std::runtime_error("tune_annulus: did not reach the target eigenvalue");

  // check the empirical monotone decrease of mu along the sampled radii
  auto sorted = result.trace;
  std::sort(sorted.begin(), sorted.end(),
            [](const TuneSample& x, const TuneSample& y) { return x.outer_radius < y.outer_radius; });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].mu > sorted[i - 1].mu * (1.0 + 1e-6))
      throw std::runtime_error("tune_annulus: eigenvalue is not decreasing along the bracket");
  }

  result.outer_radius = b;
  result.mu = mu;
  return result;
}

double log_normalization_constant(const RadialField& psi) {
  const double norm = lq_norm(psi, 2.0);
  if (std::abs(norm - 1.0) > 1e-8)
    throw std::invalid_argument("log_normalization_constant: psi is not L2-normalized");
  const Eigen::ArrayXd sq = psi.values.square();
  Eigen::ArrayXd integrand(sq.size());
  for (int i = 0; i < sq.size(); ++i)
    integrand(i) = sq(i) > 0.0 ? sq(i) * std::log(sq(i)) : 0.0;
  const double val = integrate(*psi.grid, integrand);
  return std::exp(-0.5 * val);
}

}  // namespace lens
