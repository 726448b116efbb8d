#include "lens/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lens/nonlinear_average.hpp"

namespace lens {

NeumannLaplacian::NeumannLaplacian(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("NeumannLaplacian: null grid");
  const RadialGrid& g = *grid_;
  const int m = g.intervals();
  const double h = g.spacing;
  const double n = static_cast<double>(g.domain.dimension);
  const double sigma = g.domain.surface_coefficient();

  face_coeff_.resize(m);
  for (int i = 0; i < m; ++i) {
    const double rf = g.nodes(i) + 0.5 * h;
    const double area = (g.domain.dimension == 1) ? sigma : sigma * std::pow(rf, n - 1.0);
    face_coeff_(i) = area / h;
  }
  // Dual-cell volumes; identical to the grid quadrature weights by
  // construction (the ball origin cell has positive volume sigma (h/2)^N / N).
  mass_ = g.volume_weights;

  const int size = m + 2;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * size);
  for (int i = 0; i <= m; ++i) {
    double diag = 0.0;
    if (i > 0) {
      trip.emplace_back(i, i - 1, -face_coeff_(i - 1));
      diag += face_coeff_(i - 1);
    }
    if (i < m) {
      trip.emplace_back(i, i + 1, -face_coeff_(i));
      diag += face_coeff_(i);
    }
    trip.emplace_back(i, i, diag);
    trip.emplace_back(i, m + 1, mass_(i));
    trip.emplace_back(m + 1, i, mass_(i));
  }
  bordered_.resize(size, size);
  bordered_.setFromTriplets(trip.begin(), trip.end());
  solver_.compute(bordered_);
  if (solver_.info() != Eigen::Success)
    throw std::runtime_error("NeumannLaplacian: bordered factorization failed");
}

Eigen::ArrayXd NeumannLaplacian::stiffness_apply(const Eigen::ArrayXd& u) const {
  const int m = grid_->intervals();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(m + 1);
  const Eigen::ArrayXd flux = face_coeff_ * (u.tail(m) - u.head(m));
  out.head(m) -= flux;
  out.tail(m) += flux;
  return out;
}

double NeumannLaplacian::stiffness_form(const Eigen::ArrayXd& u) const {
  const int m = grid_->intervals();
  const Eigen::ArrayXd d = u.tail(m) - u.head(m);
  return (face_coeff_ * d.square()).sum();
}

RadialField NeumannLaplacian::apply(const RadialField& u) const {
  if (!same_grid(u, RadialField{grid_, u.values}))
    throw std::invalid_argument("apply_laplacian: grid mismatch");
  if (u.values.size() != grid_->nodes.size())
    throw std::invalid_argument("apply_laplacian: size mismatch");
  return make_field(grid_, stiffness_apply(u.values) / mass_);
}

RadialField NeumannLaplacian::inverse(const RadialField& h, double compat_tol) const {
  if (h.values.size() != grid_->nodes.size())
    throw std::invalid_argument("inverse_neumann: size mismatch");
  require_finite(h, "inverse_neumann");
  const double total = (mass_ * h.values).sum();
  const double l1 = (mass_ * h.values.abs()).sum();
  if (std::abs(total) > compat_tol * l1 && l1 > 0.0)
    throw std::invalid_argument("inverse_neumann: zero-average compatibility violated");

  const int m = grid_->intervals();
  Eigen::VectorXd rhs(m + 2);
  rhs.head(m + 1) = (mass_ * h.values).matrix();
  rhs(m + 1) = 0.0;
  Eigen::VectorXd sol = solver_.solve(rhs);
  if (solver_.info() != Eigen::Success)
    throw std::runtime_error("inverse_neumann: bordered solve failed");
  return make_field(grid_, sol.head(m + 1).array());
}

RadialField NeumannLaplacian::shifted_inverse(const RadialField& h, double p,
                                              double compat_tol) const {
  if (!(p > 0.0)) throw std::invalid_argument("shifted_inverse: p must be > 0");
  RadialField w = inverse(h, compat_tol);
  return recenter(w, p);
}

double NeumannLaplacian::quadratic_form(const RadialField& f) const {
  Eigen::ArrayXd proj = f.values - (mass_ * f.values).sum() / mass_.sum();
  RadialField kf = inverse(make_field(grid_, std::move(proj)), 1e-3);
  return (mass_ * f.values * kf.values).sum();
}

RadialField apply_laplacian(const NeumannLaplacian& op, const RadialField& u) {
  return op.apply(u);
}
RadialField inverse_neumann(const NeumannLaplacian& op, const RadialField& h,
                            double compat_tol) {
  return op.inverse(h, compat_tol);
}
RadialField shifted_inverse(const NeumannLaplacian& op, const RadialField& h,
                            double p, double compat_tol) {
  return op.shifted_inverse(h, p, compat_tol);
}

}  // namespace lens
