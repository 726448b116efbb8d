#include "lens/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lens {

double RadialDomain::surface_coefficient() const {
  if (dimension == 1) return sigma0;
  // sigma_{N-1} = 2 pi^{N/2} / Gamma(N/2)
  const double n = static_cast<double>(dimension);
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double RadialDomain::unit_ball_volume(int dimension) {
  const double n = static_cast<double>(dimension);
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double RadialDomain::measure() const {
  const double n = static_cast<double>(dimension);
  return surface_coefficient() / n *
         (std::pow(outer_radius, n) - std::pow(inner_radius, n));
}

double RadialDomain::critical_exponent() const {
  if (dimension <= 2) return std::numeric_limits<double>::infinity();
  return static_cast<double>(dimension + 2) / static_cast<double>(dimension - 2);
}

GridPtr build_grid(const RadialDomain& domain, int intervals) {
  if (domain.dimension < 1) throw std::invalid_argument("build_grid: dimension must be >= 1");
  if (!(domain.inner_radius >= 0.0) || !(domain.inner_radius < domain.outer_radius))
    throw std::invalid_argument("build_grid: need 0 <= inner_radius < outer_radius");
  if (intervals < 16) throw std::invalid_argument("build_grid: need at least 16 intervals");
  if (domain.dimension == 1 && domain.sigma0 != 1.0 && domain.sigma0 != 2.0)
    throw std::invalid_argument("build_grid: sigma0 must be 1 or 2");

  auto grid = std::make_shared<RadialGrid>();
  grid->domain = domain;
  const int m = intervals;
  const double a = domain.inner_radius;
  const double b = domain.outer_radius;
  const double h = (b - a) / m;
  grid->spacing = h;
  grid->nodes = Eigen::ArrayXd::LinSpaced(m + 1, a, b);
  grid->nodes(m) = b;  // guard against LinSpaced roundoff at the top end

  const double n = static_cast<double>(domain.dimension);
  const double sigma = domain.surface_coefficient();
  grid->volume_weights.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double lo = std::max(a, grid->nodes(i) - 0.5 * h);
    const double hi = std::min(b, grid->nodes(i) + 0.5 * h);
    grid->volume_weights(i) = sigma / n * (std::pow(hi, n) - std::pow(lo, n));
  }
  grid->weights.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double r = grid->nodes(i);
    const double rad = (domain.dimension == 1) ? 1.0 : std::pow(r, n - 1.0);
    grid->weights(i) = (rad > 0.0) ? grid->volume_weights(i) / (sigma * rad) : 0.5 * h;
  }
  return grid;
}

RadialField make_field(GridPtr grid, Eigen::ArrayXd values) {
  if (!grid) throw std::invalid_argument("make_field: null grid");
  if (values.size() != grid->nodes.size())
    throw std::invalid_argument("make_field: value count does not match grid");
  return RadialField{std::move(grid), std::move(values)};
}

RadialField constant_field(const GridPtr& grid, double value) {
  return make_field(grid, Eigen::ArrayXd::Constant(grid->size(), value));
}

bool same_grid(const RadialField& a, const RadialField& b) {
  return a.grid == b.grid ||
         (a.grid && b.grid && a.grid->nodes.size() == b.grid->nodes.size() &&
          (a.grid->nodes == b.grid->nodes).all() &&
          a.grid->domain.dimension == b.grid->domain.dimension);
}

void require_finite(const RadialField& f, const char* what) {
  if (!f.values.isFinite().all())
    throw std::invalid_argument(std::string(what) + ": non-finite values");
}

double integrate(const RadialGrid& grid, const Eigen::ArrayXd& values) {
  if (values.size() != grid.nodes.size())
    throw std::invalid_argument("integrate: value count does not match grid");
  return (grid.volume_weights * values).sum();
}

double integrate(const RadialField& f) { return integrate(*f.grid, f.values); }

double lq_norm(const RadialField& f, double q) {
  if (std::isinf(q)) return f.values.abs().maxCoeff();
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  return std::pow((f.grid->volume_weights * f.values.abs().pow(q)).sum(), 1.0 / q);
}

double sup_norm(const RadialField& f) { return f.values.abs().maxCoeff(); }

double signed_power(double x, double p) {
  if (x == 0.0) return 0.0;
  return x > 0.0 ? std::pow(x, p) : -std::pow(-x, p);
}

Eigen::ArrayXd signed_power(const Eigen::ArrayXd& x, double p) {
  return x.sign() * x.abs().pow(p);
}

Eigen::ArrayXd radial_derivative(const RadialGrid& grid, const Eigen::ArrayXd& values) {
  if (values.size() != grid.nodes.size())
    throw std::invalid_argument("radial_derivative: value count does not match grid");
  const int m = grid.intervals();
  const double h = grid.spacing;
  Eigen::ArrayXd d(m + 1);
  d.segment(1, m - 1) = (values.tail(m - 1) - values.head(m - 1)) / (2.0 * h);
  d(0) = (-3.0 * values(0) + 4.0 * values(1) - values(2)) / (2.0 * h);
  d(m) = (3.0 * values(m) - 4.0 * values(m - 1) + values(m - 2)) / (2.0 * h);
  return d;
}

double dirichlet_energy(const RadialField& u) {
  const Eigen::ArrayXd d = radial_derivative(*u.grid, u.values);
  return (u.grid->volume_weights * d.square()).sum();
}

}  // namespace lens
