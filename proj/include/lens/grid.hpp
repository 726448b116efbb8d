#pragma once

#include <Eigen/Dense>
#include <memory>

namespace lens {

/// Geometry of a radial domain: a ball (inner_radius = 0) or an annulus
/// (inner_radius > 0) in R^N. For N = 1 the measure convention is
/// selectable: sigma0 = 1 treats (a,b) as a plain interval, sigma0 = 2
/// counts both components of the symmetric segment.
struct RadialDomain {
  double inner_radius = 0.0;
  double outer_radius = 1.0;
  int dimension = 1;
  double sigma0 = 1.0;  // only consulted when dimension == 1

  bool is_ball() const { return inner_radius == 0.0; }

  /// Surface measure of the unit (N-1)-sphere, with the 1-D override.
  double surface_coefficient() const;

  /// |Omega| = omega_N (b^N - a^N), with the surface convention above.
  double measure() const;

  /// p_c = 2* - 1 = (N+2)/(N-2); +inf for N <= 2.
  double critical_exponent() const;

  static double unit_ball_volume(int dimension);
};

/// Uniform radial grid with dual-cell volume weights: node i owns the
/// cell (r_i - h/2, r_i + h/2) clipped to (a, b), and its weight is the
/// exact N-dimensional volume of that cell divided by sigma r_i^{N-1}.
/// This makes sum(volume_weights) == |Omega| exact and keeps quadrature,
/// stiffness form and inverse operator mutually consistent.
struct RadialGrid {
  RadialDomain domain;
  Eigen::ArrayXd nodes;           // r_0 .. r_M, strictly increasing
  Eigen::ArrayXd weights;         // line weights w_i (volume_weights / (sigma r^{N-1}))
  Eigen::ArrayXd volume_weights;  // exact dual-cell volumes, sum == |Omega|
  double spacing = 0.0;

  int intervals() const { return static_cast<int>(nodes.size()) - 1; }
  int size() const { return static_cast<int>(nodes.size()); }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Builds a uniform grid with M intervals (M+1 nodes). Requires M >= 16
/// and a valid domain (0 <= a < b, N >= 1).
GridPtr build_grid(const RadialDomain& domain, int intervals);

/// Values of a radial function sampled on grid nodes.
struct RadialField {
  GridPtr grid;
  Eigen::ArrayXd values;

  int size() const { return static_cast<int>(values.size()); }
};

RadialField make_field(GridPtr grid, Eigen::ArrayXd values);
RadialField constant_field(const GridPtr& grid, double value);
bool same_grid(const RadialField& a, const RadialField& b);
void require_finite(const RadialField& f, const char* what);

double integrate(const RadialGrid& grid, const Eigen::ArrayXd& values);
double integrate(const RadialField& f);

/// (int |f|^q)^{1/q} for finite q >= 1; max|f| for q = inf.
double lq_norm(const RadialField& f, double q);
double sup_norm(const RadialField& f);

/// sign(x) |x|^p, continuous at 0 for p > 0.
double signed_power(double x, double p);
Eigen::ArrayXd signed_power(const Eigen::ArrayXd& x, double p);

/// Centered differences in the interior, second-order one-sided at the
/// two ends.
Eigen::ArrayXd radial_derivative(const RadialGrid& grid, const Eigen::ArrayXd& values);

/// int |grad u|^2 using radial_derivative and the grid quadrature.
double dirichlet_energy(const RadialField& u);

}  // namespace lens
