#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "lens/grid.hpp"

namespace lens {

/// Discrete radial Neumann Laplacian -u'' - (N-1)/r u' in conservative
/// (zero-flux) form, together with its zero-average inverse K. The inverse
/// is a bordered Lagrange-multiplier solve
///
///     [ A  m ] [u]   [m .* h]
///     [ m' 0 ] [l] = [  0   ]
///
/// with A the symmetric flux stiffness matrix and m the dual-cell volume
/// weights, so that K is exactly self-adjoint in the grid inner product,
/// the solution has exact zero average, and  -Δ(Kh) = h - (∫h)/|Ω|  holds
/// to solver roundoff. At a ball origin the row reduces to the regularity
/// closure 2N(u(0) - u(h))/h^2.
class NeumannLaplacian {
 public:
  explicit NeumannLaplacian(GridPtr grid);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  /// -Δu with the Neumann closure; exact on constants.
  RadialField apply(const RadialField& u) const;

  /// K h: requires |∫h| <= compat_tol * ||h||_1.
  RadialField inverse(const RadialField& h, double compat_tol = 1e-6) const;

  /// K_p h = K h + c_p(K h); the result w satisfies ∫|w|^{p-1} w = 0.
  RadialField shifted_inverse(const RadialField& h, double p,
                              double compat_tol = 1e-6) const;

  /// ∫ f K f (f is mean-projected internally).
  double quadratic_form(const RadialField& f) const;

  /// Symmetric stiffness matrix action (A u); u' A u is a quadrature of
  /// ∫ |grad u|^2 over midpoint faces.
  Eigen::ArrayXd stiffness_apply(const Eigen::ArrayXd& u) const;
  double stiffness_form(const Eigen::ArrayXd& u) const;

  const Eigen::ArrayXd& mass() const { return mass_; }

 private:
  GridPtr grid_;
  Eigen::ArrayXd face_coeff_;  // sigma r_{i+1/2}^{N-1} / h, one per interval
  Eigen::ArrayXd mass_;        // dual-cell volumes (ball origin included)
  Eigen::SparseMatrix<double> bordered_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_;
};

RadialField apply_laplacian(const NeumannLaplacian& op, const RadialField& u);
RadialField inverse_neumann(const NeumannLaplacian& op, const RadialField& h,
                            double compat_tol = 1e-6);
RadialField shifted_inverse(const NeumannLaplacian& op, const RadialField& h,
                            double p, double compat_tol = 1e-6);

}  // namespace lens
