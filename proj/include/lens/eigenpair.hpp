#pragma once

#include <vector>

#include "lens/operators.hpp"

namespace lens {

/// First nonzero radial Neumann eigenpair. psi has exact zero average and
/// unit L^2 norm in the grid quadrature, with the sign convention
/// psi(a) > 0. mu is the Rayleigh quotient ∫|grad psi|^2 / ∫psi^2.
struct EigenPair {
  double mu = 0.0;
  RadialField psi;
  double residual = 0.0;  // || -Δpsi - mu psi ||_2
  int iterations = 0;
};

/// Inverse iteration with the factorized zero-average inverse K; constants
/// are deflated by the mean projection built into K. tol is the relative
/// operator residual used as the stopping criterion.
EigenPair radial_eigenpair(const NeumannLaplacian& op, double tol = 1e-11,
                           int max_iterations = 100000);

struct TuneSample {
  double outer_radius = 0.0;
  double mu = 0.0;
};

struct TuneResult {
  double outer_radius = 0.0;
  double mu = 0.0;
  std::vector<TuneSample> trace;  // every (b, mu) evaluated, in call order
};

/// Finds the outer radius b with mu_{1,rad}(a, b) = target within tol.
/// Secant/bisection on b; the empirical decrease of mu in b is checked on
/// the recorded trace rather than assumed.
TuneResult tune_annulus(int dimension, double inner_radius, double target_mu,
                        double tol, int intervals);

/// kappa = exp(-1/2 ∫ psi^2 ln psi^2), with t ln t extended by 0 at t = 0.
/// Requires ||psi||_2 = 1 within 1e-8.
double log_normalization_constant(const RadialField& psi);

}  // namespace lens
