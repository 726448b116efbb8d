#pragma once

#include "lens/operators.hpp"
#include "lens/records.hpp"

namespace lens {

struct VariationalConfig {
  int max_iterations = 50000;
  double el_tol = 1e-3;          // relative Euler-Lagrange residual accepted
  double objective_tol = 1e-14;  // relative objective stagnation
  double cp_tol = 1e-13;
  bool multi_start = true;       // try +psi and -psi seeds
};

struct VariationalResult {
  double p = kNaN;
  double level = kNaN;           // Lambda_p (minimize) or D_p (maximize)
  RadialField extremizer;
  double el_residual = kNaN;     // relative stationarity residual
  int iterations = 0;
  bool converged = false;
  std::vector<double> seed_levels;
};

/// I_p(u) = 1/2 ∫|grad u|^2 - 1/(p+1) ∫|u|^{p+1}
double energy_I(const RadialField& u, double p);

/// I_0(u) = 1/2 ∫|grad u|^2 - ∫|u|
double energy_I0(const RadialField& u);

/// phi_p(f) = p/(p+1) ∫|f|^{(p+1)/p} - 1/2 ∫ f K f; requires ∫f ~ 0.
double dual_energy_phi(const NeumannLaplacian& op, const RadialField& f, double p,
                       double compat_tol = 1e-6);

/// Projected-gradient descent for
///   Lambda_p = min { ∫|grad u|^2 : ||u||_{p+1} = 1, ∫|u|^{p-1}u = 0 }.
/// Each accepted step recenters (c_p) then renormalizes; descent is
/// monotone via backtracking on a Barzilai-Borwein step.
VariationalResult minimize_lambda(const NeumannLaplacian& op, double p,
                                  const VariationalConfig& config = {},
                                  const RadialField* warm_start = nullptr);

/// Projected ascent for
///   D_p = max { ∫ f K f : f in X_p, ||f||_{(p+1)/p} = 1 }.
/// Stationarity is checked through K_p f = D_p |f|^{1/p - 1} f.
VariationalResult maximize_D(const NeumannLaplacian& op, double p,
                             const VariationalConfig& config = {},
                             const RadialField* warm_start = nullptr);

/// L_p = (p-1)/(2(p+1)) Lambda_p^{(p+1)/(p-1)}, p != 1 (negative for p < 1).
double level_L(double p, double lambda);

/// u_p = Lambda_p^{1/(p-1)} v_p
RadialField scale_to_solution(const RadialField& v, double lambda, double p);

/// Relative PDE residual ||-Δu - |u|^{p-1}u|| / || |u|^{p-1}u ||; for p < 1
/// the two cells adjacent to each sign change are excluded.
double pde_residual(const NeumannLaplacian& op, const RadialField& u, double p);

struct L0Config {
  int max_iterations = 20000;
  bool use_continuation = true;   // p = 0.1 -> 0.01 -> 0.001 path
  VariationalConfig variational;
};

struct L0Result {
  double level = kNaN;
  RadialField minimizer;
  bool converged = false;
  int iterations = 0;
  std::string method;  // "subgradient" or "continuation"
};

/// Least energy for the sign problem -Δu = sgn(u): subgradient descent on
/// I_0 with a measure-balance projection, cross-checked against a small-p
/// continuation; the lower of the two is returned.
L0Result minimize_L0(const NeumannLaplacian& op, const L0Config& config = {});

}  // namespace lens
