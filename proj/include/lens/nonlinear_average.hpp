#pragma once

#include "lens/grid.hpp"

namespace lens {

/// Outcome of solving ∫ |w+c|^{p-1}(w+c) = 0 for the shift c.
struct RecenterResult {
  double shift = 0.0;
  double residual = 0.0;  // value of ∫ |w+c|^{p-1}(w+c) at the returned shift
  int iterations = 0;
};

/// The recentering map c_p: the unique constant c in [-max w, -min w] with
/// ∫ |w+c|^{p-1}(w+c) = 0. Bisection (derivative-free) with a secant polish
/// for p >= 1; for p < 1 the integrand is continuous but not C^1 at zeros,
/// so only bisection is used. Also probe-checks the minimizing property
/// ||w+c||_{p+1} <= ||w+c±δ||_{p+1}.
RecenterResult cp(const RadialField& w, double p, double tol = 1e-12);

/// w + cp(w).shift
RadialField recenter(const RadialField& w, double p, double tol = 1e-12);

/// Volume of {u > eps}, {u < -eps}, {|u| <= eps} and the measure-balance
/// predicate | |{u>0}| - |{u<0}| | <= |{u=0}|.
struct SignBalance {
  double positive = 0.0;
  double negative = 0.0;
  double zero = 0.0;
  bool balanced = false;
};

SignBalance sign_balance(const RadialField& u, double zero_band);

}  // namespace lens
