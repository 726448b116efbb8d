#pragma once

#include "lens/records.hpp"

namespace lens {

struct OdeOptions {
  int steps = 2000;
  double coefficient = 1.0;    // multiplies the nonlinearity
  double blowup_limit = 1e10;  // |u| or |u'| beyond this flags blow-up
};

/// One RK4 trajectory of -(r^{N-1}u')' = r^{N-1} coeff |u|^{p-1}u with
/// u(a) = s, u'(a) = 0. Ball starts use the series expansion at the origin;
/// for p = 0 the sign nonlinearity is handled by event location at the
/// crossings (the step is bisected to land on the zero).
struct ShootingTrajectory {
  double initial_value = 0.0;
  Eigen::ArrayXd radii;
  Eigen::ArrayXd values;
  Eigen::ArrayXd slopes;
  double terminal_slope = kNaN;  // m(s) = u'(b)
  int crossings = 0;
  double first_zero = kNaN;
  bool blew_up = false;
};

ShootingTrajectory integrate_radial(double p, double initial_value,
                                    const RadialDomain& domain,
                                    const OdeOptions& options = {});

struct ShootConfig {
  OdeOptions ode;
  double bracket_lo = 1e-3;   // |s| scan range, both signs
  double bracket_hi = 1e3;
  int scan_points = 120;      // geometric samples per sign
  double miss_tol = 1e-8;     // accept when |m(s)| <= miss_tol * max|u'|
  double bracket_hint = 0.0;  // if > 0, focus the scan around this |s|
};

/// Scans the miss function m(s) = u'(b) over a geometric bracket of both
/// signs, bisects sign changes restricted to single-crossing trajectories,
/// and returns the root of least energy. All roots found are recorded in
/// the branches list; multi-crossing branches are logged but never returned.
SolutionRecord shoot(double p, const RadialDomain& domain,
                     const ShootConfig& config = {});

}  // namespace lens
