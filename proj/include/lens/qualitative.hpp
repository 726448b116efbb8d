#pragma once

#include "lens/operators.hpp"
#include "lens/shooting.hpp"

namespace lens {

struct MonotoneReport {
  bool monotone = false;
  double worst_violation = 0.0;  // largest step against the dominant direction
};

/// True iff consecutive differences have a single sign up to tol * max|u|.
MonotoneReport check_monotone(const RadialField& u, double tol = 1e-10);

/// Radial first integral of the critical equation,
/// P(r) = r^N/(2N) u'^2 + (N-2)/(2N) r^{N-1} u'u + (N-2)/(2N^2) r^N |u|^{2N/(N-2)};
/// constant in r for a radial solution at p = p_c.
struct PohozaevProfile {
  Eigen::ArrayXd values;
  double max_deviation = kNaN;   // max |P - P(a)|
  double first_zero = kNaN;
  double endpoint_lhs = kNaN;    // (N-2)/(2N^2) a^N |u(a)|^{2N/(N-2)}
  double endpoint_rhs = kNaN;    // r0^N/(2N) u'(r0)^2
};

PohozaevProfile pohozaev_profile(const RadialField& u);

/// Shooting-based evidence that no radial Neumann closure exists on a ball
/// at the scanned exponent. Never a proof; emits scan statistics only.
struct ScanSample {
  double s = kNaN;
  double miss = kNaN;
  int crossings = 0;
  bool blew_up = false;
  double pohozaev_value = kNaN;  // normalized (r0/b)^N (u'(r0)/max|u'|)^2
};

struct NonexistenceScan {
  double p = kNaN;
  std::vector<ScanSample> samples;
  double min_single_crossing_miss = kNaN;  // min |m(s)|/max|u'| over 1-crossing runs
  double min_pohozaev_value = kNaN;
  bool root_found = false;
  std::string verdict;
};

NonexistenceScan ball_nonexistence_scan(double p, const RadialDomain& domain,
                                        const ShootConfig& config = {});

/// Flip-&-rearrange transform: flip by the sign of the cumulative integral,
/// then decreasing rearrangement in the volume coordinate. Discretely the
/// field is a multiset of (value, cell volume) atoms; the transform permutes
/// atoms, so the value distribution (hence every L^q norm and the integral)
/// is preserved to roundoff. Node values of the output sample the sorted
/// layout at each node's own volume slot, which keeps already-arranged
/// fields exactly fixed.
struct RearrangementResult {
  RadialField input;
  RadialField flipped;
  RadialField output;
  double q_in = kNaN;        // ∫ f K f
  double q_out = kNaN;       // ∫ f* K f*
  double norm_defect = kNaN; // | ||f*||_q - ||f||_q | over the atom distribution
  double mean_defect = kNaN; // | ∫f* - ∫f | over the atom distribution
};

RearrangementResult flip_rearrange(const NeumannLaplacian& op, const RadialField& f,
                                   double q, double mean_tol = 1e-6);

}  // namespace lens
