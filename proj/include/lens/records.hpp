#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lens/grid.hpp"

namespace lens {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Levels and identity defects for one exponent.
struct LevelRecord {
  double p = kNaN;
  double level_L = kNaN;
  double lambda = kNaN;
  double D = kNaN;
  double duality_defect = kNaN;   // |lambda * D - 1|
  double relation_defect = kNaN;  // |I_p(u_p) - level_L| / |level_L|
};

/// One shooting branch seen during the bracket scan.
struct ShootBranch {
  double initial_value = kNaN;
  double miss = kNaN;  // terminal slope u'(b)
  int crossings = 0;
  double energy = kNaN;
  bool accepted = false;
};

/// One solved instance of the problem at a fixed p.
struct SolutionRecord {
  double p = kNaN;
  RadialField profile;
  double level_L = kNaN;
  double lambda = kNaN;
  double D = kNaN;
  double residual = kNaN;    // relative PDE residual
  double compat = kNaN;      // ∫|u|^{p-1}u normalized by ∫|u|^p
  double sup_norm = kNaN;
  int crossings = 0;
  bool monotone = false;
  bool converged = false;
  std::string method;        // variational | shooting | eigen | l0
  std::string note;
  std::vector<ShootBranch> branches;   // shooting diagnostics
  std::vector<double> seed_levels;     // variational multi-start levels
};

}  // namespace lens
