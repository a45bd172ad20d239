#pragma once

#include <cstdint>

namespace hcm {

/// Numerical tolerances shared by all decision procedures.
struct ToleranceConfig {
  double eq_tol = 1e-8;    // equality of algebra elements, scaled by magnitudes
  double psd_tol = 1e-9;   // eigenvalue floor for positivity decisions
  double opt_tol = 1e-7;   // optimizer stationarity / decision slack
  double sing_tol = 1e-10; // relative invertibility cutoff

  bool valid() const {
    return eq_tol > 0 && psd_tol > 0 && opt_tol > 0 && sing_tol > 0;
  }
};

/// Search budgets for the minimization-based deciders. All searches are
/// seeded and deterministic; shrinking these below the defaults trades
/// reliability for speed (a missed global minimum shows up as a false
/// "holds" and is caught by the cross-implementation suites).
struct SearchConfig {
  int bj_grid = 33;              // coarse lambda grid per axis
  int n_theta = 720;             // numerical-range sweep directions
  int multistart = 10;           // starts for the non-convex deciders
  int line_scan = 25;            // points on the directed line scans
  int nm_eval_factor = 260;      // Nelder-Mead budget = factor * (dim + 1)
  int witness_budget = 64;       // strong-witness sampling budget
  int validation_samples = 200;  // factorization validation tuples
  int ball_samples = 24;         // h-constancy probe samples
  double box_radius = 100.0;     // search box for the quantified-over-a infima
                                 // (in jointly normalized units): beyond it the
                                 // objectives only chase the tolerance-level
                                 // residue of <x,y>, not its value
};

struct Config {
  ToleranceConfig tol;
  SearchConfig search;
};

} // namespace hcm
