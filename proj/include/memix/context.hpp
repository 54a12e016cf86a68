#ifndef MEMIX_CONTEXT_HPP
#define MEMIX_CONTEXT_HPP

namespace memix {

// Numeric policy knobs shared across the library.  Every tolerance used by a
// validation or iteration lives here so callers can tighten or relax them in
// one place; the defaults are what the test-suite runs with.
struct NumericContext {
  // Distribution validity checks.
  double kappa_ceiling = -1e-12;   // spectral abscissa of T must lie below this
  double normalization_tol = 1e-9; // |alpha (-T)^{-1} t - 1| allowed
  double density_floor = -1e-9;    // grid nonnegativity slack for densities
  int density_grid_points = 512;   // points of the nonnegativity grid
  double density_span = 40.0;      // grid covers [0, density_span/|kappa|]
  double weight_sum_tol = 1e-12;   // |sum of mixture weights - 1| allowed
  double survival_floor = 1e-300;  // residual construction underflow cutoff

  // Root finding (quantiles, conditional quantiles).  The tight default
  // keeps independently root-found quantities (e.g. a scaled model against
  // its unscaled reduction) consistent well past 1e-9.
  double quantile_tol = 1e-12;     // |CDF(x) - theta| at convergence
  int quantile_max_iter = 200;

  // Holomorphic matrix functions.
  double eigen_cond_limit = 1e8;   // eigenbasis condition cap for the fast path
  double contour_tol = 1e-10;      // relative Frobenius between node doublings
  int contour_min_nodes = 64;
  // Wide-spectrum defective matrices (tail allocations of gamma-scaled
  // aggregates) converge around 8k nodes; doubling exits early otherwise.
  int contour_max_nodes = 32768;

  // Set false to skip density-grid validation on construction (the algebraic
  // invariants are always checked).
  bool validate_density = true;
};

inline const NumericContext& default_context() {
  static const NumericContext ctx{};
  return ctx;
}

}  // namespace memix

#endif  // MEMIX_CONTEXT_HPP
