#pragma once

// Independent numerical checks of the series.
//
// The eigenvalue oracle discretizes the original angular operator
//   -(1/sin)(sin Theta')' + q(theta) Theta = E Theta,
//   q = -[s + beta^2 cos^2 - 2 s beta cos - (m + s cos)^2 / sin^2],
// with cell-centred finite volumes (faces at 0 and pi carry zero flux since
// sin vanishes there). Symmetrizing with sqrt(sin) at the cell centres turns
// the unknowns into samples of Psi = sqrt(sin) Theta and gives a symmetric
// tridiagonal matrix whose lowest eigenvalue is found by Sturm bisection.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spheroidal/evaluate.hpp"

namespace spheroidal {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform cell-centred grid on (0, pi): h = pi / points, theta_i = (i + 1/2) h.
class FdGrid {
 public:
  explicit FdGrid(int points);

  int points() const { return points_; }
  double h() const { return h_; }
  double theta(int i) const { return (i + 0.5) * h_; }
  std::vector<double> thetas() const;

 private:
  int points_;
  double h_;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size() - 1
};

Tridiagonal fd_operator(const ModeParams& params, double beta, const FdGrid& grid);

/// Number of eigenvalues strictly below x.
int sturm_count(const Tridiagonal& t, double x);

/// Smallest eigenvalue by bisection to a bracket of width 1e-13 (relative
/// for |E| > 1). Throws NumericError after 200 iterations.
double lowest_eigenvalue(const Tridiagonal& t);

double fd_ground_eigenvalue(const ModeParams& params, double beta, const FdGrid& grid);

/// Unit discrete-L2 ground eigenvector, positive, by inverse iteration.
/// Entries approximate Psi(theta_i) * sqrt(h). Throws NumericError if a sign
/// change is found.
std::vector<double> fd_ground_eigenvector(const ModeParams& params, double beta, const FdGrid& grid);

struct RichardsonResult {
  std::vector<int> grid_sizes;
  std::vector<double> values;
  double extrapolated = 0.0;
  double observed_order = 0.0;  // from the three-grid difference ratio
};

/// Eigenvalues on three grids with ratio 2; extrapolates the finest pair
/// assuming an h^2 error.
RichardsonResult richardson_ground_eigenvalue(const ModeParams& params, double beta,
                                              const std::vector<int>& grid_sizes = {1024, 2048, 4096});

/// int_0^theta f_n (1 - cos)^2 sin^{2m-1} by adaptive Simpson (tolerance 1e-12
/// relative to a coarse estimate). Throws std::invalid_argument for n < 3.
double quadrature_an(const SeriesState& state, int n, double theta);

/// Least-squares slope of log|r| against log(beta) at theta = pi/3, over
/// log-spaced beta in [beta_lo, beta_hi]. Samples at or below the residual's
/// rounding floor are dropped; throws NumericError if fewer than 3 remain.
double residual_slope(const SeriesEvaluator& eval, double beta_lo = 1e-3, double beta_hi = 1e-1, int samples = 9);

struct VerifyTolerances {
  double eigenvalue = 1e-6;
  double eigenvalue_single_grid = 5e-5;  // beta == 0 check on the finest grid alone
  double wavefunction = 1e-3;
  double slope_lo = 0.7;   // slope must be >= N + slope_lo
  double slope_hi = 1.7;   // and <= N + slope_hi
  double judged_beta_max = 1.0;  // |beta| >= this: report only
};

/// Applies KEY=VALUE overrides; throws std::invalid_argument on unknown keys.
VerifyTolerances apply_overrides(VerifyTolerances base, const std::map<std::string, double>& overrides);

struct OracleReport {
  std::string check;  // eigenvalue | eigenvalue_single_grid | wavefunction | residual_slope
  int m = 0;
  int order = 0;
  double beta = 0.0;
  double series_value = 0.0;
  double numeric_value = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  std::vector<int> grid_sizes;
  double richardson_estimate = 0.0;
  double tolerance = 0.0;
  bool judged = true;
  bool passed = false;
  std::string error;
  std::string note;
};

struct VerifyOptions {
  VerifyTolerances tol;
  std::vector<int> grid_sizes = {1024, 2048, 4096};
  /// Replaces E_n before any comparison; exercises the failure path.
  std::optional<std::pair<int, Rational>> energy_override;
};

/// Runs every oracle for each beta. Failures inside one check are captured in
/// its report and do not stop the batch.
std::vector<OracleReport> verify_all(const ModeParams& params, const std::vector<double>& betas,
                                     const VerifyOptions& options = {});

}  // namespace spheroidal
