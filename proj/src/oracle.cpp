#include "spheroidal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spheroidal {

FdGrid::FdGrid(int points) : points_(points), h_(std::numbers::pi / points) {
  if (points < 64) throw std::invalid_argument("FdGrid needs at least 64 points");
}

std::vector<double> FdGrid::thetas() const {
  std::vector<double> t(static_cast<std::size_t>(points_));
  for (int i = 0; i < points_; ++i) t[static_cast<std::size_t>(i)] = theta(i);
  return t;
}

Tridiagonal fd_operator(const ModeParams& params, double beta, const FdGrid& grid) {
  const int n = grid.points();
  const double h = grid.h();
  const double h2 = h * h;
  const double spin = params.s();
  const int m = params.m();

  std::vector<double> face(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) face[static_cast<std::size_t>(i)] = std::sin(i * h);
  face.front() = 0.0;
  face.back() = 0.0;

  std::vector<double> weight(static_cast<std::size_t>(n));
  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(n));
  t.off.resize(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    const double th = grid.theta(i);
    const double s = std::sin(th);
    const double c = std::cos(th);
    const double ch = std::cos(0.5 * th);
    const double mc = (m - 1) + 2.0 * ch * ch;  // m + cos, accurate near pi
    const double q = -(spin + beta * beta * c * c - 2.0 * spin * beta * c - mc * mc / (s * s));
    const auto iu = static_cast<std::size_t>(i);
    weight[iu] = s;
    t.diag[iu] = (face[iu] + face[iu + 1]) / (h2 * s) + q;
  }
  for (int i = 0; i + 1 < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    t.off[iu] = -face[iu + 1] / (h2 * std::sqrt(weight[iu] * weight[iu + 1]));
  }
  return t;
}

int sturm_count(const Tridiagonal& t, double x) {
  constexpr double pivmin = std::numeric_limits<double>::min() * 1e4;
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

double lowest_eigenvalue(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::min(hi, t.diag[i]);
  }
  constexpr double tol = 1e-13;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, std::abs(mid))) return mid;
    if (sturm_count(t, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw NumericError("Sturm bisection did not converge in 200 iterations");
}

double fd_ground_eigenvalue(const ModeParams& params, double beta, const FdGrid& grid) {
  return lowest_eigenvalue(fd_operator(params, beta, grid));
}

std::vector<double> fd_ground_eigenvector(const ModeParams& params, double beta, const FdGrid& grid) {
  const Tridiagonal t = fd_operator(params, beta, grid);
  const double lambda = lowest_eigenvalue(t);
  // Shifting just below the eigenvalue keeps A - shift positive definite, so
  // the unpivoted LDL^T factorization below is stable.
  const double shift = lambda - 1e-6 * std::max(1.0, std::abs(lambda));
  const std::size_t n = t.diag.size();

  std::vector<double> d(n);
  std::vector<double> l(n, 0.0);
  d[0] = t.diag[0] - shift;
  for (std::size_t i = 1; i < n; ++i) {
    l[i] = t.off[i - 1] / d[i - 1];
    d[i] = t.diag[i] - shift - l[i] * t.off[i - 1];
    if (!(d[i] > 0.0)) throw NumericError("shifted operator lost positive definiteness");
  }

  std::vector<double> v(n, 1.0);
  for (int iter = 0; iter < 4; ++iter) {
    for (std::size_t i = 1; i < n; ++i) v[i] -= l[i] * v[i - 1];
    for (std::size_t i = 0; i < n; ++i) v[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) v[i] -= l[i + 1] * v[i + 1];
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }

  double sum = 0.0;
  double peak = 0.0;
  for (double x : v) {
    sum += x;
    peak = std::max(peak, std::abs(x));
  }
  if (sum < 0.0) {
    for (double& x : v) x = -x;
  }
  for (double x : v) {
    if (x < -1e-10 * peak) throw NumericError("ground eigenvector has a node; lowest eigenvalue is not nodeless");
  }
  return v;
}

RichardsonResult richardson_ground_eigenvalue(const ModeParams& params, double beta, const std::vector<int>& grid_sizes) {
  if (grid_sizes.size() != 3) throw std::invalid_argument("Richardson extrapolation uses exactly three grids");
  for (std::size_t i = 0; i + 1 < grid_sizes.size(); ++i) {
    if (grid_sizes[i + 1] != 2 * grid_sizes[i]) throw std::invalid_argument("Richardson grids must double in size");
  }
  RichardsonResult r;
  r.grid_sizes = grid_sizes;
  for (int points : grid_sizes) r.values.push_back(fd_ground_eigenvalue(params, beta, FdGrid(points)));
  r.extrapolated = (4.0 * r.values[2] - r.values[1]) / 3.0;
  const double d01 = r.values[0] - r.values[1];
  const double d12 = r.values[1] - r.values[2];
  r.observed_order = (d12 != 0.0 && d01 / d12 > 0.0) ? std::log2(d01 / d12) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

namespace {

template <class F>
double simpson(const F& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole, double eps,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double quadrature_an(const SeriesState& state, int n, double theta) {
  if (n < 3) throw std::invalid_argument("quadrature_an supports n >= 3 only");
  if (n > state.current_order()) throw std::invalid_argument("quadrature_an: order not computed");
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw std::domain_error("quadrature_an: theta outside [0, pi]");
  if (theta == 0.0) return 0.0;

  const SeriesEvaluator eval(state);
  const int m = state.params().m();
  auto integrand = [&](double t) {
    const double sh = std::sin(0.5 * t);
    const double omc = 2.0 * sh * sh;
    return eval.source_term(n, t) * omc * omc * std::pow(std::sin(t), 2 * m - 1);
  };

  constexpr int coarse_panels = 64;
  double coarse = 0.0;
  const double step = theta / coarse_panels;
  for (int i = 0; i < coarse_panels; ++i) coarse += simpson(integrand, i * step, (i + 1) * step);
  const double eps = 1e-12 * std::max(std::abs(coarse), std::numeric_limits<double>::min());

  double total = 0.0;
  for (int i = 0; i < coarse_panels; ++i) {
    const double a = i * step;
    const double b = (i + 1) * step;
    const double fa = integrand(a);
    const double fm = integrand(0.5 * (a + b));
    const double fb = integrand(b);
    total += adaptive_simpson(integrand, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps / coarse_panels, 40);
  }
  return total;
}

double residual_slope(const SeriesEvaluator& eval, double beta_lo, double beta_hi, int samples) {
  const double theta = std::numbers::pi / 3.0;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = 0; i < samples; ++i) {
    const double beta = beta_lo * std::pow(beta_hi / beta_lo, static_cast<double>(i) / (samples - 1));
    const EvalPoint point{theta, beta};
    const double r = std::abs(eval.riccati_residual(point));
    if (r <= eval.residual_noise_floor(point)) continue;
    xs.push_back(std::log(beta));
    ys.push_back(std::log(r));
  }
  if (xs.size() < 3) throw NumericError("residual is below rounding at all but " + std::to_string(xs.size()) + " sample(s); no slope can be fitted");
  const double k = static_cast<double>(xs.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

VerifyTolerances apply_overrides(VerifyTolerances base, const std::map<std::string, double>& overrides) {
  for (const auto& [key, value] : overrides) {
    if (key == "eigenvalue") {
      base.eigenvalue = value;
    } else if (key == "eigenvalue_single_grid") {
      base.eigenvalue_single_grid = value;
    } else if (key == "wavefunction") {
      base.wavefunction = value;
    } else if (key == "slope_lo") {
      base.slope_lo = value;
    } else if (key == "slope_hi") {
      base.slope_hi = value;
    } else if (key == "judged_beta_max") {
      base.judged_beta_max = value;
    } else {
      throw std::invalid_argument("unknown tolerance key '" + key + "'");
    }
  }
  return base;
}

namespace {

void finish(OracleReport& r, bool judged) {
  r.abs_gap = std::abs(r.series_value - r.numeric_value);
  r.rel_gap = r.abs_gap / std::max(1.0, std::abs(r.numeric_value));
  r.judged = judged;
  r.passed = !judged || r.abs_gap <= r.tolerance;
}

}  // namespace

std::vector<OracleReport> verify_all(const ModeParams& params, const std::vector<double>& betas,
                                     const VerifyOptions& options) {
  SeriesState state = compute_series(params);
  if (options.energy_override) state = state.with_energy_override(options.energy_override->first, options.energy_override->second);
  const SeriesEvaluator eval(state);
  const VerifyTolerances& tol = options.tol;

  std::vector<OracleReport> reports;
  auto base_report = [&](const std::string& check, double beta) {
    OracleReport r;
    r.check = check;
    r.m = params.m();
    r.order = params.order();
    r.beta = beta;
    return r;
  };
  auto capture = [&](OracleReport r, auto&& body) {
    try {
      body(r);
    } catch (const std::exception& e) {
      r.error = e.what();
      r.passed = false;
    }
    reports.push_back(std::move(r));
  };

  for (double beta : betas) {
    const bool judged = std::abs(beta) < tol.judged_beta_max;

    capture(base_report("eigenvalue", beta), [&](OracleReport& r) {
      const RichardsonResult rich = richardson_ground_eigenvalue(params, beta, options.grid_sizes);
      r.series_value = eval.energy(beta);
      r.numeric_value = rich.extrapolated;
      r.richardson_estimate = rich.extrapolated;
      r.grid_sizes = rich.grid_sizes;
      r.tolerance = tol.eigenvalue;
      finish(r, judged);
    });

    if (beta == 0.0) {
      capture(base_report("eigenvalue_single_grid", beta), [&](OracleReport& r) {
        const int finest = options.grid_sizes.back();
        r.series_value = eval.energy(beta);
        r.numeric_value = fd_ground_eigenvalue(params, beta, FdGrid(finest));
        r.grid_sizes = {finest};
        r.tolerance = tol.eigenvalue_single_grid;
        finish(r, judged);
      });
    }

    capture(base_report("wavefunction", beta), [&](OracleReport& r) {
      const FdGrid grid(options.grid_sizes.back());
      const std::vector<double> vec = fd_ground_eigenvector(params, beta, grid);
      const std::vector<double> thetas = grid.thetas();
      const auto samples = eval.ground_wavefunction(beta, thetas);
      const double scale = 1.0 / std::sqrt(grid.h());
      double gap = 0.0;
      double at_series = 0.0;
      double at_numeric = 0.0;
      for (std::size_t i = 0; i < vec.size(); ++i) {
        const double numeric = vec[i] * scale;
        const double d = std::abs(samples[i].psi - numeric);
        if (d >= gap) {
          gap = d;
          at_series = samples[i].psi;
          at_numeric = numeric;
        }
      }
      // Values at the location of the largest pointwise difference.
      r.series_value = at_series;
      r.numeric_value = at_numeric;
      r.grid_sizes = {grid.points()};
      r.tolerance = tol.wavefunction;
      finish(r, judged);
    });
  }

  if (params.order() >= 1) {
    OracleReport r = base_report("residual_slope", 0.0);
    const double expected = params.order() + 1.0;
    r.numeric_value = expected;
    r.tolerance = std::max(tol.slope_hi - 1.0, 1.0 - tol.slope_lo);
    try {
      r.series_value = residual_slope(eval);
      r.abs_gap = std::abs(r.series_value - expected);
      r.rel_gap = r.abs_gap / expected;
      r.passed = r.series_value >= params.order() + tol.slope_lo && r.series_value <= params.order() + tol.slope_hi;
    } catch (const NumericError& e) {
      // A residual lost in rounding cannot be judged either way.
      r.judged = false;
      r.passed = true;
      r.note = e.what();
    } catch (const std::exception& e) {
      r.error = e.what();
      r.passed = false;
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace spheroidal
