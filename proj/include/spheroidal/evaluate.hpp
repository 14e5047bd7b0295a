#pragma once

// Double-precision evaluation of a computed series.
//
// Exact coefficients are converted to double once, when a SeriesEvaluator is
// built; all rounding happens at evaluation time.

#include <span>
#include <vector>

#include "spheroidal/recurrence.hpp"

namespace spheroidal {

/// theta in radians, beta = a*omega.
struct EvalPoint {
  double theta = 0.0;
  double beta = 0.0;
};

/// Normalized ground-state sample. psi is the Schroedinger-form amplitude,
/// theta_big = psi / sqrt(sin(theta)) the amplitude of the original angular
/// equation, norm_const the factor making the integral of psi^2 over (0, pi) one.
struct WavefunctionSample {
  double psi = 0.0;
  double theta_big = 0.0;
  double norm_const = 0.0;
};

/// V(theta, beta) of the Schroedinger form, s = 1. Throws std::domain_error
/// unless 0 < theta < pi.
double potential(const EvalPoint& point, const ModeParams& params);

/// Closed-form antiderivative of sin^{2k-1}: -cos/(2k) sum_j I(2k-1, j) sin^{2k-2-2j}.
double p_antiderivative(int k, double theta);

class SeriesEvaluator {
 public:
  explicit SeriesEvaluator(const SeriesState& state);

  const ModeParams& params() const { return params_; }
  int order() const { return static_cast<int>(a_.size()); }

  double w0(double theta) const;
  /// Single order W_n(theta), 1 <= n <= order().
  double w_order(int n, double theta) const;
  double w(const EvalPoint& point) const;
  double w_derivative(const EvalPoint& point) const;

  /// W0^2 - W0' - V0 + E_0, evaluated term by term. Analytically zero.
  double zeroth_order_residual(double theta) const;

  /// W^2 - W' - V + E0^{(N)}(beta). The zeroth-order identity is removed
  /// analytically, so every remaining term carries at least one power of
  /// beta, and the sum is accumulated in long double. Residuals of order
  /// beta^{N+1} then stay above rounding down to beta ~ 1e-3 for small N.
  double riccati_residual(const EvalPoint& point) const;
  /// Rough size of the rounding in riccati_residual at this point.
  double residual_noise_floor(const EvalPoint& point) const;

  /// sum_{n=0..upto} E_n beta^n. Throws std::out_of_range if upto > order().
  double energy(double beta, int upto) const;
  double energy(double beta) const { return energy(beta, order()); }

  /// (1 - cos) sin^{m-1/2} exp(-sum_n beta^n int W_n), unnormalized; valid on [0, pi].
  double unnormalized_psi(double beta, double theta) const;
  /// 1 / sqrt(int_0^pi psi^2) by composite Simpson on 4097 nodes over [1e-8, pi - 1e-8].
  double norm_const(double beta) const;
  WavefunctionSample ground_wavefunction(const EvalPoint& point) const;
  std::vector<WavefunctionSample> ground_wavefunction(double beta, std::span<const double> thetas) const;

  /// f_n = E_n + sum_{k=1}^{n-1} W_k W_{n-k} for n >= 3.
  double source_term(int n, double theta) const;
  /// A_n rebuilt from the R/T tables as R_n(theta) + cos(theta) T_n(theta).
  double an_closed_form(int n, double theta) const;

 private:
  struct Trig {
    double s;
    double c;
  };
  static Trig trig(double theta);
  double w_order_derivative(int n, double theta) const;

  ModeParams params_;
  double c_const_;
  double c_cos_;
  std::vector<std::vector<double>> a_;  // a_[n-1][k-1]
  std::vector<std::vector<double>> b_;
  std::vector<double> energy_;
  std::vector<std::vector<double>> p_i_;  // I(2k-1, j) for the P antiderivatives
  std::vector<std::vector<long double>> a_ld_;
  std::vector<std::vector<long double>> b_ld_;
  std::vector<long double> energy_ld_;
  std::vector<std::vector<double>> rt_r_;  // indexed by n, empty below 3
  std::vector<std::vector<double>> rt_t_;
};

double eval_w(const SeriesState& state, const EvalPoint& point);
double eval_w_derivative(const SeriesState& state, const EvalPoint& point);
double riccati_residual(const SeriesState& state, const EvalPoint& point);
double eval_energy(const SeriesState& state, double beta, int upto);
WavefunctionSample eval_ground_wavefunction(const SeriesState& state, const EvalPoint& point);

}  // namespace spheroidal
