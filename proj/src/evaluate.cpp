#include "spheroidal/evaluate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spheroidal {

namespace {

void require_interior(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw std::domain_error("theta must lie strictly inside (0, pi), got " + std::to_string(theta));
  }
}

std::vector<double> to_dense(const CoeffMap& map, int top) {
  std::vector<double> out(static_cast<std::size_t>(std::max(top, 0)), 0.0);
  for (const auto& [k, v] : map.entries()) {
    if (k >= 1 && k <= top) out[static_cast<std::size_t>(k - 1)] = v.to_double();
  }
  return out;
}

std::vector<long double> to_dense_ld(const CoeffMap& map, int top) {
  std::vector<long double> out(static_cast<std::size_t>(std::max(top, 0)), 0.0L);
  for (const auto& [k, v] : map.entries()) {
    if (k >= 1 && k <= top) out[static_cast<std::size_t>(k - 1)] = v.to_long_double();
  }
  return out;
}

// m + cos(theta) written through the half angle to stay accurate near theta = pi.
double m_plus_cos(int m, double theta) {
  const double ch = std::cos(0.5 * theta);
  return (m - 1) + 2.0 * ch * ch;
}

double one_minus_cos(double theta) {
  const double sh = std::sin(0.5 * theta);
  return 2.0 * sh * sh;
}

}  // namespace

double potential(const EvalPoint& point, const ModeParams& params) {
  require_interior(point.theta);
  const double s = std::sin(point.theta);
  const double c = std::cos(point.theta);
  const double mc = m_plus_cos(params.m(), point.theta);
  const double spin = params.s();
  const double beta = point.beta;
  return -(0.25 + spin + beta * beta * c * c - 2.0 * spin * beta * c - (mc * mc - 0.25) / (s * s));
}

namespace {

double p_antiderivative_from(std::span<const double> i_values, double theta) {
  const double s = std::sin(theta);
  const double s2 = s * s;
  // i_values[j] multiplies sin^{2k-2-2j}; Horner from j = 0 (top power) down.
  double sum = 0.0;
  for (double v : i_values) sum = sum * s2 + v;
  return -std::cos(theta) / (2.0 * static_cast<double>(i_values.size())) * sum;
}

std::vector<double> p_i_values(int k) {
  std::vector<double> v;
  for (int j = 0; j < k; ++j) v.push_back(i_coeff(k - 1, j).to_double());
  return v;
}

}  // namespace

double p_antiderivative(int k, double theta) {
  if (k < 1) throw std::out_of_range("p_antiderivative needs k >= 1");
  return p_antiderivative_from(p_i_values(k), theta);
}

SeriesEvaluator::SeriesEvaluator(const SeriesState& state)
    : params_(state.params()), c_const_(state.w0().c_const.to_double()), c_cos_(state.w0().c_cos.to_double()) {
  const int n_max = state.current_order();
  for (int n = 1; n <= n_max; ++n) {
    const WnTable& t = state.order(n);
    a_.push_back(to_dense(t.a, t.a_top()));
    b_.push_back(to_dense(t.b, t.b_top()));
    a_ld_.push_back(to_dense_ld(t.a, t.a_top()));
    b_ld_.push_back(to_dense_ld(t.b, t.b_top()));
  }
  for (const auto& e : state.energy().coeffs) {
    energy_.push_back(e.to_double());
    energy_ld_.push_back(e.to_long_double());
  }
  std::size_t k_max = 0;
  for (const auto& b : b_) k_max = std::max(k_max, b.size());
  for (std::size_t k = 1; k <= k_max; ++k) p_i_.push_back(p_i_values(static_cast<int>(k)));
  rt_r_.resize(static_cast<std::size_t>(n_max + 1));
  rt_t_.resize(static_cast<std::size_t>(n_max + 1));
  for (int n = 3; n <= n_max; ++n) {
    if (!state.has_rtxy(n)) continue;
    const RTXYTables& t = state.rtxy(n);
    for (const auto& [j, v] : t.R.entries()) {
      auto& r = rt_r_[static_cast<std::size_t>(n)];
      if (r.size() <= static_cast<std::size_t>(j)) r.resize(static_cast<std::size_t>(j) + 1, 0.0);
      r[static_cast<std::size_t>(j)] = v.to_double();
    }
    for (const auto& [j, v] : t.T.entries()) {
      auto& tt = rt_t_[static_cast<std::size_t>(n)];
      if (tt.size() <= static_cast<std::size_t>(j)) tt.resize(static_cast<std::size_t>(j) + 1, 0.0);
      tt[static_cast<std::size_t>(j)] = v.to_double();
    }
  }
}

SeriesEvaluator::Trig SeriesEvaluator::trig(double theta) { return {std::sin(theta), std::cos(theta)}; }

double SeriesEvaluator::w0(double theta) const {
  require_interior(theta);
  const auto [s, c] = trig(theta);
  return (c_const_ + c_cos_ * c) / s;
}

double SeriesEvaluator::w_order(int n, double theta) const {
  if (n < 1 || n > order()) throw std::out_of_range("order " + std::to_string(n) + " not available");
  const auto [s, c] = trig(theta);
  const auto& a = a_[static_cast<std::size_t>(n - 1)];
  const auto& b = b_[static_cast<std::size_t>(n - 1)];
  double sa = 0.0;
  double sb = 0.0;
  double pw = s;  // sin^{2k-1}
  const std::size_t kmax = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < kmax; ++i) {
    if (i < a.size()) sa += a[i] * pw;
    if (i < b.size()) sb += b[i] * pw;
    pw *= s * s;
  }
  return c * sa + sb;
}

double SeriesEvaluator::w(const EvalPoint& point) const {
  double sum = w0(point.theta);
  double bn = 1.0;
  for (int n = 1; n <= order(); ++n) {
    bn *= point.beta;
    sum += bn * w_order(n, point.theta);
  }
  return sum;
}

double SeriesEvaluator::w_order_derivative(int n, double theta) const {
  const auto [s, c] = trig(theta);
  const auto& a = a_[static_cast<std::size_t>(n - 1)];
  const auto& b = b_[static_cast<std::size_t>(n - 1)];
  double d = 0.0;
  double pw = 1.0;  // sin^{2k-2}
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    const double odd = 2.0 * static_cast<double>(i) + 1.0;  // 2k - 1
    // d/dtheta [cos sin^{2k-1}] = -sin^{2k} + (2k-1) cos^2 sin^{2k-2}
    if (i < a.size()) d += a[i] * (-pw * s * s + odd * c * c * pw);
    // d/dtheta [sin^{2k-1}] = (2k-1) cos sin^{2k-2}
    if (i < b.size()) d += b[i] * odd * c * pw;
    pw *= s * s;
  }
  return d;
}

double SeriesEvaluator::w_derivative(const EvalPoint& point) const {
  require_interior(point.theta);
  const auto [s, c] = trig(point.theta);
  double d = (-c_cos_ - c_const_ * c) / (s * s);
  double bn = 1.0;
  for (int n = 1; n <= order(); ++n) {
    bn *= point.beta;
    d += bn * w_order_derivative(n, point.theta);
  }
  return d;
}

double SeriesEvaluator::zeroth_order_residual(double theta) const {
  const EvalPoint p{theta, 0.0};
  const double w = w0(theta);
  const double dw = w_derivative(p);
  return w * w - dw - potential(p, params_) + energy_.front();
}

double SeriesEvaluator::riccati_residual(const EvalPoint& point) const {
  require_interior(point.theta);
  using ld = long double;
  const ld theta = point.theta;
  const ld beta = point.beta;
  const ld s = std::sin(theta);
  const ld c = std::cos(theta);
  const ld w0 = (static_cast<ld>(c_const_) + static_cast<ld>(c_cos_) * c) / s;

  // With W = W0 + dW and E = E_0 + dE:
  //   W^2 - W' - V + E = [W0^2 - W0' - V0 + E_0] + 2 W0 dW + dW^2 - dW' - (V - V0) + dE
  // and the bracket vanishes identically.
  ld dw = 0.0L;
  ld ddw = 0.0L;
  ld de = 0.0L;
  ld bn = 1.0L;
  for (int n = 1; n <= order(); ++n) {
    bn *= beta;
    const auto& a = a_ld_[static_cast<std::size_t>(n - 1)];
    const auto& b = b_ld_[static_cast<std::size_t>(n - 1)];
    ld wn = 0.0L;
    ld dwn = 0.0L;
    ld pw = 1.0L;  // sin^{2k-2}
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
      const ld odd = 2.0L * static_cast<ld>(i) + 1.0L;
      if (i < a.size()) {
        wn += a[i] * c * pw * s;
        dwn += a[i] * (-pw * s * s + odd * c * c * pw);
      }
      if (i < b.size()) {
        wn += b[i] * pw * s;
        dwn += b[i] * odd * c * pw;
      }
      pw *= s * s;
    }
    dw += bn * wn;
    ddw += bn * dwn;
    de += bn * energy_ld_[static_cast<std::size_t>(n)];
  }
  const ld dv = -beta * beta * c * c + 2.0L * params_.s() * beta * c;
  return static_cast<double>(2.0L * w0 * dw + dw * dw - ddw - dv + de);
}

double SeriesEvaluator::residual_noise_floor(const EvalPoint& point) const {
  if (order() < 1) return 0.0;
  const double theta = point.theta;
  const double beta = std::abs(point.beta);
  // Magnitudes of the first-order terms, which cancel against each other.
  const double scale = std::abs(2.0 * w0(theta) * w_order(1, theta)) + std::abs(w_order_derivative(1, theta)) +
                       2.0 * std::abs(std::cos(theta)) + std::abs(energy_[1]);
  return 4.0 * std::numeric_limits<long double>::epsilon() * beta * scale;
}

double SeriesEvaluator::energy(double beta, int upto) const {
  if (upto < 0 || upto > order()) {
    throw std::out_of_range("energy partial sum up to " + std::to_string(upto) + " exceeds computed order " +
                            std::to_string(order()));
  }
  // Horner from the top order down.
  double sum = 0.0;
  for (int n = upto; n >= 0; --n) sum = sum * beta + energy_[static_cast<std::size_t>(n)];
  return sum;
}

double SeriesEvaluator::unnormalized_psi(double beta, double theta) const {
  if (theta < 0.0 || theta > std::numbers::pi) throw std::domain_error("theta outside [0, pi]");
  if (theta == 0.0 || theta == std::numbers::pi) return 0.0;
  const double s = std::sin(theta);
  double exponent = 0.0;
  double bn = 1.0;
  for (int n = 1; n <= order(); ++n) {
    bn *= beta;
    const auto& a = a_[static_cast<std::size_t>(n - 1)];
    const auto& b = b_[static_cast<std::size_t>(n - 1)];
    double term = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int k = static_cast<int>(i) + 1;
      term += a[i] * std::pow(s, 2 * k) / (2.0 * k);
    }
    for (std::size_t i = 0; i < b.size(); ++i) term += b[i] * p_antiderivative_from(p_i_[i], theta);
    exponent += bn * term;
  }
  return one_minus_cos(theta) * std::pow(s, params_.m() - 0.5) * std::exp(-exponent);
}

double SeriesEvaluator::norm_const(double beta) const {
  constexpr int nodes = 4097;
  constexpr double eps = 1e-8;
  const double lo = eps;
  const double hi = std::numbers::pi - eps;
  const double h = (hi - lo) / (nodes - 1);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double psi = unnormalized_psi(beta, lo + i * h);
    const double weight = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * psi * psi;
  }
  return 1.0 / std::sqrt(sum * h / 3.0);
}

WavefunctionSample SeriesEvaluator::ground_wavefunction(const EvalPoint& point) const {
  const double thetas[] = {point.theta};
  return ground_wavefunction(point.beta, thetas).front();
}

std::vector<WavefunctionSample> SeriesEvaluator::ground_wavefunction(double beta, std::span<const double> thetas) const {
  for (double t : thetas) require_interior(t);
  const double nc = norm_const(beta);
  std::vector<WavefunctionSample> out;
  out.reserve(thetas.size());
  for (double t : thetas) {
    const double psi = nc * unnormalized_psi(beta, t);
    out.push_back({psi, psi / std::sqrt(std::sin(t)), nc});
  }
  return out;
}

double SeriesEvaluator::source_term(int n, double theta) const {
  if (n < 3 || n > order()) throw std::out_of_range("source_term needs 3 <= n <= order()");
  double f = energy_[static_cast<std::size_t>(n)];
  for (int k = 1; k <= n - 1; ++k) f += w_order(k, theta) * w_order(n - k, theta);
  return f;
}

double SeriesEvaluator::an_closed_form(int n, double theta) const {
  if (n < 3 || n > order() || rt_r_[static_cast<std::size_t>(n)].empty()) {
    throw std::out_of_range("no A_n tables for order " + std::to_string(n));
  }
  const auto [s, c] = trig(theta);
  const double base = std::pow(s, 2 * params_.m());
  auto poly = [&](const std::vector<double>& coeffs) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s * s + *it;
    return acc * base;
  };
  return poly(rt_r_[static_cast<std::size_t>(n)]) + c * poly(rt_t_[static_cast<std::size_t>(n)]);
}

double eval_w(const SeriesState& state, const EvalPoint& point) { return SeriesEvaluator(state).w(point); }

double eval_w_derivative(const SeriesState& state, const EvalPoint& point) {
  return SeriesEvaluator(state).w_derivative(point);
}

double riccati_residual(const SeriesState& state, const EvalPoint& point) {
  return SeriesEvaluator(state).riccati_residual(point);
}

double eval_energy(const SeriesState& state, double beta, int upto) { return SeriesEvaluator(state).energy(beta, upto); }

WavefunctionSample eval_ground_wavefunction(const SeriesState& state, const EvalPoint& point) {
  return SeriesEvaluator(state).ground_wavefunction(point);
}

}  // namespace spheroidal
