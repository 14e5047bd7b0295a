#include "spheroidal/recurrence.hpp"

#include <algorithm>
#include <string>

namespace spheroidal {

namespace {

Rational pow_int(const Rational& base, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

WnTable table_from_xy(const RTXYTables& xy) {
  WnTable w;
  w.n = xy.n;
  for (const auto& [j, v] : xy.Y.entries()) {
    if (j >= 1) w.a.set(j, v);
  }
  for (const auto& [j, v] : xy.X.entries()) {
    if (j >= 1) w.b.set(j, v);
  }
  return w;
}

}  // namespace

Rational i_coeff(int mm, int k) {
  if (mm < 0) throw std::domain_error("i_coeff: index mm must be >= 0");
  if (k < 0) return Rational();
  if (k > mm) {
    throw std::domain_error("i_coeff: k = " + std::to_string(k) + " exceeds mm = " + std::to_string(mm));
  }
  BigInt num = 1;
  BigInt den = 1;
  for (int i = 0; i <= k; ++i) {
    num *= 2 * mm + 2 - 2 * i;
    den *= 2 * mm + 1 - 2 * i;
  }
  return Rational(num, den);
}

std::pair<W0Form, Rational> base_order0(const ModeParams& params) {
  const int m = params.m();
  return {W0Form::for_mode(params), Rational(m * m + m - 2)};
}

std::pair<WnTable, Rational> base_order1(const ModeParams& params) {
  const int m = params.m();
  WnTable w;
  w.n = 1;
  w.b.set(1, Rational(-1, m + 1));
  return {w, Rational(-2, m + 1)};
}

std::pair<WnTable, Rational> base_order2(const ModeParams& params) {
  const Rational m(params.m());
  const Rational mp1 = m + 1;
  const Rational tm3 = 2 * m + 3;
  WnTable w;
  w.n = 2;
  w.a.set(1, m * (m + 2) / (tm3 * mp1 * mp1));
  w.b.set(1, -m * (m + 2) / (tm3 * pow_int(mp1, 3)));
  Rational e = -(m * m * m + 7 * m * m + 11 * m + 3) / (pow_int(mp1, 3) * tm3);
  return {w, e};
}

std::pair<WnTable, Rational> base_order3(const ModeParams& params) {
  const Rational m(params.m());
  const Rational mp1 = m + 1;
  const Rational tm3 = 2 * m + 3;
  WnTable w;
  w.n = 3;
  w.a.set(1, -2 * m / (pow_int(mp1, 4) * tm3));
  w.b.set(1, 2 * m / (pow_int(mp1, 5) * tm3));
  w.b.set(2, -m / (pow_int(mp1, 3) * tm3));
  Rational e = -4 * m * m * (m + 2) / (pow_int(mp1, 5) * tm3);
  return {w, e};
}

SeriesState::SeriesState(const ModeParams& params) : params_(params), w0_(W0Form::for_mode(params)) {}

SeriesState SeriesState::initial(const ModeParams& params) {
  SeriesState state(params);
  auto [w0, e0] = base_order0(params);
  state.w0_ = w0;
  state.energy_.coeffs.push_back(e0);
  return state;
}

const WnTable& SeriesState::order(int n) const {
  if (n < 1 || n > current_order()) {
    throw std::out_of_range("order " + std::to_string(n) + " not computed (current " +
                            std::to_string(current_order()) + ")");
  }
  return orders_[static_cast<std::size_t>(n - 1)];
}

const RTXYTables& SeriesState::rtxy(int n) const {
  auto it = rtxy_.find(n);
  if (it == rtxy_.end()) throw std::out_of_range("no A_n tables for order " + std::to_string(n));
  return it->second;
}

SeriesState SeriesState::with_energy_override(int n, Rational value) const {
  SeriesState copy = *this;
  copy.energy_.coeffs.at(static_cast<std::size_t>(n)) = std::move(value);
  return copy;
}

SourceTables convolve_sources(const SeriesState& state, int n, LoopOrder loop) {
  if (n < 3) throw std::invalid_argument("convolve_sources needs n >= 3; orders 1 and 2 use closed forms");
  if (state.current_order() < n - 1) {
    throw std::invalid_argument("convolve_sources: orders 1.." + std::to_string(n - 1) + " must be present");
  }
  // One past the expected support, so a leak beyond it is detected below.
  const int p_max = n / 2 + 2;
  SourceTables src;
  src.n = n;
  for (int p = 1; p <= p_max; ++p) {
    Rational h;
    Rational g;
    for (int step = 1; step <= n - 1; ++step) {
      const int k = loop == LoopOrder::forward ? step : n - step;
      const WnTable& wk = state.order(k);
      const WnTable& wnk = state.order(n - k);
      for (int j = 1; j <= p - 1; ++j) {
        h += wk.a[p - j] * wnk.a[j] - wk.a[p - 1 - j] * wnk.a[j] + wk.b[p - j] * wnk.b[j];
        g += wk.a[p - j] * wnk.b[j] + wk.b[p - j] * wnk.a[j];
      }
    }
    src.h.set(p, h);
    src.g.set(p, g);
  }
  if (!src.within_support()) throw InconsistencyError(n, "h/g coefficients leak outside their support");
  return src;
}

Rational b1_coefficient(const SourceTables& sources, const Rational& e_n, const ModeParams& params) {
  const int m = params.m();
  Rational sum;
  for (int p = 2; p <= sources.n / 2 + 1; ++p) {
    const Rational h = sources.h[p];
    const Rational g = sources.g[p];
    sum += (h - g) / Rational(m + p - 1) * i_coeff(m + p - 2, p - 1);
    sum += (2 * g - h) / Rational(2 * m + 2 * p) * i_coeff(m + p - 1, p);
  }
  return Rational(2 * (m + 1), 2 * m + 1) * e_n + Rational(2 * m - 1) * sum;
}

Rational energy_coeff(const SourceTables& sources, const ModeParams& params) {
  const int m = params.m();
  Rational sum;
  for (int p = 2; p <= sources.n / 2 + 1; ++p) {
    const Rational h = sources.h[p];
    const Rational g = sources.g[p];
    sum += (h - g) / Rational(m + p - 1) * i_coeff(m + p - 2, p - 1);
    sum += (2 * g - h) / Rational(2 * m + 2 * p) * i_coeff(m + p - 1, p);
  }
  return -Rational((2 * m + 1) * (2 * m - 1), 2 * (m + 1)) * sum;
}

RTXYTables rt_tables(const SourceTables& sources, const Rational& e_n, const ModeParams& params) {
  const int m = params.m();
  const int n = sources.n;
  const int p_top = n / 2 + 1;
  const auto& h = sources.h;
  const auto& g = sources.g;

  RTXYTables t;
  t.n = n;

  t.R.set(0, -e_n / Rational(m));
  for (int p = 1; p <= p_top + 1; ++p) {
    t.R.set(p, (2 * g[p + 1] - 2 * h[p + 1] - g[p]) / Rational(2 * m + 2 * p));
  }

  for (int j = 0; j <= p_top; ++j) {
    Rational v = j == 0 ? e_n / Rational(2 * m + 1) : Rational();
    for (int p = std::max(j + 2, 2); p <= p_top; ++p) {
      v += (g[p] - h[p]) / Rational(m + p - 1) * i_coeff(m + p - 2, p - 2 - j);
    }
    // h_1 = g_1 = 0, so starting this sum at p = 1 or p = 2 is equivalent for j = 0.
    for (int p = std::max(j + 1, 2); p <= p_top; ++p) {
      v += (h[p] - 2 * g[p]) / Rational(2 * m + 2 * p) * i_coeff(m + p - 1, p - 1 - j);
    }
    t.T.set(j, v);
  }

  if (!t.R.all_zero_outside(0, (n + 1) / 2)) throw InconsistencyError(n, "R coefficients leak outside their support");
  if (!t.T.all_zero_outside(0, n / 2)) throw InconsistencyError(n, "T coefficients leak outside their support");
  return t;
}

RTXYTables xy_tables(RTXYTables rt) {
  const int n = rt.n;
  const auto& R = rt.R;
  const auto& T = rt.T;
  const int j_max = (n + 1) / 2 + 2;
  for (int j = -1; j <= j_max; ++j) {
    rt.X.set(j, 2 * R[j + 1] + 2 * T[j + 1] - R[j] - 2 * T[j]);
    rt.Y.set(j, 2 * R[j + 1] + 2 * T[j + 1] - T[j]);
  }
  for (int j : {-1, 0}) {
    if (!rt.X[j].is_zero()) throw InconsistencyError(n, "X_" + std::to_string(j) + " = " + rt.X[j].str() + " != 0");
    if (!rt.Y[j].is_zero()) throw InconsistencyError(n, "Y_" + std::to_string(j) + " = " + rt.Y[j].str() + " != 0");
  }
  if (!rt.Y.all_zero_outside(1, n / 2)) throw InconsistencyError(n, "a coefficients exceed index floor(n/2)");
  if (!rt.X.all_zero_outside(1, (n + 1) / 2)) throw InconsistencyError(n, "b coefficients exceed index floor((n+1)/2)");
  return rt;
}

SeriesState advance(SeriesState state) {
  const ModeParams& params = state.params_;
  const int n = state.current_order() + 1;
  if (n > params.order()) {
    throw std::out_of_range("cannot advance past order " + std::to_string(params.order()));
  }

  AuditRecord record;
  record.n = n;
  WnTable table;
  Rational e_n;

  if (n <= 2) {
    std::tie(table, e_n) = n == 1 ? base_order1(params) : base_order2(params);
  } else {
    SourceTables src = convolve_sources(state, n);
    e_n = energy_coeff(src, params);
    if (!b1_coefficient(src, e_n, params).is_zero()) throw InconsistencyError(n, "P(2m-1) coefficient does not vanish");
    record.b1_vanishes = true;
    RTXYTables xy = xy_tables(rt_tables(src, e_n, params));
    record.from_recurrence = true;
    record.cancellations_hold = true;
    table = table_from_xy(xy);
    state.rtxy_.emplace(n, std::move(xy));
    if (n == 3) {
      auto [closed, closed_e] = base_order3(params);
      if (!(closed == table) || closed_e != e_n) {
        throw InconsistencyError(n, "recurrence disagrees with the closed-form third order");
      }
      record.closed_form_agrees = true;
    }
  }
  if (!table.within_support()) throw InconsistencyError(n, "W_n coefficients outside their support");
  record.parity_truncation = true;

  state.orders_.push_back(std::move(table));
  state.energy_.coeffs.push_back(std::move(e_n));
  state.audit_.push_back(record);
  return state;
}

SeriesState compute_series(const ModeParams& params) {
  SeriesState state = SeriesState::initial(params);
  while (state.current_order() < params.order()) state = advance(std::move(state));
  return state;
}

}  // namespace spheroidal
