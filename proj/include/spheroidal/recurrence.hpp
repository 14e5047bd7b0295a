#pragma once

// Order-by-order construction of the super-potential series.
//
// Orders 1 and 2 carry source terms (-2 cos, cos^2) outside the convolution
// shape, so they come from closed forms. Every order n >= 3 runs
//   convolve_sources -> energy_coeff -> rt_tables -> xy_tables
// and the cancellations that make W_n regular at both poles are checked in
// exact arithmetic as they are produced.

#include <map>
#include <utility>
#include <vector>

#include "spheroidal/core.hpp"

namespace spheroidal {

/// I(2mm+1, k) = prod_{i=0..k} (2mm+2-2i)/(2mm+1-2i); zero for k < 0.
/// Throws std::domain_error for k > mm.
Rational i_coeff(int mm, int k);

std::pair<W0Form, Rational> base_order0(const ModeParams& params);
std::pair<WnTable, Rational> base_order1(const ModeParams& params);
std::pair<WnTable, Rational> base_order2(const ModeParams& params);
std::pair<WnTable, Rational> base_order3(const ModeParams& params);

/// What was checked when order n was appended.
struct AuditRecord {
  int n = 0;
  bool from_recurrence = false;    // false: closed form (n = 1, 2)
  bool cancellations_hold = false; // X_{-1} = X_0 = Y_{-1} = Y_0 = 0
  bool b1_vanishes = false;        // P(2m-1) coefficient of A_n is zero
  bool parity_truncation = false;  // a top index floor(n/2), b top index floor((n+1)/2)
  bool closed_form_agrees = false; // only meaningful at n = 3
};

class SeriesState {
 public:
  /// Zeroth-order state: W0 and E_0 only.
  static SeriesState initial(const ModeParams& params);

  const ModeParams& params() const { return params_; }
  const W0Form& w0() const { return w0_; }
  int current_order() const { return static_cast<int>(orders_.size()); }

  /// Table for order n, 1 <= n <= current_order().
  const WnTable& order(int n) const;
  const std::vector<WnTable>& orders() const { return orders_; }
  const EnergySeries& energy() const { return energy_; }
  const std::vector<AuditRecord>& audit() const { return audit_; }

  /// A_n tables for recurrence-built orders (n >= 3).
  const RTXYTables& rtxy(int n) const;
  bool has_rtxy(int n) const { return rtxy_.count(n) != 0; }

  /// Returns a copy with E_n replaced; used to exercise failure paths.
  SeriesState with_energy_override(int n, Rational value) const;

 private:
  friend SeriesState advance(SeriesState state);

  explicit SeriesState(const ModeParams& params);

  ModeParams params_;
  W0Form w0_;
  std::vector<WnTable> orders_;
  EnergySeries energy_;
  std::map<int, RTXYTables> rtxy_;
  std::vector<AuditRecord> audit_;
};

enum class LoopOrder { forward, reversed };

/// h_{n,p}, g_{n,p} from orders 1..n-1. Throws std::invalid_argument for n < 3.
SourceTables convolve_sources(const SeriesState& state, int n, LoopOrder loop = LoopOrder::forward);

/// E_n chosen so that the P(2m-1) coefficient of A_n vanishes.
Rational energy_coeff(const SourceTables& sources, const ModeParams& params);

/// Coefficient of P(2m-1, theta) in A_n for a trial energy e_n.
Rational b1_coefficient(const SourceTables& sources, const Rational& e_n, const ModeParams& params);

/// R_{n,p} and T_{n,j}; X and Y left empty.
RTXYTables rt_tables(const SourceTables& sources, const Rational& e_n, const ModeParams& params);

/// Fills X and Y from R and T and checks that the pole terms cancel.
/// Throws InconsistencyError naming the order on failure.
RTXYTables xy_tables(RTXYTables rt);

/// Appends order current+1. Throws std::out_of_range past params().order().
SeriesState advance(SeriesState state);

SeriesState compute_series(const ModeParams& params);

}  // namespace spheroidal
