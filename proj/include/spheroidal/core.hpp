#pragma once

// Shared data model for the s = 1 spheroidal super-potential series.
//
// The super-potential is expanded as W = W0 + sum_n beta^n W_n with
//   W0(theta)  = (c_const + c_cos cos(theta)) / sin(theta)
//   W_n(theta) = cos(theta) sum_k a_{n,k} sin^{2k-1}(theta) + sum_k b_{n,k} sin^{2k-1}(theta)
// and the ground eigenvalue as E0 = sum_n E_n beta^n. All coefficients are
// exact rationals for a fixed integer m.

#include <map>
#include <stdexcept>
#include <vector>

#include "spheroidal/rational.hpp"

namespace spheroidal {

/// Problem instance: azimuthal index m >= 1, spin weight fixed at s = 1,
/// and the truncation order N >= 0.
class ModeParams {
 public:
  ModeParams(int m, int order, int s = 1);

  int m() const { return m_; }
  int s() const { return s_; }
  int order() const { return order_; }

  friend bool operator==(const ModeParams&, const ModeParams&) = default;

 private:
  int m_;
  int s_;
  int order_;
};

/// Sparse integer-indexed table of exact coefficients. Only nonzero values are
/// stored; any other index reads as exact zero, so recurrences may reference
/// out-of-range indices freely.
class CoeffMap {
 public:
  Rational operator[](int k) const;
  void set(int k, Rational value);

  /// Largest nonzero index, or `none` when the table is empty.
  int top_nonzero(int none = 0) const;
  bool all_zero_outside(int lo, int hi) const;

  const std::map<int, Rational>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const CoeffMap&, const CoeffMap&) = default;

 private:
  std::map<int, Rational> entries_;
};

struct W0Form {
  Rational c_const;
  Rational c_cos;

  static W0Form for_mode(const ModeParams& params);
  friend bool operator==(const W0Form&, const W0Form&) = default;
};

/// Coefficients of one super-potential order W_n.
/// a is supported on 1..floor(n/2), b on 1..floor((n+1)/2).
struct WnTable {
  int n = 0;
  CoeffMap a;
  CoeffMap b;

  int a_top() const { return n / 2; }
  int b_top() const { return (n + 1) / 2; }
  bool within_support() const;

  friend bool operator==(const WnTable&, const WnTable&) = default;
};

struct EnergySeries {
  std::vector<Rational> coeffs;

  int size() const { return static_cast<int>(coeffs.size()); }
  const Rational& operator[](int n) const { return coeffs.at(static_cast<std::size_t>(n)); }

  friend bool operator==(const EnergySeries&, const EnergySeries&) = default;
};

/// Convolution sum_k W_k W_{n-k} = sum_p h_p sin^{2p-2} + cos sum_p g_p sin^{2p-2}.
/// h is supported on 2..floor(n/2)+1, g on 2..floor((n+1)/2).
struct SourceTables {
  int n = 0;
  CoeffMap h;
  CoeffMap g;

  int h_top() const { return n / 2 + 1; }
  int g_top() const { return (n + 1) / 2; }
  bool within_support() const;

  friend bool operator==(const SourceTables&, const SourceTables&) = default;
};

/// A_n = R_n + cos T_n with R_n = sum_p R_p sin^{2m+2p}, T_n = sum_j T_j sin^{2m+2j},
/// and W_n = X_n + cos Y_n with X_n = sum_j X_j sin^{2j-1}, Y_n = sum_j Y_j sin^{2j-1}.
struct RTXYTables {
  int n = 0;
  CoeffMap R;
  CoeffMap T;
  CoeffMap X;
  CoeffMap Y;

  friend bool operator==(const RTXYTables&, const RTXYTables&) = default;
};

/// Raised when an identity that must hold exactly in rational arithmetic fails.
class InconsistencyError : public std::logic_error {
 public:
  InconsistencyError(int order, const std::string& what);
  int order() const { return order_; }

 private:
  int order_;
};

}  // namespace spheroidal
