#include "spheroidal/core.hpp"

#include <string>

namespace spheroidal {

ModeParams::ModeParams(int m, int order, int s) : m_(m), s_(s), order_(order) {
  if (s != 1) throw std::invalid_argument("only spin weight s = 1 is supported (got s = " + std::to_string(s) + ")");
  if (m < 1) throw std::invalid_argument("azimuthal index must satisfy m >= 1 (got m = " + std::to_string(m) + ")");
  if (order < 0) throw std::invalid_argument("series order must be >= 0 (got " + std::to_string(order) + ")");
}

Rational CoeffMap::operator[](int k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? Rational() : it->second;
}

void CoeffMap::set(int k, Rational value) {
  if (value.is_zero()) {
    entries_.erase(k);
  } else {
    entries_[k] = std::move(value);
  }
}

int CoeffMap::top_nonzero(int none) const {
  return entries_.empty() ? none : entries_.rbegin()->first;
}

bool CoeffMap::all_zero_outside(int lo, int hi) const {
  for (const auto& entry : entries_) {
    if (entry.first < lo || entry.first > hi) return false;
  }
  return true;
}

W0Form W0Form::for_mode(const ModeParams& params) {
  return W0Form{Rational(-1), -Rational(2 * params.m() + 1, 2)};
}

bool WnTable::within_support() const { return a.all_zero_outside(1, a_top()) && b.all_zero_outside(1, b_top()); }

bool SourceTables::within_support() const { return h.all_zero_outside(2, h_top()) && g.all_zero_outside(2, g_top()); }

InconsistencyError::InconsistencyError(int order, const std::string& what)
    : std::logic_error("order " + std::to_string(order) + ": " + what), order_(order) {}

}  // namespace spheroidal
