#include "spheroidal/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace spheroidal {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void Rational::normalize() {
  if (den_.is_zero()) throw ZeroDenominatorError("rational with zero denominator");
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

double Rational::to_double() const {
  // cpp_rational conversion rounds correctly even when num and den overflow double.
  boost::multiprecision::cpp_rational q(num_, den_);
  return q.convert_to<double>();
}

long double Rational::to_long_double() const {
  boost::multiprecision::cpp_rational q(num_, den_);
  return q.convert_to<long double>();
}

std::string Rational::str() const { return num_.str() + "/" + den_.str(); }

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    if (part.empty()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    std::size_t start = (part.front() == '-' || part.front() == '+') ? 1 : 0;
    if (start == part.size()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') {
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
      }
    }
    std::string digits(part.front() == '+' ? part.substr(1) : part);
    return BigInt(digits);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text), BigInt(1));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (den_ == rhs.den_) {
    num_ += rhs.num_;
  } else {
    num_ = num_ * rhs.den_ + rhs.num_ * den_;
    den_ *= rhs.den_;
  }
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  num_ *= rhs.num_;
  den_ *= rhs.den_;
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw ZeroDenominatorError("rational division by zero");
  num_ *= rhs.den_;
  den_ *= rhs.num_;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
  BigInt l = lhs.num_ * rhs.den_;
  BigInt r = rhs.num_ * lhs.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational normalize_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

}  // namespace spheroidal
