#ifndef FRACGRAD_RATIONAL_HPP
#define FRACGRAD_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace fracgrad {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigRat rat(long long num, long long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  return BigRat(BigInt(num), BigInt(den));
}

/// Exact rational extended with +/- infinity.  Infinity encodes L^infty
/// integrability (m = inf, sigma = inf) and blown-up exponent thresholds.
/// Arithmetic stays on finite values; the exponent formulas handle the
/// infinite cases explicitly as limits.
class ExtRat {
public:
  enum class Kind { Finite, PlusInf, MinusInf };

  ExtRat() : kind_(Kind::Finite), v_(0) {}
  ExtRat(const BigRat &v) : kind_(Kind::Finite), v_(v) {}
  ExtRat(long long n) : kind_(Kind::Finite), v_(n) {}

  static ExtRat plus_inf() { return ExtRat(Kind::PlusInf); }
  static ExtRat minus_inf() { return ExtRat(Kind::MinusInf); }

  bool finite() const { return kind_ == Kind::Finite; }
  bool is_plus_inf() const { return kind_ == Kind::PlusInf; }
  bool is_minus_inf() const { return kind_ == Kind::MinusInf; }

  const BigRat &value() const {
    if (!finite()) throw std::domain_error("ExtRat: infinite value");
    return v_;
  }

  // Total order: -inf < finite < +inf.
  int cmp(const ExtRat &o) const {
    auto rank = [](Kind k) { return k == Kind::MinusInf ? -1 : (k == Kind::PlusInf ? 1 : 0); };
    int a = rank(kind_), b = rank(o.kind_);
    if (a != b) return a < b ? -1 : 1;
    if (kind_ != Kind::Finite) return 0;
    if (v_ < o.v_) return -1;
    if (v_ > o.v_) return 1;
    return 0;
  }

  bool operator<(const ExtRat &o) const { return cmp(o) < 0; }
  bool operator<=(const ExtRat &o) const { return cmp(o) <= 0; }
  bool operator>(const ExtRat &o) const { return cmp(o) > 0; }
  bool operator>=(const ExtRat &o) const { return cmp(o) >= 0; }
  bool operator==(const ExtRat &o) const { return cmp(o) == 0; }
  bool operator!=(const ExtRat &o) const { return cmp(o) != 0; }

  std::string str() const;
  double to_double() const;

private:
  explicit ExtRat(Kind k) : kind_(k), v_(0) {}
  Kind kind_;
  BigRat v_;
};

/// A / B with signed semantics: B > 0 and B < 0 divide exactly,
/// B == 0 yields +inf or -inf by the sign of A.
ExtRat ext_div_signed(const BigRat &a, const BigRat &b);

/// A / (B)_+ : the paper's positive-part convention — +inf when B <= 0.
ExtRat ext_div_pospart(const BigRat &a, const BigRat &b);

ExtRat ext_min(const ExtRat &a, const ExtRat &b);

/// k * x for finite k > 0 and extended x.
ExtRat ext_scale(const BigRat &k, const ExtRat &x);

/// Parse "num/den", "num" or "inf".  Throws std::invalid_argument on junk.
ExtRat parse_ext_rat(const std::string &s);
BigRat parse_rat(const std::string &s);

/// Exact "num/den" (or "num", "inf", "-inf") rendering; never decimal.
std::string rat_str(const BigRat &v);

std::ostream &operator<<(std::ostream &os, const ExtRat &v);

} // namespace fracgrad

#endif
