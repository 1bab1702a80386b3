#include "fracgrad/rational.hpp"

#include <ostream>
#include <sstream>

namespace fracgrad {

std::string rat_str(const BigRat &v) {
  std::ostringstream os;
  os << numerator(v);
  if (denominator(v) != 1) os << "/" << denominator(v);
  return os.str();
}

std::string ExtRat::str() const {
  if (is_plus_inf()) return "inf";
  if (is_minus_inf()) return "-inf";
  return rat_str(v_);
}

double ExtRat::to_double() const {
  if (is_plus_inf()) return std::numeric_limits<double>::infinity();
  if (is_minus_inf()) return -std::numeric_limits<double>::infinity();
  return v_.convert_to<double>();
}

ExtRat ext_div_signed(const BigRat &a, const BigRat &b) {
  if (b != 0) return ExtRat(a / b);
  if (a > 0) return ExtRat::plus_inf();
  if (a < 0) return ExtRat::minus_inf();
  throw std::domain_error("ext_div_signed: 0/0");
}

ExtRat ext_div_pospart(const BigRat &a, const BigRat &b) {
  if (b > 0) return ExtRat(a / b);
  return ExtRat::plus_inf();
}

ExtRat ext_min(const ExtRat &a, const ExtRat &b) { return a <= b ? a : b; }

ExtRat ext_scale(const BigRat &k, const ExtRat &x) {
  if (k <= 0) throw std::domain_error("ext_scale: nonpositive factor");
  if (!x.finite()) return x;
  return ExtRat(k * x.value());
}

BigRat parse_rat(const std::string &s) {
  auto bad = [&] { throw std::invalid_argument("bad rational '" + s + "'"); };
  std::string t = s;
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(t));
    BigInt num(t.substr(0, slash));
    BigInt den(t.substr(slash + 1));
    if (den == 0) bad();
    return BigRat(num, den);
  } catch (const std::runtime_error &) {
    bad();
  }
  return BigRat(0); // unreachable
}

ExtRat parse_ext_rat(const std::string &s) {
  if (s == "inf" || s == "+inf") return ExtRat::plus_inf();
  if (s == "-inf") return ExtRat::minus_inf();
  return ExtRat(parse_rat(s));
}

std::ostream &operator<<(std::ostream &os, const ExtRat &v) { return os << v.str(); }

} // namespace fracgrad
