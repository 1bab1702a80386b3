#include "fracgrad/kernel.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracgrad {

namespace {
constexpr double kPi = std::numbers::pi;
}

GreenKernel::GreenKernel(int dim, double s) : dim_(dim), s_(s), dom_{dim} {
  if (dim < 2 || dim > 3) throw std::invalid_argument("GreenKernel: dim must be 2 or 3");
  if (!(s > 0.5 && s < 1.0)) throw std::invalid_argument("GreenKernel: s must lie in (1/2, 1)");
  kappa_ = std::tgamma(dim / 2.0) /
           (std::pow(4.0, s) * std::pow(kPi, dim / 2.0) * std::pow(std::tgamma(s), 2));
}

double GreenKernel::r0(Point x, Point y) const {
  double e = dist(x, y);
  double ax = 1.0 - dot(x, x), ay = 1.0 - dot(y, y);
  return ax * ay / (e * e);
}

double GreenKernel::profile(double r0v) const {
  // substitute u = t/(1+t):  int = B(r0/(1+r0); s, N/2 - s)
  double z = r0v / (1.0 + r0v);
  return boost::math::beta(s_, dim_ / 2.0 - s_, z);
}

double GreenKernel::profile_by_quadrature(double r0v) const {
  boost::math::quadrature::tanh_sinh<double> integ;
  auto f = [&](double t) { return std::pow(t, s_ - 1.0) * std::pow(1.0 + t, -dim_ / 2.0); };
  if (r0v <= 1.0) return integ.integrate(f, 0.0, r0v);
  return integ.integrate(f, 0.0, 1.0) + integ.integrate(f, 1.0, r0v);
}

double GreenKernel::operator()(Point x, Point y) const {
  if (boundary_distance(dom_, x) <= 0.0 || boundary_distance(dom_, y) <= 0.0) return 0.0;
  double e = dist(x, y);
  if (e == 0.0) throw std::domain_error("GreenKernel: x == y");
  return kappa_ * std::pow(e, 2.0 * s_ - dim_) * profile(r0(x, y));
}

Point GreenKernel::grad_x(Point x, Point y) const {
  double e = dist(x, y);
  if (e == 0.0) throw std::domain_error("GreenKernel: x == y");
  double e2 = e * e;
  double ax = 1.0 - dot(x, x), ay = 1.0 - dot(y, y);
  double r0v = ax * ay / e2;
  double P = profile(r0v);
  double dP = std::pow(r0v, s_ - 1.0) * std::pow(1.0 + r0v, -dim_ / 2.0);
  double A = std::pow(e, 2.0 * s_ - dim_);
  Point d = x - y;
  // grad A = (2s-N) |x-y|^{2s-N-2} (x-y)
  Point gA = ((2.0 * s_ - dim_) * A / e2) * d;
  // grad r0 = (-2 x ay e^2 - 2 ax ay (x-y)) / e^4
  Point gr0 = (-2.0 * ay / e2) * x - (2.0 * ax * ay / (e2 * e2)) * d;
  return kappa_ * (P * gA + (A * dP) * gr0);
}

Point GreenKernel::grad_x_fd(Point x, Point y, bool *reliable) const {
  double h = std::min(dist(x, y), boundary_distance(dom_, x)) / 64.0;
  auto fd = [&](double step) {
    Point g;
    for (int c = 0; c < dim_; ++c) {
      Point xp = x, xm = x;
      xp[c] += step;
      xm[c] -= step;
      g[c] = ((*this)(xp, y) - (*this)(xm, y)) / (2.0 * step);
    }
    return g;
  };
  Point g1 = fd(h);
  Point g2 = fd(h / 2.0);
  if (reliable) {
    double diff = norm(g1 - g2);
    double scale = std::max(norm(g2), 1e-300);
    *reliable = diff / scale < 1e-4 && h > 1e-12;
  }
  return g2;
}

double comparison_first(Point x, Point y, double s, int dim) {
  Domain dom{dim};
  double e = dist(x, y);
  if (e == 0.0) throw std::domain_error("comparison_first: x == y");
  double fx = std::min(std::pow(boundary_distance(dom, x), s) / std::pow(e, s), 1.0);
  double fy = std::min(std::pow(boundary_distance(dom, y), s) / std::pow(e, s), 1.0);
  return std::pow(e, 2.0 * s - dim) * fx * fy;
}

ComparisonMenu comparison_menu(Point x, Point y, double s, int dim, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("comparison_menu: eta outside (0,1)");
  Domain dom{dim};
  double e = dist(x, y);
  double dx = boundary_distance(dom, x), dy = boundary_distance(dom, y);
  ComparisonMenu m;
  m.min_bound = std::min({std::pow(e, 2.0 * s - dim), std::pow(dx, s) * std::pow(e, s - dim),
                          std::pow(dy, s) * std::pow(e, s - dim)});
  m.eta_split = std::pow(dy, eta * s) * std::pow(dx, (1.0 - eta) * s) * std::pow(e, s - dim);
  m.eta_reduced = std::pow(dy, eta * s) * std::pow(e, -(dim - s * (2.0 - eta)));
  return m;
}

namespace {

double halton(unsigned long long i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * double(i % base);
    i /= base;
  }
  return r;
}

} // namespace

Point halton_ball_point(int dim, unsigned long long index) {
  static const unsigned bases[6] = {2, 3, 5, 7, 11, 13};
  // skip-and-reject into the open unit ball
  for (unsigned long long k = index;; k += 1000003ULL) {
    Point p;
    for (int c = 0; c < dim; ++c) p[c] = 2.0 * halton(k + 1, bases[c]) - 1.0;
    if (norm(p) < 1.0) return p;
  }
}

EstimateRatioReport ratio_scan(const GreenKernel &ker, const std::string &estimate_id, int samples,
                               unsigned seed, double eta) {
  if (samples < 100) throw std::invalid_argument("ratio_scan: need at least 100 samples");
  const int dim = ker.dim();
  const double s = ker.s();
  Domain dom{dim};
  EstimateRatioReport rep;
  rep.estimate_id = estimate_id;
  rep.s = s;
  rep.eta = eta;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;

  unsigned long long idx = 1 + seed * 7919ULL;
  int got = 0;
  while (got < samples) {
    Point x = halton_ball_point(dim, idx);
    Point y = halton_ball_point(dim, idx + 500009ULL);
    idx += 1;
    if (boundary_distance(dom, x) < 1e-4 || boundary_distance(dom, y) < 1e-4) continue;
    if (dist(x, y) < 1e-4) continue;

    double ratio;
    if (estimate_id == "2.2") {
      ratio = ker(x, y) / comparison_first(x, y, s, dim);
    } else if (estimate_id == "2.3") {
      ratio = ker(x, y) / comparison_menu(x, y, s, dim, eta).min_bound;
    } else if (estimate_id == "2.4-left") {
      ratio = ker(x, y) / comparison_menu(x, y, s, dim, eta).eta_split;
    } else if (estimate_id == "2.4-right") {
      ratio = ker(x, y) / comparison_menu(x, y, s, dim, eta).eta_reduced;
    } else if (estimate_id == "2.5") {
      double g = norm(ker.grad_x(x, y));
      double bound = ker(x, y) * std::max(1.0 / dist(x, y), 1.0 / boundary_distance(dom, x));
      ratio = g / bound;
    } else if (estimate_id == "2.6") {
      double g = norm(ker.grad_x(x, y));
      ratio = g * std::pow(dist(x, y), dim - 2.0 * s + 1.0) *
              std::pow(boundary_distance(dom, x), 1.0 - s);
    } else {
      throw std::invalid_argument("ratio_scan: unknown estimate id " + estimate_id);
    }
    if (!std::isfinite(ratio)) continue;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++got;
  }
  rep.samples = got;
  return rep;
}

} // namespace fracgrad
