#include "fracgrad/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracgrad {

namespace {
constexpr double kPi = std::numbers::pi;
}

Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Point operator*(double k, Point p) { return {k * p.x, k * p.y, k * p.z}; }
double dot(Point a, Point b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Point p) { return std::sqrt(dot(p, p)); }
double dist(Point a, Point b) { return norm(a - b); }

double Domain::volume() const { return dim == 2 ? kPi : 4.0 * kPi / 3.0; }

double boundary_distance(const Domain &dom, Point p) {
  (void)dom;
  return std::max(0.0, 1.0 - norm(p));
}

QuadratureGrid build_grid(const Domain &dom, int n_radial, int n_angular, double grading,
                          int n_polar) {
  if (n_radial < 4 || n_angular < 4) throw std::invalid_argument("grid resolution too small");
  if (grading < 1.0) throw std::invalid_argument("grading must be >= 1");
  if (dom.dim == 3 && n_polar == 0) n_polar = n_angular / 2;
  if (dom.dim == 3 && n_polar < 4) throw std::invalid_argument("n_polar too small");

  QuadratureGrid g;
  g.domain = dom;
  g.n_radial = n_radial;
  g.n_angular = n_angular;
  g.n_polar = dom.dim == 3 ? n_polar : 0;
  g.grading = grading;

  auto rmap = [&](double t) { return 1.0 - std::pow(1.0 - t, grading); };

  g.r_ring.resize(n_radial);
  std::vector<double> radial_mass(n_radial);
  for (int i = 0; i < n_radial; ++i) {
    double t0 = double(i) / n_radial, t1 = double(i + 1) / n_radial;
    double r0 = rmap(t0), r1 = rmap(t1);
    g.r_ring[i] = rmap((t0 + t1) / 2);
    // exact cell mass of the radial measure r^{d-1} dr
    radial_mass[i] = dom.dim == 2 ? (r1 * r1 - r0 * r0) / 2.0
                                  : (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
  }

  if (dom.dim == 2) {
    double wang = 2.0 * kPi / n_angular;
    g.nodes.reserve(std::size_t(n_radial) * n_angular);
    for (int i = 0; i < n_radial; ++i) {
      double r = g.r_ring[i];
      for (int j = 0; j < n_angular; ++j) {
        double th = 2.0 * kPi * (j + 0.5) / n_angular;
        g.nodes.push_back({r * std::cos(th), r * std::sin(th), 0.0});
        g.weights.push_back(radial_mass[i] * wang);
        g.delta.push_back(1.0 - r);
        g.ring.push_back(i);
      }
    }
  } else {
    double wang = 2.0 * kPi / n_angular;
    double wmu = 2.0 / n_polar;
    for (int i = 0; i < n_radial; ++i) {
      double r = g.r_ring[i];
      for (int k = 0; k < n_polar; ++k) {
        double mu = -1.0 + 2.0 * (k + 0.5) / n_polar;
        double sphi = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < n_angular; ++j) {
          double th = 2.0 * kPi * (j + 0.5) / n_angular;
          g.nodes.push_back({r * sphi * std::cos(th), r * sphi * std::sin(th), r * mu});
          g.weights.push_back(radial_mass[i] * wmu * wang);
          g.delta.push_back(1.0 - r);
          g.ring.push_back(i);
        }
      }
    }
  }
  return g;
}

long long QuadratureGrid::locate(Point p) const {
  double r = norm(p);
  if (r >= 1.0) return -1;
  double t = 1.0 - std::pow(1.0 - r, 1.0 / grading);
  int i = std::min(n_radial - 1, std::max(0, int(t * n_radial)));
  double th = std::atan2(p.y, p.x);
  if (th < 0) th += 2.0 * kPi;
  int j = std::min(n_angular - 1, std::max(0, int(th / (2.0 * kPi) * n_angular)));
  if (domain.dim == 2) return (long long)i * n_angular + j;
  double mu = r > 0 ? p.z / r : 0.0;
  int k = std::min(n_polar - 1, std::max(0, int((mu + 1.0) / 2.0 * n_polar)));
  return ((long long)i * n_polar + k) * n_angular + j;
}

double QuadratureGrid::radial_width(double r) const {
  double t = 1.0 - std::pow(1.0 - std::min(r, 1.0 - 1e-14), 1.0 / grading);
  double dtdr = grading * std::pow(1.0 - t, grading - 1.0);
  return std::max(dtdr / n_radial, 1.0 / double(n_radial) / n_radial);
}

double QuadratureGrid::cell_extent(double r) const {
  double arc = 2.0 * kPi * std::max(r, 0.05) / n_angular;
  return std::max(radial_width(r), arc);
}

double exact_delta_power_integral(const Domain &dom, double a) {
  if (a <= -1.0) throw std::invalid_argument("delta power not integrable");
  // int_B delta^a = |S^{d-1}| int_0^1 r^{d-1} (1-r)^a dr = |S^{d-1}| B(d, a+1)
  if (dom.dim == 2) return 2.0 * kPi / ((a + 1.0) * (a + 2.0));
  return 4.0 * kPi * 2.0 / ((a + 1.0) * (a + 2.0) * (a + 3.0));
}

} // namespace fracgrad
