#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracgrad/geometry.hpp"
#include "fracgrad/kernel.hpp"

#include <cmath>
#include <numbers>

using namespace fracgrad;

namespace {
constexpr double kPi = std::numbers::pi;

double torsion_coefficient(int dim, double s) {
  return std::tgamma(dim / 2.0) /
         (std::pow(4.0, s) * std::tgamma(dim / 2.0 + s) * std::tgamma(1.0 + s));
}
} // namespace

TEST_CASE("profile: Beta identity agrees with adaptive quadrature") {
  for (int dim : {2, 3})
    for (double s : {0.6, 0.75, 0.9})
      for (double r0 : {1e-6, 0.03, 1.0, 17.0, 4e5}) {
        GreenKernel ker(dim, s);
        double a = ker.profile(r0), b = ker.profile_by_quadrature(r0);
        CHECK(std::abs(a - b) / std::abs(b) < 1e-9);
      }
}

TEST_CASE("symmetry and r0 swap invariance") {
  GreenKernel ker(2, 0.75);
  for (int k = 0; k < 10000; ++k) {
    Point x = halton_ball_point(2, 2 * k + 1);
    Point y = halton_ball_point(2, 2 * k + 700001);
    if (dist(x, y) < 1e-6) continue;
    CHECK(ker.r0(x, y) == doctest::Approx(ker.r0(y, x)).epsilon(1e-14));
    double gxy = ker(x, y), gyx = ker(y, x);
    CHECK(std::abs(gxy - gyx) < 1e-12 * std::max(1.0, std::abs(gxy)));
    CHECK(gxy > 0.0);
  }
}

TEST_CASE("kernel vanishes outside and throws on the diagonal") {
  GreenKernel ker(2, 0.75);
  CHECK(ker({1.2, 0, 0}, {0.1, 0, 0}) == 0.0);
  CHECK(ker({0.1, 0, 0}, {0, 1.7, 0}) == 0.0);
  CHECK_THROWS_AS(ker({0.1, 0.2, 0}, {0.1, 0.2, 0}), std::domain_error);
  CHECK_THROWS_AS(GreenKernel(2, 0.4), std::invalid_argument);
}

TEST_CASE("boundary rate: G(x,y)/delta(y)^s stabilizes along a ray") {
  GreenKernel ker(2, 0.75);
  Point x{0.2, 0.1, 0};
  double prev = 0;
  std::vector<double> ratios;
  for (double d : {1e-2, 1e-3, 1e-4, 1e-5}) {
    Point y{1.0 - d, 0, 0};
    ratios.push_back(ker(x, y) / std::pow(d, 0.75));
  }
  prev = ratios[0];
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    CHECK(ratios[i] > 0);
    CHECK(std::abs(ratios[i] - prev) / prev < 0.2); // tends to a finite positive limit
    prev = ratios[i];
  }
  CHECK(std::abs(ratios[3] - ratios[2]) / ratios[2] < 2e-2);
}

TEST_CASE("integral of G(0,.) reproduces the torsion value") {
  for (int dim : {2, 3})
    for (double s : {0.6, 0.75}) {
      GreenKernel ker(dim, s);
      Domain dom{dim};
      auto g = dim == 2 ? build_grid(dom, 160, 128, 2.0) : build_grid(dom, 112, 40, 2.0, 24);
      double sum = 0;
      Point origin{0, 0, 0};
      for (std::size_t i = 0; i < g.size(); ++i) sum += g.weights[i] * ker(origin, g.nodes[i]);
      double expected = torsion_coefficient(dim, s);
      CHECK(std::abs(sum - expected) / expected < 1e-2);
    }
}

TEST_CASE("comparison kernels: saturation and symmetry") {
  double s = 0.75;
  // both deltas exceed |x-y|: value reduces to |x-y|^{2s-N}
  Point x{0.1, 0, 0}, y{0.2, 0.1, 0};
  double e = dist(x, y);
  CHECK(comparison_first(x, y, s, 2) == doctest::Approx(std::pow(e, 2 * s - 2)));
  // second argument on the boundary: kernel vanishes
  Point b{1.0, 0, 0};
  CHECK(comparison_first(x, b, s, 2) == doctest::Approx(0.0));
  CHECK(comparison_first(x, y, s, 2) == doctest::Approx(comparison_first(y, x, s, 2)));
  // eta -> 1 limit of the split bound equals delta^s(y)|x-y|^{s-N}
  Point u{0.4, -0.3, 0}, v{-0.5, 0.2, 0};
  auto m999 = comparison_menu(u, v, s, 2, 0.999);
  double target = std::pow(boundary_distance(Domain{2}, v), s) * std::pow(dist(u, v), s - 2);
  CHECK(m999.eta_split == doctest::Approx(target).epsilon(2e-2));
  // delta(x) = delta(y) = |x-y|: all three min-candidates coincide
  double dd = 0.3;
  Point c1{1 - dd, 0, 0}, c2{1 - 2 * dd, 0, 0}; // same radius, distance dd
  auto mm = comparison_menu(c1, c2, s, 2, 0.5);
  CHECK(boundary_distance(Domain{2}, c1) == doctest::Approx(dist(c1, c2)));
  CHECK(mm.min_bound == doctest::Approx(std::pow(dist(c1, c2), 2 * s - 2)).epsilon(1e-9));
  CHECK_THROWS_AS(comparison_menu(x, y, s, 2, 1.5), std::invalid_argument);
}

TEST_CASE("analytic gradient matches finite differences") {
  for (double s : {0.6, 0.75, 0.9}) {
    GreenKernel ker(2, s);
    int tested = 0;
    for (int k = 0; k < 600 && tested < 200; ++k) {
      Point x = halton_ball_point(2, 3 * k + 11);
      Point y = halton_ball_point(2, 3 * k + 900001);
      if (dist(x, y) < 5e-2) continue;
      if (boundary_distance(Domain{2}, x) < 5e-2) continue;
      bool reliable = false;
      Point fd = ker.grad_x_fd(x, y, &reliable);
      if (!reliable) continue;
      Point an = ker.grad_x(x, y);
      CHECK(norm(an - fd) / std::max(norm(fd), 1e-12) < 1e-4);
      ++tested;
    }
    CHECK(tested >= 100);
  }
}

TEST_CASE("gradient is radial for points on a common diameter") {
  GreenKernel ker(2, 0.75);
  Point x{0.3, 0, 0}, y{-0.5, 0, 0};
  Point g = ker.grad_x(x, y);
  CHECK(std::abs(g.y) < 1e-12 * std::max(1.0, std::abs(g.x)));
}

TEST_CASE("ratio scans: bounded and stable under doubling") {
  for (double s : {0.6, 0.75, 0.9}) {
    GreenKernel ker(2, s);
    auto r1 = ratio_scan(ker, "2.2", 10000);
    CHECK(r1.min_ratio > 0);
    CHECK(r1.max_ratio / r1.min_ratio < 100.0);
    auto r2 = ratio_scan(ker, "2.2", 20000);
    CHECK(std::abs(r2.max_ratio - r1.max_ratio) / r1.max_ratio < 0.05);
    CHECK(std::abs(r2.min_ratio - r1.min_ratio) / r1.min_ratio < 0.05);

    auto g1 = ratio_scan(ker, "2.6", 10000);
    auto g2 = ratio_scan(ker, "2.6", 20000);
    CHECK(std::isfinite(g1.max_ratio));
    CHECK(g2.max_ratio <= g1.max_ratio * 1.05 + 1e-12);
    CHECK(g1.max_ratio <= g2.max_ratio * 1.05 + 1e-12);
  }
  // interior-only scan sits near the pure-distance regime
  GreenKernel ker(2, 0.75);
  auto rb = ratio_scan(ker, "2.3", 5000);
  CHECK(rb.max_ratio < 10.0);
  CHECK_THROWS_AS(ratio_scan(ker, "2.2", 10), std::invalid_argument);
  CHECK_THROWS_AS(ratio_scan(ker, "nope", 500), std::invalid_argument);
}
