#ifndef FRACGRAD_GEOMETRY_HPP
#define FRACGRAD_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace fracgrad {

struct Point {
  double x = 0, y = 0, z = 0;
  double &operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

Point operator+(Point a, Point b);
Point operator-(Point a, Point b);
Point operator*(double k, Point p);
double dot(Point a, Point b);
double norm(Point p);
double dist(Point a, Point b);

/// Unit ball centered at the origin; dim is 2 (disk) or 3.
struct Domain {
  int dim = 2;
  double volume() const;  // pi or 4pi/3
};

/// dist(x, boundary), clamped to 0 outside: 1 - |x|.
double boundary_distance(const Domain &dom, Point p);

/// Boundary-graded polar/spherical product grid.  Radial cells are uniform in
/// t with the map r = 1 - (1-t)^grading, so node density grows toward the
/// boundary; each node carries the exact measure of its cell (the radial
/// factor integrates in closed form), hence the total weight equals |Omega|
/// to machine precision.
struct QuadratureGrid {
  Domain domain;
  int n_radial = 0, n_angular = 0, n_polar = 0;
  double grading = 1.0;

  std::vector<Point> nodes;
  std::vector<double> weights;
  std::vector<double> delta;
  std::vector<int> ring;       // radial cell index, 0 innermost
  std::vector<double> r_ring;  // node radius per ring

  std::size_t size() const { return nodes.size(); }
  bool on_outer_ring(std::size_t i) const { return ring[i] == n_radial - 1; }
  bool on_outer_rings(std::size_t i, int k) const { return ring[i] >= n_radial - k; }

  /// Index of the node whose cell contains p, or -1 outside the ball.
  long long locate(Point p) const;

  /// Characteristic cell extent (radial width, arc length) at radius r.
  double cell_extent(double r) const;

  /// Radial cell width alone at radius r (the gradient step-rule scale).
  double radial_width(double r) const;
};

QuadratureGrid build_grid(const Domain &dom, int n_radial, int n_angular, double grading,
                          int n_polar = 0);

/// Nodal values over a grid.
struct GridFunction {
  const QuadratureGrid *grid = nullptr;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(const QuadratureGrid &g) : grid(&g), values(g.size(), 0.0) {}

  double &operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  template <class F> static GridFunction from(const QuadratureGrid &g, F f) {
    GridFunction gf(g);
    for (std::size_t i = 0; i < g.size(); ++i) gf.values[i] = f(g.nodes[i]);
    return gf;
  }
};

/// Exact integral of delta^a over the unit ball (closed form via the radial
/// Beta integral); requires a > -1.
double exact_delta_power_integral(const Domain &dom, double a);

} // namespace fracgrad

#endif
