#ifndef FRACGRAD_POISSON_HPP
#define FRACGRAD_POISSON_HPP

#include "fracgrad/geometry.hpp"
#include "fracgrad/kernel.hpp"

#include <functional>
#include <vector>

namespace fracgrad {

struct SolveOptions {
  double tol = 1e-6;          // relative tolerance of the local patch correction
  double patch_factor = 2.0;  // patch radius in cell extents
  bool with_gradient = false;
  int max_patch_level = 4;
};

struct PoissonSolve {
  double s = 0;
  std::vector<Point> targets;
  std::vector<double> values;
  std::vector<Point> gradients;  // filled when requested
};

/// w(x) = int_Omega G_s(x,y) h(y) dy by lumped quadrature with the near-field
/// re-integrated on a boundary-clipped polar patch around each target.
PoissonSolve solve(const GreenKernel &ker, const QuadratureGrid &grid, const GridFunction &h,
                   const std::vector<Point> &targets, const SolveOptions &opts = {});

/// Same with the datum clamped to [-n, n].
PoissonSolve solve_truncated(const GreenKernel &ker, const QuadratureGrid &grid,
                             const GridFunction &h, double n, const std::vector<Point> &targets,
                             const SolveOptions &opts = {});

/// grad w by the same quadrature against grad_x G.  Targets closer to the
/// boundary than 2 local cells are flagged (entry set to NaN) — callers use
/// the ring-trimmed weighted convention instead.
std::vector<Point> gradient(const GreenKernel &ker, const QuadratureGrid &grid,
                            const GridFunction &h, const std::vector<Point> &targets,
                            const SolveOptions &opts = {});

/// Riesz potential J_lambda(g)(x) = int g(y)/|x-y|^lambda dy, 0 < lambda < N.
std::vector<double> riesz_potential(double lambda_exp, const QuadratureGrid &grid,
                                    const GridFunction &g, const std::vector<Point> &targets,
                                    const SolveOptions &opts = {});

/// Shared-row solves for a whole datum family (each quadrature row is
/// assembled once and dotted with every datum).
struct MultiSolve {
  std::vector<std::vector<double>> values;   // [datum][target]
  std::vector<std::vector<Point>> gradients; // filled when requested
};
MultiSolve solve_many(const GreenKernel &ker, const QuadratureGrid &grid,
                      const std::vector<const GridFunction *> &hs,
                      const std::vector<Point> &targets, const SolveOptions &opts = {});
std::vector<std::vector<double>> riesz_many(double lambda_exp, const QuadratureGrid &grid,
                                            const std::vector<const GridFunction *> &gs,
                                            const std::vector<Point> &targets,
                                            const SolveOptions &opts = {});

/// The regularity operator: kernel exponent N - (2 s2 - s1 - a(1-s1)) for
/// a >= 1 and N - 2 s2 + 1 for 0 <= a < 1 (s1 = s2 gives the single-order
/// operator).  Throws when the exponent leaves (0, N).
std::vector<double> p_operator(double s1, double s2, double a, const QuadratureGrid &grid,
                               const GridFunction &g, const std::vector<Point> &targets,
                               const SolveOptions &opts = {});
double p_operator_exponent(double s1, double s2, double a, int dim);

/// Dense solve operator on the grid's own nodes for repeated application
/// (fixed-point iterations): value and gradient rows with the patch
/// correction folded into the coefficients.  Memory is O(n^2).
class SolveOperator {
public:
  SolveOperator(const GreenKernel &ker, const QuadratureGrid &grid, const SolveOptions &opts = {});

  const QuadratureGrid &grid() const { return *grid_; }
  double s() const { return s_; }

  void apply(const std::vector<double> &h, std::vector<double> &w) const;
  /// Gradient at every node; the caller decides which rings to trust.
  void apply_gradient(const std::vector<double> &h, std::vector<Point> &gw) const;

private:
  const QuadratureGrid *grid_;
  double s_;
  std::size_t n_;
  std::vector<float> val_, gx_, gy_, gz_;  // row-major n x n
};

/// Normalization constant of the singular-integral definition.
double pv_constant(int dim, double s);

/// Principal-value evaluation of the fractional Laplacian of a callable at an
/// interior point: symmetrized near field, direct far field, exact exterior
/// tail.  Verification-only oracle; not used by the solver.
double pv_fractional_laplacian(int dim, double s, const std::function<double(Point)> &phi, Point x,
                               int n_radial = 48, int n_angular = 96);

/// The torsion benchmark: coefficient c with (-Delta)^s [c (1-|x|^2)^s] = 1.
double torsion_coefficient(int dim, double s);
double torsion_value(int dim, double s, Point x);

} // namespace fracgrad

#endif
