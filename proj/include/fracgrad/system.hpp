#ifndef FRACGRAD_SYSTEM_HPP
#define FRACGRAD_SYSTEM_HPP

#include "fracgrad/norms.hpp"
#include "fracgrad/poisson.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fracgrad {

/// Budget function Upsilon(alpha) = alpha^{1/pq} - C~ alpha: maximizer ell,
/// maximum Lambda*, and the admissible-data bound A = Lambda*/C~.
struct SmallnessBudget {
  double pq = 0;
  double c_tilde = 0;
  double ell = 0;
  double lambda_star = 0;
  double budget_a = 0;
  double h_radius = 0;  // ell^{1/pq}
};
SmallnessBudget smallness_budget(double pq, double c_tilde);

/// Cross-check of the closed forms by golden-section maximization.
double maximize_upsilon_numerically(double pq, double c_tilde, double tol = 1e-8);

struct SystemConfig {
  double s1 = 0.75, s2 = 0.9;
  double p = 1.125, q = 1.25;
  double m = 2.0, sigma = 2.0;
  double lambda = 0.0, mu = 0.0;
  double r = 4.0;          // H-set norm exponent, qm < r < sigma-hat
  double damping = 0.5;    // theta_d
  int max_iters = 200;
  double tol = 1e-6;
  double blowup_cap = 0.0; // 0: 1e6 x initial right-hand-side norm
  bool zero_gradient_terms = false; // linear sanity mode
  // p = q = 1 runs use the rescaled source form lambda(|grad v| + f),
  // mu(|grad u| + g) of the companion theorem.
  bool rescaled_pq1 = false;
};

enum class Outcome { Converged, Diverged, Inconclusive };
std::string outcome_str(Outcome o);

struct IterationRecord {
  int iter = 0;
  double norm_grad_u = 0;   // || |grad u| delta^{1-s1} ||_{p sigma}
  double norm_grad_v_r = 0; // || |grad v| delta^{1-s1} ||_r
  double h_norm = 0;        // || grad(v delta^{1-s1}) ||_r
  bool in_H = false;
  double diff_norm = 0;     // relative successive difference in the H norm
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  Outcome outcome = Outcome::Inconclusive;
  int diverged_at = -1;
};

struct PicardResult {
  IterationTrace trace;
  std::vector<double> u, v;
  std::vector<Point> grad_u, grad_v;  // final-iterate quadrature gradients
  double trimmed_measure = 0;
};

/// Both solve operators on one grid; reused across runs and bisection probes.
class SystemSolver {
public:
  SystemSolver(const QuadratureGrid &grid, double s1, double s2,
               const SolveOptions &opts = probe_quadrature());

  const QuadratureGrid &grid() const { return *grid_; }

  /// Damped alternation u <- S_{s1}(|grad v|^q + lambda f),
  /// v <- (1-theta) v + theta S_{s2}(|grad u|^p + mu g), started at v = 0,
  /// with gradient powers on the ring-trimmed grid re-extended by zero.
  PicardResult picard_solve(const SystemConfig &cfg, const GridFunction &f, const GridFunction &g,
                            double h_radius) const;

  /// Empirical Step-2 constant: max over a family of seed fields of
  /// H(T(phi)) / (H(phi)^{pq} + lambda^p ||f||_m^p + mu ||g||_sigma).
  double calibrate_c_tilde(const SystemConfig &cfg, const GridFunction &f,
                           const GridFunction &g) const;

private:
  const QuadratureGrid *grid_;
  double s1_, s2_;
  std::unique_ptr<SolveOperator> op1_, op2_;

  friend struct SystemProbe;
  void apply_T(const SystemConfig &cfg, const GridFunction &f, const GridFunction &g,
               const std::vector<Point> &grad_v, std::vector<double> &u,
               std::vector<Point> &grad_u, std::vector<double> &v_next,
               std::vector<Point> &grad_v_next) const;
};

/// lambda^p ||f||_m^p + mu ||g||_sigma <= A with grid norms.
bool pi_membership(const SmallnessBudget &budget, const SystemConfig &cfg, const GridFunction &f,
                   const GridFunction &g);

struct BisectResult {
  bool ok = false;
  double lambda_hat = 0;
  double lo = 0, hi = 0;
  std::string diagnostic;
  int runs = 0;
};

/// Smallest lambda where the run flips from Converged to Diverged, to 5%
/// relative bracket width; aborts on non-monotone classification.
BisectResult threshold_bisect(const SystemSolver &solver, const SystemConfig &base,
                              const GridFunction &f, const GridFunction &g, double lambda_lo,
                              double lambda_hi, double h_radius);

/// Nodal |x|^{-(N-eps)/m}; the grid never places a node at the origin.
GridFunction singular_datum(double m, double eps, const QuadratureGrid &grid);
/// Closed-form L^m norm of that datum over the unit ball.
double singular_datum_exact_norm(int dim, double m, double eps);

struct ResidualRow {
  std::string test_id;
  double residual1 = 0;  // first equation
  double residual2 = 0;  // second equation
};
struct ResidualReport {
  std::vector<ResidualRow> rows;
  double max_residual = 0;
};

/// Pairs the discrete solution against smooth compactly-supported test
/// functions, with the fractional Laplacian of each test function computed by
/// the principal-value oracle.  The gradient terms honor
/// cfg.zero_gradient_terms (the linear Poisson sanity mode).
ResidualReport verify_weak_solution(const SystemSolver &solver, const SystemConfig &cfg,
                                    const GridFunction &f, const GridFunction &g,
                                    const PicardResult &result);

} // namespace fracgrad

#endif
