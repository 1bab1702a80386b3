#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracgrad/system.hpp"

#include <cmath>
#include <numbers>

using namespace fracgrad;

namespace {
constexpr double kPi = std::numbers::pi;

// one shared solver for the whole suite (operator assembly dominates runtime)
const QuadratureGrid &shared_grid() {
  static QuadratureGrid g = build_grid(Domain{2}, 40, 48, 2.0);
  return g;
}
const SystemSolver &shared_solver() {
  static SystemSolver s(shared_grid(), 0.75, 0.9);
  return s;
}
const GridFunction &ones() {
  static GridFunction f = GridFunction::from(shared_grid(), [](Point) { return 1.0; });
  return f;
}

// the pinned gate-passing pair from the existence sweep
SystemConfig golden_config() {
  SystemConfig cfg;
  cfg.p = 51.0 / 50.0;
  cfg.q = 17.0 / 10.0;
  cfg.m = 2.0;
  cfg.sigma = 2.0;
  cfg.r = 4.0; // qm = 3.4 < r < sigma-hat = 9.76
  cfg.damping = 0.5;
  cfg.max_iters = 200;
  cfg.tol = 1e-6;
  cfg.lambda = 3.0;
  cfg.mu = 0.02;
  return cfg;
}
} // namespace

TEST_CASE("smallness budget: closed form, cross-check, monotonicity") {
  auto b = smallness_budget(2.0, 0.5);
  CHECK(b.ell == doctest::Approx(1.0));
  CHECK(b.lambda_star == doctest::Approx(0.5));
  CHECK(b.budget_a == doctest::Approx(1.0));

  for (double pq : {1.5, 2.0})
    for (double ct : {0.3, 1.0, 2.5}) {
      auto bb = smallness_budget(pq, ct);
      CHECK(bb.lambda_star == doctest::Approx(maximize_upsilon_numerically(pq, ct)).epsilon(1e-6));
      CHECK(bb.lambda_star > 0);
    }
  // pq = 1 + 1e-6: finite output matching the numeric maximization (the
  // closed form is only representable in doubles for C~ near 1/pq)
  {
    auto bb = smallness_budget(1.0 + 1e-6, 1.0);
    CHECK(std::isfinite(bb.lambda_star));
    CHECK(bb.lambda_star > 0);
    CHECK(bb.lambda_star ==
          doctest::Approx(maximize_upsilon_numerically(1.0 + 1e-6, 1.0, 1e-12)).epsilon(1e-4));
  }

  // larger C~ shrinks ell and Lambda*
  auto b1 = smallness_budget(1.5, 0.5), b2 = smallness_budget(1.5, 1.0);
  CHECK(b2.ell < b1.ell);
  CHECK(b2.lambda_star < b1.lambda_star);

  CHECK_THROWS_AS(smallness_budget(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(smallness_budget(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("pi membership: boundary, monotone scaling, exact constant norm") {
  auto cfg = golden_config();
  SmallnessBudget b = smallness_budget(cfg.p * cfg.q, 0.114);
  SystemConfig zero = cfg;
  zero.lambda = 0;
  zero.mu = 0;
  CHECK(pi_membership(b, zero, ones(), ones()));
  // ||1||_{L^2} = sqrt(pi) enters exactly
  double nf = weighted_lp(ones(), {2.0, 0.0});
  CHECK(nf == doctest::Approx(std::sqrt(kPi)).epsilon(1e-7));
  // monotone: shrinking both parameters preserves membership
  SystemConfig big = cfg;
  big.lambda = 5.0;
  big.mu = 0.5;
  if (pi_membership(b, big, ones(), ones())) {
    SystemConfig small = big;
    small.lambda = 2.0;
    small.mu = 0.1;
    CHECK(pi_membership(b, small, ones(), ones()));
  }
}

TEST_CASE("zero data: T(0) = 0 and one-step convergence") {
  auto cfg = golden_config();
  cfg.lambda = 0;
  cfg.mu = 0;
  auto res = shared_solver().picard_solve(cfg, ones(), ones(), 1.0);
  CHECK(res.trace.outcome == Outcome::Converged);
  for (double x : res.v) CHECK(x == 0.0);
  for (double x : res.u) CHECK(x == 0.0);
}

TEST_CASE("golden run: converges inside H; thousandfold lambda diverges") {
  auto cfg = golden_config();
  const auto &solver = shared_solver();
  double ct = solver.calibrate_c_tilde(cfg, ones(), ones());
  auto budget = smallness_budget(cfg.p * cfg.q, ct);
  // deep inside Pi: the data combination stays under a third of the budget
  double nf = weighted_lp(ones(), {cfg.m, 0.0});
  double lhsPi = std::pow(cfg.lambda, cfg.p) * std::pow(nf, cfg.p) + cfg.mu * nf;
  CHECK(lhsPi < budget.budget_a / 3.0);
  CHECK(pi_membership(budget, cfg, ones(), ones()));

  auto res = solver.picard_solve(cfg, ones(), ones(), budget.h_radius);
  REQUIRE(res.trace.outcome == Outcome::Converged);
  CHECK(int(res.trace.records.size()) <= 200);
  for (const auto &rec : res.trace.records) CHECK(rec.in_H); // T(H) subset H observed
  CHECK(res.trimmed_measure > 0);

  // identical config reruns bit-identically
  auto res2 = solver.picard_solve(cfg, ones(), ones(), budget.h_radius);
  REQUIRE(res2.trace.records.size() == res.trace.records.size());
  for (std::size_t k = 0; k < res.trace.records.size(); ++k) {
    CHECK(res2.trace.records[k].norm_grad_v_r == res.trace.records[k].norm_grad_v_r);
    CHECK(res2.trace.records[k].diff_norm == res.trace.records[k].diff_norm);
  }

  SystemConfig big = cfg;
  big.lambda = cfg.lambda * 1000.0;
  auto resbig = solver.picard_solve(big, ones(), ones(), budget.h_radius);
  CHECK(resbig.trace.outcome == Outcome::Diverged);
  CHECK_FALSE(pi_membership(budget, big, ones(), ones()));
}

TEST_CASE("monotone iterates for proportional data") {
  auto cfg = golden_config();
  cfg.lambda = 1.0;
  cfg.mu = 0.02;
  cfg.max_iters = 12;
  cfg.tol = 0; // run all 12 iterations
  GridFunction two(shared_grid());
  for (std::size_t i = 0; i < two.size(); ++i) two[i] = 2.0;
  auto ra = shared_solver().picard_solve(cfg, ones(), ones(), 1e9);
  auto rb = shared_solver().picard_solve(cfg, two, ones(), 1e9);
  for (std::size_t i = 0; i < ra.v.size(); ++i) {
    CHECK(rb.u[i] >= ra.u[i] - 1e-12);
    CHECK(rb.v[i] >= ra.v[i] - 1e-12);
  }
}

TEST_CASE("threshold bisection: bracket, scaling law, endpoint validation") {
  auto cfg = golden_config();
  const auto &solver = shared_solver();
  double ct = solver.calibrate_c_tilde(cfg, ones(), ones());
  auto budget = smallness_budget(cfg.p * cfg.q, ct);

  auto bis = threshold_bisect(solver, cfg, ones(), ones(), 3.0, 3000.0, budget.h_radius);
  REQUIRE(bis.ok);
  CHECK((bis.hi - bis.lo) / bis.lo <= 0.05);
  CHECK(bis.lambda_hat > 3.0);
  CHECK(bis.lambda_hat < 3000.0);

  // doubling f halves the threshold: the datum enters only as lambda f
  GridFunction two(shared_grid());
  for (std::size_t i = 0; i < two.size(); ++i) two[i] = 2.0;
  auto bis2 = threshold_bisect(solver, cfg, two, ones(), 1.5, 1500.0, budget.h_radius);
  REQUIRE(bis2.ok);
  CHECK(bis2.lambda_hat == doctest::Approx(bis.lambda_hat / 2.0).epsilon(0.06));

  // invalid bracket reported, not crashed
  auto bad = threshold_bisect(solver, cfg, ones(), ones(), 2500.0, 3000.0, budget.h_radius);
  CHECK_FALSE(bad.ok);
  CHECK(!bad.diagnostic.empty());
}

TEST_CASE("singular datum: nodal values, exact norm, monotone exponent") {
  const auto &grid = shared_grid();
  auto f = singular_datum(2.0, 0.1, grid);
  for (double v : f.values) CHECK(std::isfinite(v));
  // grid L^m norm approaches the closed-form radial integral
  double exact = singular_datum_exact_norm(2, 2.0, 0.1);
  double onGrid = weighted_lp(f, {2.0, 0.0});
  CHECK(std::abs(onGrid - exact) / exact < 1e-2);
  // larger m flattens the datum
  auto f4 = singular_datum(4.0, 0.1, grid);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f4[i] <= f[i] + 1e-12);
  CHECK_THROWS_AS(singular_datum(2.0, 5.0, grid), std::invalid_argument);
}

TEST_CASE("weak-solution residuals: zero run, linear mode, golden run") {
  auto cfg = golden_config();
  const auto &solver = shared_solver();

  // zero data: both sides vanish identically
  SystemConfig zero = cfg;
  zero.lambda = 0;
  zero.mu = 0;
  auto rz = solver.picard_solve(zero, ones(), ones(), 1.0);
  auto repz = verify_weak_solution(solver, zero, ones(), ones(), rz);
  CHECK(repz.max_residual < 1e-12);

  // gradient terms switched off: linear Poisson residual < 1e-2
  SystemConfig lin = cfg;
  lin.zero_gradient_terms = true;
  lin.lambda = 1.0;
  lin.mu = 1.0;
  auto rl = solver.picard_solve(lin, ones(), ones(), 1e9);
  REQUIRE(rl.trace.outcome == Outcome::Converged);
  auto repl = verify_weak_solution(solver, lin, ones(), ones(), rl);
  CHECK(repl.rows.size() >= 5);
  CHECK(repl.max_residual < 1e-2);

  // converged golden run: quadrature-limited residual < 5e-2
  double ct = solver.calibrate_c_tilde(cfg, ones(), ones());
  auto budget = smallness_budget(cfg.p * cfg.q, ct);
  auto res = solver.picard_solve(cfg, ones(), ones(), budget.h_radius);
  REQUIRE(res.trace.outcome == Outcome::Converged);
  auto rep = verify_weak_solution(solver, cfg, ones(), ones(), res);
  CHECK(rep.max_residual < 5e-2);
}

TEST_CASE("rescaled p = q = 1 runs converge for small parameters") {
  SystemConfig cfg;
  cfg.p = 1;
  cfg.q = 1;
  cfg.m = 2;
  cfg.sigma = 3.0 / 2.0;
  cfg.r = 3.0;
  cfg.rescaled_pq1 = true;
  cfg.lambda = 0.05;
  cfg.mu = 0.05;
  auto res = shared_solver().picard_solve(cfg, ones(), ones(), 1e9);
  CHECK(res.trace.outcome == Outcome::Converged);
  for (double x : res.v) CHECK(x >= 0.0);
}
