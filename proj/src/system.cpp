#include "fracgrad/system.hpp"

#include "fracgrad/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracgrad {

namespace {
constexpr double kPi = std::numbers::pi;
}

SmallnessBudget smallness_budget(double pq, double c_tilde) {
  if (!(pq > 1.0)) throw std::invalid_argument("smallness_budget: pq must exceed 1");
  if (!(c_tilde > 0.0)) throw std::invalid_argument("smallness_budget: C~ must be positive");
  SmallnessBudget b;
  b.pq = pq;
  b.c_tilde = c_tilde;
  // log-space evaluation: ell = (pq C~)^{pq/(1-pq)} blows up as pq -> 1+, and
  // Lambda* = ell^{1/pq} (1 - 1/pq) exactly (the C~ ell term cancels to 1/pq).
  double log_ell = pq / (1.0 - pq) * std::log(pq * c_tilde);
  b.ell = std::exp(log_ell);
  b.h_radius = std::exp(log_ell / pq);
  b.lambda_star = b.h_radius * (1.0 - 1.0 / pq);
  b.budget_a = b.lambda_star / c_tilde;
  return b;
}

double maximize_upsilon_numerically(double pq, double c_tilde, double tol) {
  auto ups = [&](double a) { return std::pow(a, 1.0 / pq) - c_tilde * a; };
  double lo = 1e-12, hi = 1.0;
  while (ups(hi * 2.0) > ups(hi)) hi *= 2.0; // bracket the maximum
  hi *= 2.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  while (hi - lo > tol) {
    if (ups(a) < ups(b)) {
      lo = a;
      a = b;
      b = lo + gr * (hi - lo);
    } else {
      hi = b;
      b = a;
      a = hi - gr * (hi - lo);
    }
  }
  return ups((lo + hi) / 2.0);
}

std::string outcome_str(Outcome o) {
  switch (o) {
    case Outcome::Converged: return "Converged";
    case Outcome::Diverged: return "Diverged";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

SystemSolver::SystemSolver(const QuadratureGrid &grid, double s1, double s2,
                           const SolveOptions &opts)
    : grid_(&grid), s1_(s1), s2_(s2) {
  if (!(s1 > 0.5 && s1 < 1.0 && s2 > 0.5 && s2 < 1.0 && s1 < s2))
    throw std::invalid_argument("SystemSolver: needs 1/2 < s1 < s2 < 1");
  GreenKernel k1(grid.domain.dim, s1), k2(grid.domain.dim, s2);
  op1_ = std::make_unique<SolveOperator>(k1, grid, opts);
  op2_ = std::make_unique<SolveOperator>(k2, grid, opts);
}

namespace {

// |grad .| with the outermost ring zeroed (re-extension convention)
void trimmed_magnitude(const QuadratureGrid &g, const std::vector<Point> &grad,
                       std::vector<double> &mag) {
  mag.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.on_outer_ring(i)) mag[i] = norm(grad[i]);
}

// || grad( v delta^{1-s1} ) ||_r on the trimmed grid, by the product rule
// with grad delta = -x/|x|.
double h_norm_of(const QuadratureGrid &g, const std::vector<double> &v,
                 const std::vector<Point> &grad_v, double s1, double r) {
  GridFunction mag(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.on_outer_ring(i)) continue;
    double d = g.delta[i];
    double rad = norm(g.nodes[i]);
    Point dir = rad > 0 ? (1.0 / rad) * g.nodes[i] : Point{};
    Point full = std::pow(d, 1.0 - s1) * grad_v[i] +
                 (-(1.0 - s1) * std::pow(d, -s1) * v[i]) * dir;
    mag[i] = norm(full);
  }
  return weighted_lp(mag, {r, 0.0}, 1);
}

bool all_finite(const std::vector<double> &v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace

void SystemSolver::apply_T(const SystemConfig &cfg, const GridFunction &f, const GridFunction &g,
                           const std::vector<Point> &grad_v, std::vector<double> &u,
                           std::vector<Point> &grad_u, std::vector<double> &v_next,
                           std::vector<Point> &grad_v_next) const {
  const QuadratureGrid &gr = *grid_;
  const std::size_t n = gr.size();
  const double nl = cfg.zero_gradient_terms ? 0.0 : 1.0;
  std::vector<double> mag;
  trimmed_magnitude(gr, grad_v, mag);
  std::vector<double> du(n);
  if (cfg.rescaled_pq1) {
    for (std::size_t i = 0; i < n; ++i) du[i] = cfg.lambda * (nl * mag[i] + f[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) du[i] = nl * std::pow(mag[i], cfg.q) + cfg.lambda * f[i];
  }
  op1_->apply(du, u);
  op1_->apply_gradient(du, grad_u);
  trimmed_magnitude(gr, grad_u, mag);
  std::vector<double> dv(n);
  if (cfg.rescaled_pq1) {
    for (std::size_t i = 0; i < n; ++i) dv[i] = cfg.mu * (nl * mag[i] + g[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) dv[i] = nl * std::pow(mag[i], cfg.p) + cfg.mu * g[i];
  }
  op2_->apply(dv, v_next);
  op2_->apply_gradient(dv, grad_v_next);
}

PicardResult SystemSolver::picard_solve(const SystemConfig &cfg, const GridFunction &f,
                                        const GridFunction &g, double h_radius) const {
  const QuadratureGrid &gr = *grid_;
  const std::size_t n = gr.size();
  for (std::size_t i = 0; i < n; ++i)
    if (f[i] < 0 || g[i] < 0) throw std::invalid_argument("picard_solve: data must be nonnegative");

  PicardResult res;
  res.trimmed_measure = trimmed_measure(gr, 1);
  std::vector<double> v(n, 0.0), u(n, 0.0);
  std::vector<Point> grad_v(n), grad_u(n);

  double cap = cfg.blowup_cap;
  if (cap <= 0) {
    GridFunction lf(gr), mg(gr);
    for (std::size_t i = 0; i < n; ++i) {
      lf[i] = cfg.lambda * f[i];
      mg[i] = cfg.mu * g[i];
    }
    double scale = std::max(weighted_lp(lf, {cfg.m, 0.0}), weighted_lp(mg, {cfg.sigma, 0.0}));
    cap = 1e6 * std::max(scale, 1e-12);
  }

  int conv_streak = 0, div_streak = 0;
  for (int k = 0; k < cfg.max_iters; ++k) {
    std::vector<double> v_raw(n);
    std::vector<Point> grad_v_raw(n);
    apply_T(cfg, f, g, grad_v, u, grad_u, v_raw, grad_v_raw);

    // damped update; gradients are linear in the field, so they damp alike
    std::vector<double> v_new(n);
    std::vector<Point> grad_v_new(n);
    for (std::size_t i = 0; i < n; ++i) {
      v_new[i] = (1.0 - cfg.damping) * v[i] + cfg.damping * v_raw[i];
      grad_v_new[i] = (1.0 - cfg.damping) * grad_v[i] + cfg.damping * grad_v_raw[i];
    }

    IterationRecord rec;
    rec.iter = k;
    if (!all_finite(v_new) || !all_finite(u)) {
      rec.norm_grad_v_r = std::numeric_limits<double>::infinity();
      rec.diff_norm = std::numeric_limits<double>::infinity();
      res.trace.records.push_back(rec);
      res.trace.outcome = Outcome::Diverged;
      res.trace.diverged_at = k;
      res.u = u;
      res.v = v_new;
      res.grad_u = grad_u;
      res.grad_v = grad_v_new;
      return res;
    }

    GridFunction gu(gr), gv(gr);
    trimmed_magnitude(gr, grad_u, gu.values);
    trimmed_magnitude(gr, grad_v_new, gv.values);
    rec.norm_grad_u = weighted_lp(gu, {cfg.p * cfg.sigma, 1.0 - cfg.s1}, 1);
    rec.norm_grad_v_r = weighted_lp(gv, {cfg.r, 1.0 - cfg.s1}, 1);
    rec.h_norm = h_norm_of(gr, v_new, grad_v_new, cfg.s1, cfg.r);
    rec.in_H = rec.h_norm <= h_radius;

    std::vector<double> dvv(n);
    std::vector<Point> dgg(n);
    for (std::size_t i = 0; i < n; ++i) {
      dvv[i] = v_new[i] - v[i];
      dgg[i] = grad_v_new[i] - grad_v[i];
    }
    double dn = h_norm_of(gr, dvv, dgg, cfg.s1, cfg.r);
    double base = std::max(rec.h_norm, 1e-300);
    rec.diff_norm = dn / base;
    res.trace.records.push_back(rec);

    v = std::move(v_new);
    grad_v = std::move(grad_v_new);

    if (rec.norm_grad_v_r > cap) {
      if (++div_streak >= 3) {
        res.trace.outcome = Outcome::Diverged;
        res.trace.diverged_at = k;
        break;
      }
    } else {
      div_streak = 0;
    }
    if (rec.diff_norm < cfg.tol) {
      if (++conv_streak >= 3 && rec.in_H) {
        res.trace.outcome = Outcome::Converged;
        break;
      }
    } else {
      conv_streak = 0;
    }
  }
  res.u = std::move(u);
  res.v = std::move(v);
  res.grad_u = std::move(grad_u);
  res.grad_v = std::move(grad_v);
  return res;
}

double SystemSolver::calibrate_c_tilde(const SystemConfig &cfg, const GridFunction &f,
                                       const GridFunction &g) const {
  const QuadratureGrid &gr = *grid_;
  const std::size_t n = gr.size();
  double pq = cfg.p * cfg.q;

  GridFunction lf(gr), mg(gr);
  for (std::size_t i = 0; i < n; ++i) {
    lf[i] = cfg.lambda * f[i];
    mg[i] = cfg.mu * g[i];
  }
  double data_term = std::pow(weighted_lp(lf, {cfg.m, 0.0}), cfg.p) + weighted_lp(mg, {cfg.sigma, 0.0});

  double c = 0;
  for (double scale : {0.25, 0.5, 1.0, 2.0}) {
    for (double shape : {cfg.s2, 1.0}) {
      // torsion-shaped seed with analytic gradient
      std::vector<double> phi(n);
      std::vector<Point> grad_phi(n);
      for (std::size_t i = 0; i < n; ++i) {
        double a = 1.0 - dot(gr.nodes[i], gr.nodes[i]);
        phi[i] = scale * std::pow(a, shape);
        grad_phi[i] = (-2.0 * scale * shape * std::pow(a, shape - 1.0)) * gr.nodes[i];
      }
      std::vector<double> u(n), v(n);
      std::vector<Point> gu(n), gv(n);
      apply_T(cfg, f, g, grad_phi, u, gu, v, gv);
      double hv = h_norm_of(gr, v, gv, cfg.s1, cfg.r);
      double hphi = h_norm_of(gr, phi, grad_phi, cfg.s1, cfg.r);
      double denom = std::pow(hphi, pq) + data_term;
      if (denom > 0) c = std::max(c, hv / denom);
    }
  }
  return c;
}

bool pi_membership(const SmallnessBudget &budget, const SystemConfig &cfg, const GridFunction &f,
                   const GridFunction &g) {
  double nf = weighted_lp(f, {cfg.m, 0.0});
  double ng = weighted_lp(g, {cfg.sigma, 0.0});
  return std::pow(cfg.lambda, cfg.p) * std::pow(nf, cfg.p) + cfg.mu * ng <= budget.budget_a;
}

BisectResult threshold_bisect(const SystemSolver &solver, const SystemConfig &base,
                              const GridFunction &f, const GridFunction &g, double lambda_lo,
                              double lambda_hi, double h_radius) {
  (void)h_radius;
  BisectResult out;
  auto classify = [&](double lam) {
    SystemConfig cfg = base;
    cfg.lambda = lam;
    // threshold probes classify on settledness alone (infinite H radius);
    // the budget's H test is a sufficiency device, not the blow-up boundary
    cfg.max_iters = std::max(base.max_iters, 400);
    ++out.runs;
    return solver.picard_solve(cfg, f, g, std::numeric_limits<double>::infinity()).trace.outcome;
  };
  if (classify(lambda_lo) != Outcome::Converged) {
    out.diagnostic = "lower endpoint did not converge";
    return out;
  }
  if (classify(lambda_hi) != Outcome::Diverged) {
    out.diagnostic = "upper endpoint did not diverge";
    return out;
  }
  double lo = lambda_lo, hi = lambda_hi;
  while ((hi - lo) / lo > 0.05) {
    double mid = std::sqrt(lo * hi);
    Outcome o = classify(mid);
    if (o == Outcome::Converged) {
      lo = mid;
    } else if (o == Outcome::Diverged) {
      hi = mid;
    } else {
      out.diagnostic = "non-monotone classification: inconclusive run inside the bracket";
      out.lo = lo;
      out.hi = hi;
      return out;
    }
  }
  out.ok = true;
  out.lo = lo;
  out.hi = hi;
  out.lambda_hat = std::sqrt(lo * hi);
  return out;
}

GridFunction singular_datum(double m, double eps, const QuadratureGrid &grid) {
  const int dim = grid.domain.dim;
  if (!(eps > 0 && eps < dim)) throw std::invalid_argument("singular_datum: eps outside (0, N)");
  // Cell-averaged representative of |x|^{-(N-eps)/m}: the m-th power has the
  // exact per-ring radial mass (r2^eps - r1^eps)/eps, so the lumped L^m norm
  // reproduces the closed-form integral even though the origin cell carries
  // most of it.  Away from the origin this coincides with the nodal value.
  GridFunction f(grid);
  std::vector<double> ring_rep(grid.n_radial);
  for (int i = 0; i < grid.n_radial; ++i) {
    double t0 = double(i) / grid.n_radial, t1 = double(i + 1) / grid.n_radial;
    double r0 = 1.0 - std::pow(1.0 - t0, grid.grading);
    double r1 = 1.0 - std::pow(1.0 - t1, grid.grading);
    // int_cell r^{eps - N} r^{N-1} dr = (r1^eps - r0^eps)/eps
    double mass_m = (std::pow(r1, eps) - std::pow(r0, eps)) / eps;
    double cell_mass = dim == 2 ? (r1 * r1 - r0 * r0) / 2.0
                                : (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
    ring_rep[i] = std::pow(mass_m / cell_mass, 1.0 / m);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = ring_rep[std::size_t(grid.ring[i])];
  return f;
}

double singular_datum_exact_norm(int dim, double m, double eps) {
  double omega = dim == 2 ? 2.0 * kPi : 4.0 * kPi;
  return std::pow(omega / eps, 1.0 / m);
}

ResidualReport verify_weak_solution(const SystemSolver &solver, const SystemConfig &cfg,
                                    const GridFunction &f, const GridFunction &g,
                                    const PicardResult &result) {
  const QuadratureGrid &gr = solver.grid();
  const int dim = gr.domain.dim;
  const std::size_t n = gr.size();

  std::vector<std::pair<std::string, std::function<double(Point)>>> tests;
  tests.emplace_back("poly3", [](Point x) { return std::pow(std::max(0.0, 1.0 - dot(x, x)), 3.0); });
  tests.emplace_back("poly4", [](Point x) { return std::pow(std::max(0.0, 1.0 - dot(x, x)), 4.0); });
  auto bump = [](Point c, double R) {
    return std::function<double(Point)>([c, R](Point x) {
      Point d = x - c;
      return std::pow(std::max(0.0, 1.0 - dot(d, d) / (R * R)), 3.0);
    });
  };
  tests.emplace_back("bump0", bump({0, 0, 0}, 0.55));
  tests.emplace_back("bump+x", bump({0.35, 0, 0}, 0.5));
  tests.emplace_back("bump-x", bump({-0.35, 0, 0}, 0.5));
  tests.emplace_back("bump+y", bump({0, 0.35, 0}, 0.5));

  // source terms of the final iterate
  const double nl = cfg.zero_gradient_terms ? 0.0 : 1.0;
  std::vector<double> gu_mag, gv_mag;
  trimmed_magnitude(gr, result.grad_u, gu_mag);
  trimmed_magnitude(gr, result.grad_v, gv_mag);
  std::vector<double> du(n), dv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.rescaled_pq1) {
      du[i] = cfg.lambda * (nl * gv_mag[i] + f[i]);
      dv[i] = cfg.mu * (nl * gu_mag[i] + g[i]);
    } else {
      du[i] = nl * std::pow(gv_mag[i], cfg.q) + cfg.lambda * f[i];
      dv[i] = nl * std::pow(gu_mag[i], cfg.p) + cfg.mu * g[i];
    }
  }

  ResidualReport rep;
  for (const auto &[id, phi] : tests) {
    std::vector<double> pv1(n), pv2(n);
    parallel_for(n, [&](std::size_t i) {
      pv1[i] = pv_fractional_laplacian(dim, cfg.s1, phi, gr.nodes[i], 24, 48);
      pv2[i] = pv_fractional_laplacian(dim, cfg.s2, phi, gr.nodes[i], 24, 48);
    });
    double lhs1 = 0, rhs1 = 0, lhs2 = 0, rhs2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double ph = phi(gr.nodes[i]);
      lhs1 += gr.weights[i] * result.u[i] * pv1[i];
      rhs1 += gr.weights[i] * du[i] * ph;
      lhs2 += gr.weights[i] * result.v[i] * pv2[i];
      rhs2 += gr.weights[i] * dv[i] * ph;
    }
    ResidualRow row;
    row.test_id = id;
    double sc1 = std::max({std::abs(lhs1), std::abs(rhs1), 1e-300});
    double sc2 = std::max({std::abs(lhs2), std::abs(rhs2), 1e-300});
    row.residual1 = std::abs(lhs1 - rhs1) / sc1;
    row.residual2 = std::abs(lhs2 - rhs2) / sc2;
    if (cfg.lambda == 0 && cfg.mu == 0) {
      // zero data: absolute residual against the test-function scale
      row.residual1 = std::abs(lhs1 - rhs1);
      row.residual2 = std::abs(lhs2 - rhs2);
    }
    rep.max_residual = std::max({rep.max_residual, row.residual1, row.residual2});
    rep.rows.push_back(row);
  }
  return rep;
}

} // namespace fracgrad
