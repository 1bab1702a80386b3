#include "fracgrad/poisson.hpp"

#include "fracgrad/parallel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace fracgrad {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [0,1], cached per order.
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule &gauss01(int n) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev guess, on [-1,1]
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    r.x[i] = (1.0 - t) / 2.0; // reversed order is irrelevant
    r.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  auto [pos, ok] = cache.emplace(n, std::move(r));
  (void)ok;
  return pos->second;
}

// distance from x to the unit sphere along direction d (|d| = 1)
double ray_to_boundary(Point x, Point d) {
  double b = dot(x, d);
  double c = 1.0 - dot(x, x);
  return -b + std::sqrt(b * b + c);
}

struct Directions {
  std::vector<Point> dir;
  std::vector<double> weight;  // angular measure weights summing to |S^{N-1}|
};

Directions make_directions(int dim, int n_ang, int n_mu) {
  Directions D;
  if (dim == 2) {
    for (int j = 0; j < n_ang; ++j) {
      double th = 2.0 * kPi * (j + 0.5) / n_ang;
      D.dir.push_back({std::cos(th), std::sin(th), 0});
      D.weight.push_back(2.0 * kPi / n_ang);
    }
  } else {
    for (int k = 0; k < n_mu; ++k) {
      double mu = -1.0 + 2.0 * (k + 0.5) / n_mu;
      double sp = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int j = 0; j < n_ang; ++j) {
        double th = 2.0 * kPi * (j + 0.5) / n_ang;
        D.dir.push_back({sp * std::cos(th), sp * std::sin(th), mu});
        D.weight.push_back((2.0 * kPi / n_ang) * (2.0 / n_mu));
      }
    }
  }
  return D;
}

// One quadrature row for a fixed target: lumped far field plus a polar patch
// around the target, attributed to the nodes whose cells the patch points
// fall in.  EvalFn(y, val, grad, want_grad); sing_gamma sizes the radial map
// (exponent 1/(N-gamma)); the kernel value behaves like rho^{val_pow} at the
// target.  Radii below rho_floor are evaluated at rho_floor and rescaled by
// the exact power law (val ~ rho^{val_pow}, grad ~ rho^{val_pow-1}), where
// the kernel profile is constant to machine precision.
template <class EvalFn>
void assemble_row(const QuadratureGrid &grid, Point x, double sing_gamma, double val_pow,
                  const SolveOptions &opts, bool want_grad, EvalFn &&eval, double *val_row,
                  Point *grad_row) {
  const int dim = grid.domain.dim;
  const std::size_t n = grid.size();
  const double R = opts.patch_factor * grid.cell_extent(norm(x));
  const double kappa = 1.0 / (dim - sing_gamma);
  const double rho_floor = 1e-9 * R;

  for (std::size_t j = 0; j < n; ++j) {
    val_row[j] = 0;
    if (grad_row) grad_row[j] = Point{};
  }

  // far field: lumped midpoint rule outside the patch
  for (std::size_t j = 0; j < n; ++j) {
    if (dist(grid.nodes[j], x) <= R) continue;
    double v;
    Point g;
    eval(grid.nodes[j], v, g, want_grad);
    val_row[j] += grid.weights[j] * v;
    if (grad_row) grad_row[j] = grad_row[j] + grid.weights[j] * g;
  }

  // near field: adaptive polar patch clipped to the ball
  int n_rho = 8, n_ang = 16, n_mu = dim == 3 ? 8 : 1;
  std::vector<double> acc_val;
  std::vector<Point> acc_grad;
  double prev_total = std::numeric_limits<double>::quiet_NaN();
  double prev_gtotal = 0;
  for (int level = 0; level <= opts.max_patch_level; ++level) {
    acc_val.assign(n, 0.0);
    acc_grad.assign(grad_row ? n : 0, Point{});
    double total = 0, gtotal = 0;
    Directions D = make_directions(dim, n_ang, n_mu);
    const GaussRule &gr = gauss01(n_rho);
    for (std::size_t di = 0; di < D.dir.size(); ++di) {
      double rho_max = std::min(R, ray_to_boundary(x, D.dir[di]));
      if (rho_max <= 0) continue;
      for (int qi = 0; qi < n_rho; ++qi) {
        double u = gr.x[qi];
        double rho = rho_max * std::pow(u, kappa);
        double drho = rho_max * kappa * std::pow(u, kappa - 1.0);
        double rho_eval = std::max(rho, rho_floor);
        Point y = x + rho_eval * D.dir[di];
        long long cell = grid.locate(y);
        if (cell < 0) continue;
        double v;
        Point g;
        eval(y, v, g, want_grad);
        if (rho < rho_floor) {
          double ratio = rho / rho_eval;
          v *= std::pow(ratio, val_pow);
          g = std::pow(ratio, val_pow - 1.0) * g;
        }
        double jac = (dim == 2 ? rho : rho * rho) * drho * D.weight[di] * gr.w[qi];
        acc_val[std::size_t(cell)] += jac * v;
        total += jac * std::abs(v);
        if (grad_row) {
          acc_grad[std::size_t(cell)] = acc_grad[std::size_t(cell)] + jac * g;
          gtotal += jac * norm(g);
        }
      }
    }
    bool converged = false;
    if (level > 0) {
      // value-total criterion only, so value and gradient assemblies stop at
      // identical levels and stay mutually consistent
      double dv = std::abs(total - prev_total) / std::max(std::abs(total), 1e-300);
      converged = dv < opts.tol;
    }
    prev_total = total;
    prev_gtotal = gtotal;
    (void)prev_gtotal;
    if (converged || level == opts.max_patch_level) break;
    n_rho *= 2;
    n_ang *= 2;
    if (dim == 3) n_mu *= 2;
  }
  for (std::size_t j = 0; j < n; ++j) {
    val_row[j] += acc_val[j];
    if (grad_row) grad_row[j] = grad_row[j] + acc_grad[j];
  }
}

void green_row(const GreenKernel &ker, const QuadratureGrid &grid, Point x, bool want_grad,
               const SolveOptions &opts, double *val_row, Point *grad_row) {
  const int dim = grid.domain.dim;
  // gradient-strength radial map; exact for the value integrand as well
  double gamma = dim - 2.0 * ker.s() + 1.0;
  assemble_row(
      grid, x, gamma, 2.0 * ker.s() - dim, opts, want_grad,
      [&](Point y, double &v, Point &g, bool wg) {
        v = ker(x, y);
        if (wg) g = ker.grad_x(x, y);
      },
      val_row, grad_row);
}

} // namespace

PoissonSolve solve(const GreenKernel &ker, const QuadratureGrid &grid, const GridFunction &h,
                   const std::vector<Point> &targets, const SolveOptions &opts) {
  Domain dom = grid.domain;
  for (const auto &t : targets)
    if (boundary_distance(dom, t) <= 0) throw std::invalid_argument("solve: target outside domain");
  PoissonSolve out;
  out.s = ker.s();
  out.targets = targets;
  out.values.assign(targets.size(), 0.0);
  if (opts.with_gradient) out.gradients.assign(targets.size(), Point{});
  const std::size_t n = grid.size();
  parallel_for(targets.size(), [&](std::size_t ti) {
    std::vector<double> row(n);
    std::vector<Point> grow(opts.with_gradient ? n : 0);
    green_row(ker, grid, targets[ti], opts.with_gradient, opts, row.data(),
              opts.with_gradient ? grow.data() : nullptr);
    double acc = 0;
    Point gacc{};
    for (std::size_t j = 0; j < n; ++j) {
      acc += row[j] * h[j];
      if (opts.with_gradient) gacc = gacc + h[j] * grow[j];
    }
    out.values[ti] = acc;
    if (opts.with_gradient) out.gradients[ti] = gacc;
  });
  return out;
}

PoissonSolve solve_truncated(const GreenKernel &ker, const QuadratureGrid &grid,
                             const GridFunction &h, double nlev, const std::vector<Point> &targets,
                             const SolveOptions &opts) {
  GridFunction hn = h;
  for (auto &v : hn.values) v = std::max(-nlev, std::min(nlev, v));
  return solve(ker, grid, hn, targets, opts);
}

std::vector<Point> gradient(const GreenKernel &ker, const QuadratureGrid &grid,
                            const GridFunction &h, const std::vector<Point> &targets,
                            const SolveOptions &opts) {
  SolveOptions o = opts;
  o.with_gradient = true;
  std::vector<Point> out(targets.size());
  Domain dom = grid.domain;
  const std::size_t n = grid.size();
  parallel_for(targets.size(), [&](std::size_t ti) {
    Point x = targets[ti];
    if (boundary_distance(dom, x) <= 2.0 * grid.radial_width(norm(x))) {
      double nan = std::numeric_limits<double>::quiet_NaN();
      out[ti] = Point{nan, nan, nan};  // step rule unreliable: caller refines
      return;
    }
    std::vector<double> row(n);
    std::vector<Point> grow(n);
    green_row(ker, grid, x, true, o, row.data(), grow.data());
    Point acc{};
    for (std::size_t j = 0; j < n; ++j) acc = acc + h[j] * grow[j];
    out[ti] = acc;
  });
  return out;
}

std::vector<double> riesz_potential(double lambda_exp, const QuadratureGrid &grid,
                                    const GridFunction &g, const std::vector<Point> &targets,
                                    const SolveOptions &opts) {
  const int dim = grid.domain.dim;
  if (!(lambda_exp > 0 && lambda_exp < dim))
    throw std::invalid_argument("riesz_potential: lambda outside (0, N)");
  std::vector<double> out(targets.size(), 0.0);
  const std::size_t n = grid.size();
  parallel_for(targets.size(), [&](std::size_t ti) {
    Point x = targets[ti];
    std::vector<double> row(n);
    assemble_row(
        grid, x, lambda_exp, -lambda_exp, opts, false,
        [&](Point y, double &v, Point &gr, bool) {
          (void)gr;
          v = std::pow(dist(x, y), -lambda_exp);
        },
        row.data(), nullptr);
    double acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * g[j];
    out[ti] = acc;
  });
  return out;
}

MultiSolve solve_many(const GreenKernel &ker, const QuadratureGrid &grid,
                      const std::vector<const GridFunction *> &hs,
                      const std::vector<Point> &targets, const SolveOptions &opts) {
  MultiSolve out;
  out.values.assign(hs.size(), std::vector<double>(targets.size(), 0.0));
  if (opts.with_gradient) out.gradients.assign(hs.size(), std::vector<Point>(targets.size()));
  const std::size_t n = grid.size();
  parallel_for(targets.size(), [&](std::size_t ti) {
    std::vector<double> row(n);
    std::vector<Point> grow(opts.with_gradient ? n : 0);
    green_row(ker, grid, targets[ti], opts.with_gradient, opts, row.data(),
              opts.with_gradient ? grow.data() : nullptr);
    for (std::size_t d = 0; d < hs.size(); ++d) {
      const GridFunction &h = *hs[d];
      double acc = 0;
      Point gacc{};
      for (std::size_t j = 0; j < n; ++j) {
        acc += row[j] * h[j];
        if (opts.with_gradient) gacc = gacc + h[j] * grow[j];
      }
      out.values[d][ti] = acc;
      if (opts.with_gradient) out.gradients[d][ti] = gacc;
    }
  });
  return out;
}

std::vector<std::vector<double>> riesz_many(double lambda_exp, const QuadratureGrid &grid,
                                            const std::vector<const GridFunction *> &gs,
                                            const std::vector<Point> &targets,
                                            const SolveOptions &opts) {
  const int dim = grid.domain.dim;
  if (!(lambda_exp > 0 && lambda_exp < dim))
    throw std::invalid_argument("riesz_potential: lambda outside (0, N)");
  std::vector<std::vector<double>> out(gs.size(), std::vector<double>(targets.size(), 0.0));
  const std::size_t n = grid.size();
  parallel_for(targets.size(), [&](std::size_t ti) {
    Point x = targets[ti];
    std::vector<double> row(n);
    assemble_row(
        grid, x, lambda_exp, -lambda_exp, opts, false,
        [&](Point y, double &v, Point &gr, bool) {
          (void)gr;
          v = std::pow(dist(x, y), -lambda_exp);
        },
        row.data(), nullptr);
    for (std::size_t d = 0; d < gs.size(); ++d) {
      double acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * (*gs[d])[j];
      out[d][ti] = acc;
    }
  });
  return out;
}

double p_operator_exponent(double s1, double s2, double a, int dim) {
  double lam = a >= 1.0 ? dim - (2.0 * s2 - s1 - a * (1.0 - s1)) : dim - 2.0 * s2 + 1.0;
  if (!(lam > 0 && lam < dim)) throw std::invalid_argument("p_operator: exponent outside (0, N)");
  return lam;
}

std::vector<double> p_operator(double s1, double s2, double a, const QuadratureGrid &grid,
                               const GridFunction &g, const std::vector<Point> &targets,
                               const SolveOptions &opts) {
  if (!(a >= 0 && a < s2 / (1.0 - s1)))
    throw std::invalid_argument("p_operator: a outside [0, s2/(1-s1))");
  return riesz_potential(p_operator_exponent(s1, s2, a, grid.domain.dim), grid, g, targets, opts);
}

SolveOperator::SolveOperator(const GreenKernel &ker, const QuadratureGrid &grid,
                             const SolveOptions &opts)
    : grid_(&grid), s_(ker.s()), n_(grid.size()) {
  val_.resize(n_ * n_);
  gx_.resize(n_ * n_);
  gy_.resize(n_ * n_);
  if (grid.domain.dim == 3) gz_.resize(n_ * n_);
  SolveOptions o = opts;
  o.with_gradient = true;
  parallel_for(n_, [&](std::size_t i) {
    std::vector<double> row(n_);
    std::vector<Point> grow(n_);
    green_row(ker, grid, grid.nodes[i], true, o, row.data(), grow.data());
    for (std::size_t j = 0; j < n_; ++j) {
      val_[i * n_ + j] = float(row[j]);
      gx_[i * n_ + j] = float(grow[j].x);
      gy_[i * n_ + j] = float(grow[j].y);
      if (!gz_.empty()) gz_[i * n_ + j] = float(grow[j].z);
    }
  });
}

void SolveOperator::apply(const std::vector<double> &h, std::vector<double> &w) const {
  w.assign(n_, 0.0);
  parallel_for(n_, [&](std::size_t i) {
    const float *row = &val_[i * n_];
    double acc = 0;
    for (std::size_t j = 0; j < n_; ++j) acc += double(row[j]) * h[j];
    w[i] = acc;
  });
}

void SolveOperator::apply_gradient(const std::vector<double> &h, std::vector<Point> &gw) const {
  gw.assign(n_, Point{});
  parallel_for(n_, [&](std::size_t i) {
    const float *rx = &gx_[i * n_];
    const float *ry = &gy_[i * n_];
    const float *rz = gz_.empty() ? nullptr : &gz_[i * n_];
    double ax = 0, ay = 0, az = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      ax += double(rx[j]) * h[j];
      ay += double(ry[j]) * h[j];
      if (rz) az += double(rz[j]) * h[j];
    }
    gw[i] = Point{ax, ay, az};
  });
}

double pv_constant(int dim, double s) {
  return s * std::pow(4.0, s) * std::tgamma((dim + 2.0 * s) / 2.0) /
         (std::pow(kPi, dim / 2.0) * std::tgamma(1.0 - s));
}

double pv_fractional_laplacian(int dim, double s, const std::function<double(Point)> &phi, Point x,
                               int n_radial, int n_angular) {
  Domain dom{dim};
  double dx = boundary_distance(dom, x);
  if (dx <= 0) throw std::invalid_argument("pv oracle: x must be interior");
  double r = dx / 2.0;
  double phix = phi(x);
  Directions D = make_directions(dim, n_angular, dim == 3 ? n_angular / 2 : 1);
  const GaussRule &gr = gauss01(n_radial);

  // symmetrized near field over B_r(x): second differences tame the kernel.
  // Below rho_safe the difference is cancellation noise, so it is evaluated
  // at rho_safe and scaled by the quadratic small-rho law.
  double near = 0;
  double kap = 1.0 / (2.0 - 2.0 * s);
  const double rho_safe = 1e-5 * r;
  for (std::size_t di = 0; di < D.dir.size(); ++di) {
    for (int qi = 0; qi < n_radial; ++qi) {
      double u = gr.x[qi];
      double rho = r * std::pow(u, kap);
      double drho = r * kap * std::pow(u, kap - 1.0);
      double rho_eval = std::max(rho, rho_safe);
      Point z = rho_eval * D.dir[di];
      double sym = phix - 0.5 * (phi(x + z) + phi(x - z));
      sym *= (rho / rho_eval) * (rho / rho_eval);
      double jac = (dim == 2 ? rho : rho * rho) * drho * D.weight[di] * gr.w[qi];
      near += sym * std::pow(rho, -double(dim) - 2.0 * s) * jac;
    }
  }

  // far field inside Omega, radially graded toward the boundary
  double far = 0;
  for (std::size_t di = 0; di < D.dir.size(); ++di) {
    double rho_b = ray_to_boundary(x, D.dir[di]);
    if (rho_b <= r) continue;
    for (int qi = 0; qi < n_radial; ++qi) {
      double v = gr.x[qi];
      double rho = rho_b - (rho_b - r) * (1.0 - v) * (1.0 - v);
      double drho = 2.0 * (rho_b - r) * (1.0 - v);
      Point y = x + rho * D.dir[di];
      double jac = (dim == 2 ? rho : rho * rho) * drho * D.weight[di] * gr.w[qi];
      far += (phix - phi(y)) * std::pow(rho, -double(dim) - 2.0 * s) * jac;
    }
  }

  // exterior tail: phi vanishes there and the radial integral is exact
  double ext = 0;
  for (std::size_t di = 0; di < D.dir.size(); ++di) {
    double rho_b = ray_to_boundary(x, D.dir[di]);
    ext += D.weight[di] * std::pow(rho_b, -2.0 * s) / (2.0 * s);
  }
  ext *= phix;

  return pv_constant(dim, s) * (near + far + ext);
}

double torsion_coefficient(int dim, double s) {
  return std::tgamma(dim / 2.0) /
         (std::pow(4.0, s) * std::tgamma(dim / 2.0 + s) * std::tgamma(1.0 + s));
}

double torsion_value(int dim, double s, Point x) {
  double a = 1.0 - dot(x, x);
  if (a <= 0) return 0.0;
  return torsion_coefficient(dim, s) * std::pow(a, s);
}

} // namespace fracgrad
