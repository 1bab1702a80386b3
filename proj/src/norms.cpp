#include "fracgrad/norms.hpp"

#include "fracgrad/kernel.hpp"
#include "fracgrad/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracgrad {

namespace {
constexpr double kPi = std::numbers::pi;
}

double weighted_lp(const GridFunction &v, const WeightedNormSpec &spec, int exclude_outer_rings) {
  const QuadratureGrid &g = *v.grid;
  if (spec.is_sup()) {
    double m = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (exclude_outer_rings > 0 && g.on_outer_rings(i, exclude_outer_rings)) continue;
      m = std::max(m, std::abs(v[i]) * std::pow(g.delta[i], spec.weight_power));
    }
    return m;
  }
  if (spec.gamma < 1.0) throw std::invalid_argument("weighted_lp: gamma must be >= 1");
  double acc = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (exclude_outer_rings > 0 && g.on_outer_rings(i, exclude_outer_rings)) continue;
    acc += g.weights[i] * std::pow(std::abs(v[i]), spec.gamma) *
           std::pow(g.delta[i], spec.weight_power * spec.gamma);
  }
  return std::pow(acc, 1.0 / spec.gamma);
}

double trimmed_measure(const QuadratureGrid &grid, int rings) {
  double acc = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.on_outer_rings(i, rings)) acc += grid.weights[i];
  return acc;
}

namespace {

// exterior tail int_{|y|>1} |x-y|^{-N-ps} dy as a function of |x|
double exterior_tail(int dim, double kexp, double r) {
  namespace bq = boost::math::quadrature;
  if (dim == 2) {
    auto inner = [&](double R) {
      auto ang = [&](double th) {
        double d2 = R * R + r * r - 2.0 * R * r * std::cos(th);
        return std::pow(d2, -kexp / 2.0);
      };
      return R * bq::gauss_kronrod<double, 31>::integrate(ang, 0.0, 2.0 * kPi, 10, 1e-9);
    };
    // R = 1 + tau/(1-tau)
    auto f = [&](double tau) {
      double om = 1.0 - tau;
      double R = 1.0 + tau / om;
      return inner(R) / (om * om);
    };
    bq::tanh_sinh<double> ts;
    return ts.integrate(f, 0.0, 1.0);
  }
  // dim == 3: the polar integral is elementary
  auto inner = [&](double R) {
    double kk = kexp;
    double a = R * R + r * r, b = 2.0 * R * r;
    if (b == 0) return 4.0 * kPi * R * R * std::pow(a, -kk / 2.0) / 2.0 * 2.0 / 2.0;
    double e = 1.0 - kk / 2.0;
    double hi = std::pow(a + b, e), lo = std::pow(a - b, e);
    return 2.0 * kPi * R * R * (hi - lo) / (b * e);
  };
  auto f = [&](double tau) {
    double om = 1.0 - tau;
    double R = 1.0 + tau / om;
    return inner(R) / (om * om);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, 0.0, 1.0);
}

} // namespace

double gagliardo_seminorm(const GridFunction &v, double s, double p) {
  if (!(s > 0 && s < 1) || p < 1) throw std::invalid_argument("gagliardo_seminorm: bad (s, p)");
  const QuadratureGrid &g = *v.grid;
  const int dim = g.domain.dim;
  const double kexp = dim + p * s;
  const std::size_t n = g.size();

  std::vector<double> partial(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = dist(g.nodes[i], g.nodes[j]);
      acc += std::pow(std::abs(v[i] - v[j]), p) * std::pow(d, -kexp) * g.weights[j];
    }
    partial[i] = acc * g.weights[i];
  });
  double inner = 0;
  for (double x : partial) inner += x;

  // exterior contribution of the zero extension, per radial ring
  std::vector<double> tail(g.n_radial);
  parallel_for(g.n_radial, [&](std::size_t ir) { tail[ir] = exterior_tail(dim, kexp, g.r_ring[ir]); });
  double ext = 0;
  for (std::size_t i = 0; i < n; ++i)
    ext += g.weights[i] * std::pow(std::abs(v[i]), p) * tail[std::size_t(g.ring[i])];

  return std::pow(inner + 2.0 * ext, 1.0 / p);
}

std::vector<Datum> datum_family(const QuadratureGrid &grid, int size) {
  if (size != 12 && size != 24) throw std::invalid_argument("datum_family: size is 12 or 24");
  Domain dom = grid.domain;
  std::vector<std::pair<std::string, std::function<double(Point)>>> defs;
  auto gauss = [](double w) {
    return [w](Point p) { return std::exp(-dot(p, p) / (2.0 * w * w)); };
  };
  auto blayer = [dom](double t) {
    return [dom, t](Point p) { return std::pow(boundary_distance(dom, p), -t); };
  };
  auto xpow = [](double u) {
    return [u](Point p) { return std::pow(norm(p), -u); };
  };
  defs.emplace_back("const:1", [](Point) { return 1.0; });
  defs.emplace_back("const:5", [](Point) { return 5.0; });
  defs.emplace_back("gauss:0.5", gauss(0.5));
  defs.emplace_back("gauss:0.25", gauss(0.25));
  defs.emplace_back("gauss:0.1", gauss(0.1));
  defs.emplace_back("blayer:1/8", blayer(0.125));
  defs.emplace_back("blayer:1/4", blayer(0.25));
  defs.emplace_back("blayer:3/8", blayer(0.375));
  defs.emplace_back("xpow:1/2", xpow(0.5));
  defs.emplace_back("xpow:3/4", xpow(0.75));
  defs.emplace_back("bump", [](Point p) { return std::pow(std::max(0.0, 1.0 - dot(p, p)), 2.0); });
  defs.emplace_back("ring:0.7", [](Point p) {
    double r = norm(p);
    return std::exp(-std::pow((r - 0.7) / 0.1, 2.0));
  });
  if (size == 24) {
    defs.emplace_back("const:2", [](Point) { return 2.0; });
    defs.emplace_back("const:10", [](Point) { return 10.0; });
    defs.emplace_back("gauss:0.35", gauss(0.35));
    defs.emplace_back("gauss:0.18", gauss(0.18));
    defs.emplace_back("gauss:0.07", gauss(0.07));
    defs.emplace_back("blayer:1/6", blayer(1.0 / 6.0));
    defs.emplace_back("blayer:5/16", blayer(0.3125));
    defs.emplace_back("blayer:7/16", blayer(0.4375));
    defs.emplace_back("xpow:1/4", xpow(0.25));
    defs.emplace_back("xpow:5/8", xpow(0.625));
    defs.emplace_back("bump3", [](Point p) { return std::pow(std::max(0.0, 1.0 - dot(p, p)), 3.0); });
    defs.emplace_back("ring:0.5", [](Point p) {
      double r = norm(p);
      return std::exp(-std::pow((r - 0.5) / 0.15, 2.0));
    });
  }
  std::vector<Datum> out;
  for (auto &[id, f] : defs) out.push_back({id, GridFunction::from(grid, f)});
  return out;
}

namespace {

struct CaseWindow {
  std::string case_id;
  std::string refusal;
};

// case split of the weighted-solution estimate around N/(2s2-s1-a(1-s1))
CaseWindow thm31_window(int N, double s1, double s2, double a, double m, double gamma) {
  CaseWindow w;
  double bracket = 2.0 * s2 - s1 - a * (1.0 - s1);
  if (!(a >= 0.0 && a < s2 / (1.0 - s1))) {
    w.refusal = "a outside [0, s2/(1-s1))";
    return w;
  }
  if (m < 1.0) {
    w.refusal = "m < 1";
    return w;
  }
  double T = bracket > 0 ? N / bracket : std::numeric_limits<double>::infinity();
  if (m < T) {
    w.case_id = "(i)";
    double m_hat = m * N / (N - m * bracket);
    if (!(gamma <= m_hat)) w.refusal = "case (i) requires gamma <= m-hat = " + std::to_string(m_hat);
  } else if (m == T) {
    w.case_id = "(ii)";
    if (std::isinf(gamma)) w.refusal = "case (ii) requires gamma < infinity";
  } else {
    w.case_id = "(iii)";
  }
  return w;
}

CaseWindow thm32_window(int N, double s1, double s2, double a, double m, double gamma) {
  CaseWindow w = thm31_window(N, s1, s2, a, m, gamma);
  if (!w.refusal.empty() && w.case_id != "(i)") return w;
  w.refusal.clear();
  double bracket = 2.0 * s2 - s1 - a * (1.0 - s1);
  double b2 = 2.0 * s2 - 1.0;
  double T = std::min(bracket > 0 ? N / bracket : std::numeric_limits<double>::infinity(),
                      b2 > 0 ? N / b2 : std::numeric_limits<double>::infinity());
  double Tmax = std::max(bracket > 0 ? N / bracket : std::numeric_limits<double>::infinity(),
                         b2 > 0 ? N / b2 : std::numeric_limits<double>::infinity());
  if (m < T) {
    w.case_id = "(i)";
    double m_hat = N - m * bracket > 0 ? m * N / (N - m * bracket)
                                       : std::numeric_limits<double>::infinity();
    double m_2 = N - m * b2 > 0 ? m * N / (N - m * b2) : std::numeric_limits<double>::infinity();
    double m_tilde = std::min(m_hat, m_2);
    if (!(gamma < m_tilde))
      w.refusal = "case (i) requires gamma < m-tilde = " + std::to_string(m_tilde);
  } else if (m == Tmax) {
    w.case_id = "(ii)";
    if (std::isinf(gamma)) w.refusal = "case (ii) requires gamma < infinity";
  } else if (m > Tmax) {
    w.case_id = "(iii)";
  } else {
    w.case_id = "between min and max thresholds";
    w.refusal = "m between the two thresholds: outside the stated cases";
  }
  return w;
}

bool sup_stable(double sup_a, double sup_b, double tol) {
  return std::abs(sup_b - sup_a) <= tol * std::max(sup_a, 1e-300);
}

} // namespace

SolveOptions probe_quadrature() {
  SolveOptions o;
  o.tol = 1e-4;
  o.max_patch_level = 2;
  return o;
}

EstimateProbeReport probe_thm31(const QuadratureGrid &grid, double s1, double s2, double a,
                                double m, double gamma, int family_size) {
  EstimateProbeReport rep;
  rep.theorem_id = "3.1";
  rep.family_desc = "versioned family of " + std::to_string(family_size);
  CaseWindow w = thm31_window(grid.domain.dim, s1, s2, a, m, gamma);
  rep.case_id = w.case_id;
  if (!w.refusal.empty()) {
    rep.refusal = w.refusal;
    return rep;
  }
  GreenKernel ker(grid.domain.dim, s2);
  auto family = datum_family(grid, family_size);
  std::vector<const GridFunction *> hs;
  for (auto &d : family) hs.push_back(&d.h);
  auto ms = solve_many(ker, grid, hs, grid.nodes, probe_quadrature());

  double aw = a * (1.0 - s1);
  double sup12 = 0;
  for (std::size_t d = 0; d < family.size(); ++d) {
    GridFunction wgf(grid);
    wgf.values = ms.values[d];
    ProbeEntry e;
    e.datum_id = family[d].id;
    e.lhs = weighted_lp(wgf, {gamma, -s1});
    e.rhs = weighted_lp(family[d].h, {m, aw}); // ||h delta^{a(1-s1)}||_m
    e.ratio = e.rhs > 0 ? e.lhs / e.rhs : 0;
    rep.entries.push_back(e);
    if (d < 12) sup12 = std::max(sup12, e.ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, e.ratio);
  }
  rep.stable = family_size <= 12 || sup_stable(sup12, rep.sup_ratio, 0.10);
  return rep;
}

GradientProbeReport probe_thm32(const QuadratureGrid &grid, double s1, double s2, double a,
                                double m, double gamma, int family_size) {
  GradientProbeReport out;
  out.direct.theorem_id = "3.2-direct";
  out.decomposition.theorem_id = "3.2-decomposition";
  out.direct.family_desc = out.decomposition.family_desc =
      "versioned family of " + std::to_string(family_size);
  CaseWindow w = thm32_window(grid.domain.dim, s1, s2, a, m, gamma);
  out.direct.case_id = out.decomposition.case_id = w.case_id;
  if (!w.refusal.empty()) {
    out.direct.refusal = out.decomposition.refusal = w.refusal;
    return out;
  }
  const int N = grid.domain.dim;
  GreenKernel ker(N, s2);
  auto family = datum_family(grid, family_size);
  std::vector<const GridFunction *> hs;
  for (auto &d : family) hs.push_back(&d.h);
  SolveOptions opts = probe_quadrature();
  opts.with_gradient = true;
  auto ms = solve_many(ker, grid, hs, grid.nodes, opts);

  double aw = a * (1.0 - s1);
  // weighted datums for the P-operator term
  std::vector<GridFunction> weighted;
  std::vector<const GridFunction *> wptr;
  for (auto &d : family) {
    GridFunction g = d.h;
    for (std::size_t i = 0; i < grid.size(); ++i) g[i] *= std::pow(grid.delta[i], aw);
    weighted.push_back(std::move(g));
  }
  for (auto &g : weighted) wptr.push_back(&g);
  double lam = p_operator_exponent(s1, s2, a, N);
  auto pvals = riesz_many(lam, grid, wptr, grid.nodes, probe_quadrature());

  double bracket = 2.0 * s2 - s1 - a * (1.0 - s1);
  double m_hat = (N - m * bracket) > 0 ? m * N / (N - m * bracket)
                                       : std::numeric_limits<double>::infinity();

  out.direct.trimmed = out.decomposition.trimmed = trimmed_measure(grid, 1);
  double dsup12 = 0, csup12 = 0;
  for (std::size_t d = 0; d < family.size(); ++d) {
    GridFunction gmag(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) gmag[i] = norm(ms.gradients[d][i]);
    double lhs = weighted_lp(gmag, {gamma, 1.0 - s1}, 1);

    GridFunction wgf(grid);
    wgf.values = ms.values[d];
    GridFunction pgf(grid);
    pgf.values = pvals[d];

    ProbeEntry dir;
    dir.datum_id = family[d].id;
    dir.lhs = lhs;
    dir.rhs = weighted_lp(family[d].h, {m, aw});
    dir.ratio = dir.rhs > 0 ? lhs / dir.rhs : 0;
    out.direct.entries.push_back(dir);

    ProbeEntry dec;
    dec.datum_id = family[d].id;
    dec.lhs = lhs;
    dec.rhs = weighted_lp(wgf, {m_hat, -s1}) + weighted_lp(pgf, {gamma, 0.0});
    dec.ratio = dec.rhs > 0 ? lhs / dec.rhs : 0;
    out.decomposition.entries.push_back(dec);

    if (d < 12) {
      dsup12 = std::max(dsup12, dir.ratio);
      csup12 = std::max(csup12, dec.ratio);
    }
    out.direct.sup_ratio = std::max(out.direct.sup_ratio, dir.ratio);
    out.decomposition.sup_ratio = std::max(out.decomposition.sup_ratio, dec.ratio);
  }
  out.direct.stable = family_size <= 12 || sup_stable(dsup12, out.direct.sup_ratio, 0.10);
  out.decomposition.stable =
      family_size <= 12 || sup_stable(csup12, out.decomposition.sup_ratio, 0.10);
  return out;
}

double hardy_ratio(const GridFunction &phi, double gamma_w, double nu) {
  if (!(nu > 1.0)) throw std::invalid_argument("hardy_ratio: nu must exceed 1");
  if (!(gamma_w >= 0.0 && gamma_w < nu - 1.0))
    throw std::invalid_argument("hardy_ratio: gamma outside [0, nu-1)");
  const QuadratureGrid &g = *phi.grid;
  if (g.domain.dim != 2) throw std::invalid_argument("hardy_ratio: disk grids only");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.on_outer_rings(i, 2) && phi[i] != 0.0)
      throw std::invalid_argument("hardy_ratio: phi must vanish on the outer two rings");

  const int nr = g.n_radial, na = g.n_angular;
  auto idx = [&](int i, int j) { return std::size_t(i) * na + ((j % na) + na) % na; };
  double lhs = 0, rhs = 0;
  double dth = 2.0 * kPi / na;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < na; ++j) {
      std::size_t k = idx(i, j);
      double r = g.r_ring[i];
      double dr_phi;
      if (i == 0) {
        dr_phi = (phi[idx(1, j)] - phi[k]) / (g.r_ring[1] - g.r_ring[0]);
      } else if (i == nr - 1) {
        dr_phi = (phi[k] - phi[idx(i - 1, j)]) / (g.r_ring[i] - g.r_ring[i - 1]);
      } else {
        double hl = g.r_ring[i] - g.r_ring[i - 1];
        double hr = g.r_ring[i + 1] - g.r_ring[i];
        dr_phi = (hl * (phi[idx(i + 1, j)] - phi[k]) / hr + hr * (phi[k] - phi[idx(i - 1, j)]) / hl) /
                 (hl + hr);
      }
      double dth_phi = (phi[idx(i, j + 1)] - phi[idx(i, j - 1)]) / (2.0 * dth * r);
      double grad = std::hypot(dr_phi, dth_phi);
      lhs += g.weights[k] * std::pow(g.delta[k], gamma_w - nu) * std::pow(std::abs(phi[k]), nu);
      rhs += g.weights[k] * std::pow(g.delta[k], gamma_w) * std::pow(grad, nu);
    }
  }
  if (rhs == 0) throw std::invalid_argument("hardy_ratio: zero gradient");
  return lhs / rhs;
}

InterpolationReport interpolation_check(const std::vector<GridFunction> &h_seq,
                                        const GridFunction &h_limit, double a_exp, double r) {
  if (!(a_exp >= 1.0 && a_exp < r)) throw std::invalid_argument("interpolation: need 1 <= a < r");
  InterpolationReport rep;
  rep.theta = (r - a_exp) / (a_exp * (r - 1.0));
  rep.all_hold = true;
  for (const auto &hn : h_seq) {
    GridFunction diff = hn;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= h_limit[i];
    double na = weighted_lp(diff, {a_exp, 0.0});
    double n1 = weighted_lp(diff, {1.0, 0.0});
    double nr = weighted_lp(diff, {r, 0.0});
    InterpolationEntry e;
    e.lhs = na;
    e.rhs = std::pow(n1, rep.theta) * std::pow(nr, 1.0 - rep.theta);
    e.holds = e.lhs <= e.rhs * (1.0 + 1e-12);
    rep.all_hold = rep.all_hold && e.holds;
    rep.entries.push_back(e);
  }
  return rep;
}

} // namespace fracgrad
