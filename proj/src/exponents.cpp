#include "fracgrad/exponents.hpp"

#include <algorithm>
#include <sstream>

namespace fracgrad {

namespace {
const BigRat kHalf(1, 2);
const BigRat kOne(1);
}

void ExponentProfile::validate() const {
  auto fail = [](const std::string &msg) { throw std::invalid_argument("ExponentProfile: " + msg); };
  if (!(s1 > kHalf && s1 < kOne)) fail("s1 must lie in (1/2, 1)");
  if (!(s2 > kHalf && s2 <= kOne)) fail("s2 must lie in (1/2, 1]");
  if (p < kOne) fail("p must be >= 1");
  if (q < kOne) fail("q must be >= 1");
  if (N < 2) fail("N must be >= 2");
  if (m.finite() && m.value() < kOne) fail("m must be >= 1 or inf");
  if (m.is_minus_inf()) fail("m = -inf is meaningless");
  if (sigma.finite() && sigma.value() < kOne) fail("sigma must be >= 1 or inf");
  if (sigma.is_minus_inf()) fail("sigma = -inf is meaningless");
}

std::vector<std::string> ExponentProfile::standing_violations() const {
  std::vector<std::string> out;
  if (!(s1 < s2)) out.push_back("standing: s1 < s2 fails (reverse case treated analogously in the source)");
  BigRat qcap = s1 / (kOne - s1);
  BigRat pcap = s2 / (kOne - s1);
  BigRat open_cap = kOne / (kOne - s1);
  if (!(q < qcap)) {
    if (q < open_cap)
      out.push_back("standing: q in [s1/(1-s1), 1/(1-s1)) — paper-open region");
    else
      out.push_back("standing: q >= 1/(1-s1) — nonexistence regime");
  }
  if (!(p < pcap)) out.push_back("standing: p >= s2/(1-s1)");
  if (!(p * q > kOne)) out.push_back("standing: pq <= 1 (Theorem on p=q=1 applies instead)");
  return out;
}

DerivedExponents derive(const ExponentProfile &pr) {
  DerivedExponents d;
  const BigRat &s1 = pr.s1, &s2 = pr.s2, &p = pr.p, &q = pr.q;
  const BigRat N(pr.N);
  const BigRat delta = s2 - s1;

  d.c_p = (p + 1) / (p + 2);
  d.c_q = (q + 1) / (q + 2);
  d.q_hat_1_s1 = s1 - q * (kOne - s1);
  d.q_hat_2_s1 = 2 * s1 - q * (kOne - s1);
  d.p_hat_2_s2 = 2 * s2 - p * (kOne - s2);
  d.p_hat_s1s2 = 2 * s2 - s1 - p * (kOne - s1);
  d.q_hat_s1s2 = 2 * s2 - s1 - q * (kOne - s1);

  // m-hat: mN / (N - m qhat1)_+ ; the kappa = 1 branch of the notation list
  // coincides with this (qhat1 = 2 s1 - 1 at q = 1).  m = inf is the limit.
  if (pr.m.finite()) {
    d.m_hat_s1_q = ext_div_pospart(pr.m.value() * N, N - pr.m.value() * d.q_hat_1_s1);
  } else {
    d.m_hat_s1_q = d.q_hat_1_s1 >= 0 ? ExtRat::plus_inf() : ExtRat(N / -d.q_hat_1_s1);
  }

  // m-bar = m-hat / (1 + m-hat (s2-s1)); limit 1/(s2-s1) when m-hat = inf.
  if (d.m_hat_s1_q.finite()) {
    const BigRat &mh = d.m_hat_s1_q.value();
    d.m_bar_s1s2_q = ExtRat(mh / (kOne + mh * delta));
  } else {
    d.m_bar_s1s2_q = delta > 0 ? ExtRat(kOne / delta) : ExtRat::plus_inf();
  }

  if (pr.sigma.finite()) {
    d.sigma_hat_s2 = ext_div_pospart(pr.sigma.value() * N, N - pr.sigma.value() * (2 * s2 - 1));
    d.sigma_hat_s1s2_p = ext_div_pospart(pr.sigma.value() * N, N - pr.sigma.value() * d.p_hat_s1s2);
  } else {
    d.sigma_hat_s2 = ExtRat::plus_inf(); // 2 s2 - 1 > 0 always here
    d.sigma_hat_s1s2_p =
        d.p_hat_s1s2 >= 0 ? ExtRat::plus_inf() : ExtRat(N / -d.p_hat_s1s2);
  }
  return d;
}

std::string rel_str(Rel r) {
  switch (r) {
    case Rel::LT: return "<";
    case Rel::LE: return "<=";
    case Rel::GT: return ">";
    case Rel::GE: return ">=";
  }
  return "?";
}

bool rel_holds(const ExtRat &lhs, Rel r, const ExtRat &rhs) {
  switch (r) {
    case Rel::LT: return lhs < rhs;
    case Rel::LE: return lhs <= rhs;
    case Rel::GT: return lhs > rhs;
    case Rel::GE: return lhs >= rhs;
  }
  return false;
}

namespace {

ClauseVerdict clause(const std::string &id, const ExtRat &lhs, Rel r, const ExtRat &rhs,
                     const std::string &note = "") {
  ClauseVerdict c;
  c.id = id;
  c.lhs = lhs.str();
  c.rhs = rhs.str();
  c.rel = r;
  c.pass = rel_holds(lhs, r, rhs);
  c.note = note;
  return c;
}

SetVerdict finish(SetVerdict v) {
  v.pass = !v.clauses.empty() &&
           std::all_of(v.clauses.begin(), v.clauses.end(), [](const ClauseVerdict &c) { return c.pass; });
  return v;
}

// Extended product kappa * x for kappa > 0 finite and x possibly infinite.
ExtRat xprod(const BigRat &kappa, const ExtRat &x) { return ext_scale(kappa, x); }

struct Ctx {
  const ExponentProfile &pr;
  const DerivedExponents &d;
  BigRat N;
  BigRat delta;  // s2 - s1
  Ctx(const ExponentProfile &p_, const DerivedExponents &d_)
      : pr(p_), d(d_), N(p_.N), delta(p_.s2 - p_.s1) {}

  ExtRat thr_N_over_qhat1() const { return ext_div_signed(N, d.q_hat_1_s1); }
  ExtRat thr_N_over_phat() const { return ext_div_signed(N, d.p_hat_s1s2); }
  ExtRat thr_inv_qhat2() const { return ext_div_signed(kOne, d.q_hat_2_s1); }
  ExtRat thr_inv_phat22() const { return ext_div_signed(kOne, d.p_hat_2_s2); }
  ExtRat thr_inv_delta() const { return ext_div_signed(kOne, delta); }

  ExtRat psigma() const { return xprod(pr.p, pr.sigma); }
  ExtRat qm() const { return xprod(pr.q, pr.m); }

  // sigma > q m N / (N + q m phat_{s1,s2}) — threshold with the m = inf limit.
  ExtRat thr_46_sigma() const {
    if (pr.m.finite()) {
      BigRat qm_ = pr.q * pr.m.value();
      return ext_div_signed(qm_ * N, N + qm_ * d.p_hat_s1s2);
    }
    return ext_div_signed(N, d.p_hat_s1s2);
  }

  // m > p sigma N / (N + p sigma (qhat1 - N(s2-s1))) — sigma = inf limit.
  ExtRat thr_47_m() const {
    BigRat E = d.q_hat_1_s1 - N * delta;
    if (pr.sigma.finite()) {
      BigRat ps = pr.p * pr.sigma.value();
      return ext_div_signed(ps * N, N + ps * E);
    }
    return ext_div_signed(N, E);
  }
};

SetVerdict eval_set_42to45(const Ctx &c, const std::string &set_id) {
  SetVerdict v;
  v.set_id = set_id;
  const auto &pr = c.pr;
  const auto &d = c.d;
  ExtRat s1(pr.s1), s2(pr.s2);

  if (set_id == "4.2") {
    v.clauses.push_back(clause("cq<s1", ExtRat(d.c_q), Rel::LT, s1));
    v.clauses.push_back(clause("s1<1", s1, Rel::LT, ExtRat(1)));
    v.clauses.push_back(clause("cp<s2", ExtRat(d.c_p), Rel::LT, s2));
    v.clauses.push_back(clause("s2<1", s2, Rel::LT, ExtRat(1)));
    v.clauses.push_back(clause("1<m", ExtRat(1), Rel::LT, pr.m));
    v.clauses.push_back(clause("m<N/qhat1", pr.m, Rel::LT, c.thr_N_over_qhat1()));
    v.clauses.push_back(clause("1<sigma", ExtRat(1), Rel::LT, pr.sigma));
    v.clauses.push_back(clause("sigma<N/phat", pr.sigma, Rel::LT, c.thr_N_over_phat()));
  } else if (set_id == "4.3") {
    v.clauses.push_back(clause("1/2<s1", ExtRat(kHalf), Rel::LT, s1));
    v.clauses.push_back(clause("s1<cq", s1, Rel::LT, ExtRat(d.c_q)));
    v.clauses.push_back(clause("1/2<s2", ExtRat(kHalf), Rel::LT, s2));
    v.clauses.push_back(clause("s2<cp", s2, Rel::LT, ExtRat(d.c_p)));
    v.clauses.push_back(clause("1/qhat2<m", c.thr_inv_qhat2(), Rel::LT, pr.m));
    v.clauses.push_back(clause("m<N/qhat1", pr.m, Rel::LT, c.thr_N_over_qhat1()));
    v.clauses.push_back(clause("1/phat22<sigma", c.thr_inv_phat22(), Rel::LT, pr.sigma));
    v.clauses.push_back(clause("sigma<N/phat", pr.sigma, Rel::LT, c.thr_N_over_phat()));
  } else if (set_id == "4.4") {
    v.clauses.push_back(clause("cq<s1", ExtRat(d.c_q), Rel::LT, s1));
    v.clauses.push_back(clause("s1<1", s1, Rel::LT, ExtRat(1)));
    v.clauses.push_back(clause("1/2<s2", ExtRat(kHalf), Rel::LT, s2));
    v.clauses.push_back(clause("s2<cp", s2, Rel::LT, ExtRat(d.c_p)));
    v.clauses.push_back(clause("q<p", ExtRat(pr.q), Rel::LT, ExtRat(pr.p)));
    v.clauses.push_back(clause("1<m", ExtRat(1), Rel::LT, pr.m));
    v.clauses.push_back(clause("m<N/qhat1", pr.m, Rel::LT, c.thr_N_over_qhat1()));
    v.clauses.push_back(clause("1/phat22<sigma", c.thr_inv_phat22(), Rel::LT, pr.sigma));
    v.clauses.push_back(clause("sigma<N/phat", pr.sigma, Rel::LT, c.thr_N_over_phat()));
    if (pr.p < pr.q) v.note = "complementary case p<q is not printed in the source";
  } else { // 4.5
    v.clauses.push_back(clause("1/2<s1", ExtRat(kHalf), Rel::LT, s1));
    v.clauses.push_back(clause("s1<cq", s1, Rel::LT, ExtRat(d.c_q)));
    v.clauses.push_back(clause("cp<s2", ExtRat(d.c_p), Rel::LT, s2));
    v.clauses.push_back(clause("s2<1", s2, Rel::LT, ExtRat(1)));
    v.clauses.push_back(clause("1/qhat2<m", c.thr_inv_qhat2(), Rel::LT, pr.m));
    v.clauses.push_back(clause("m<N/qhat1", pr.m, Rel::LT, c.thr_N_over_qhat1()));
    v.clauses.push_back(clause("1<sigma", ExtRat(1), Rel::LT, pr.sigma));
    v.clauses.push_back(clause("sigma<N/phat", pr.sigma, Rel::LT, c.thr_N_over_phat()));
  }
  // shared tail: p sigma < m-bar and q m < sigma-hat
  v.clauses.push_back(clause("psigma<mbar", c.psigma(), Rel::LT, d.m_bar_s1s2_q));
  v.clauses.push_back(clause("qm<sigmahat", c.qm(), Rel::LT, d.sigma_hat_s1s2_p));
  return finish(std::move(v));
}

SetVerdict eval_set_46(const Ctx &c) {
  SetVerdict v;
  v.set_id = "4.6";
  v.clauses.push_back(clause("m>=N/qhat1", c.pr.m, Rel::GE, c.thr_N_over_qhat1()));
  v.clauses.push_back(clause("sigma>qmN/(N+qm*phat)", c.pr.sigma, Rel::GT, c.thr_46_sigma()));
  v.clauses.push_back(clause("psigma<1/(s2-s1)", c.psigma(), Rel::LT, c.thr_inv_delta()));
  return finish(std::move(v));
}

SetVerdict eval_set_47(const Ctx &c) {
  SetVerdict v;
  v.set_id = "4.7";
  v.clauses.push_back(clause("sigma>=N/phat", c.pr.sigma, Rel::GE, c.thr_N_over_phat()));
  v.clauses.push_back(clause("m>psigmaN/(N+psigma*E)", c.pr.m, Rel::GT, c.thr_47_m()));
  return finish(std::move(v));
}

} // namespace

ConditionReport check_existence(const ExponentProfile &pr) {
  pr.validate();
  ConditionReport rep;
  rep.profile = pr;
  rep.derived = derive(pr);
  rep.flags = pr.standing_violations();
  if (pr.s2 < pr.s1) {
    rep.flags.push_back("analogous-case, not printed in paper");
    return rep;
  }
  Ctx c(pr, rep.derived);
  for (const char *id : {"4.2", "4.3", "4.4", "4.5"}) rep.sets.push_back(eval_set_42to45(c, id));
  rep.sets.push_back(eval_set_46(c));
  rep.sets.push_back(eval_set_47(c));
  rep.feasible =
      std::any_of(rep.sets.begin(), rep.sets.end(), [](const SetVerdict &s) { return s.pass; });
  return rep;
}

ConditionReport check_existence_pq1(const ExponentProfile &pr) {
  pr.validate();
  if (pr.p != 1 || pr.q != 1) throw std::invalid_argument("check_existence_pq1 requires p = q = 1");
  ConditionReport rep;
  rep.profile = pr;
  rep.derived = derive(pr);
  if (pr.s2 < pr.s1) {
    rep.flags.push_back("analogous-case, not printed in paper");
    return rep;
  }
  const DerivedExponents &d = rep.derived;
  const BigRat N(pr.N), s1 = pr.s1, s2 = pr.s2, delta = pr.s2 - pr.s1;
  const BigRat two_thirds(2, 3);
  ExtRat thr_m_2s1 = ext_div_signed(N, 2 * s1 - 1);        // 2 s1 - 1 > 0
  ExtRat thr_s_2s2 = ext_div_signed(N, 2 * s2 - 1);
  ExtRat m_upper = ext_min(thr_m_2s1, d.sigma_hat_s2);     // min{N/(2s1-1), sigma-hat_{s2}}
  ExtRat s_upper = ext_min(thr_s_2s2, d.m_bar_s1s2_q);     // min{N/(2s2-1), m-bar_{s1,s2,1}}

  auto window = [&](SetVerdict &v, const ExtRat &m_low, const ExtRat &s_low) {
    v.clauses.push_back(clause("m_low", m_low, Rel::LT, pr.m));
    v.clauses.push_back(clause("m<min", pr.m, Rel::LT, m_upper));
    v.clauses.push_back(clause("sigma_low", s_low, Rel::LT, pr.sigma));
    v.clauses.push_back(clause("sigma<min", pr.sigma, Rel::LT, s_upper));
  };

  {
    SetVerdict v;
    v.set_id = "pq1-first";
    v.clauses.push_back(clause("2/3<s1", ExtRat(two_thirds), Rel::LT, ExtRat(s1)));
    v.clauses.push_back(clause("s1<1", ExtRat(s1), Rel::LT, ExtRat(1)));
    v.clauses.push_back(clause("2/3<s2", ExtRat(two_thirds), Rel::LT, ExtRat(s2)));
    v.clauses.push_back(clause("s2<1", ExtRat(s2), Rel::LT, ExtRat(1)));
    window(v, ExtRat(1), ExtRat(1));
    rep.sets.push_back(finish(std::move(v)));
  }
  {
    SetVerdict v;
    v.set_id = "pq1-second";
    v.clauses.push_back(clause("1/2<s1", ExtRat(kHalf), Rel::LT, ExtRat(s1)));
    v.clauses.push_back(clause("s1<2/3", ExtRat(s1), Rel::LT, ExtRat(two_thirds)));
    v.clauses.push_back(clause("1/2<s2", ExtRat(kHalf), Rel::LT, ExtRat(s2)));
    v.clauses.push_back(clause("s2<2/3", ExtRat(s2), Rel::LT, ExtRat(two_thirds)));
    window(v, ext_div_signed(kOne, 3 * s1 - 1), ext_div_signed(kOne, 3 * s2 - 1));
    rep.sets.push_back(finish(std::move(v)));
  }
  {
    SetVerdict v;
    v.set_id = "pq1-third";
    v.clauses.push_back(clause("1/2<s1", ExtRat(kHalf), Rel::LT, ExtRat(s1)));
    v.clauses.push_back(clause("s1<2/3", ExtRat(s1), Rel::LT, ExtRat(two_thirds)));
    v.clauses.push_back(clause("2/3<s2", ExtRat(two_thirds), Rel::LT, ExtRat(s2)));
    v.clauses.push_back(clause("s2<1", ExtRat(s2), Rel::LT, ExtRat(1)));
    window(v, ext_div_signed(kOne, 3 * s1 - 1), ExtRat(1));
    rep.sets.push_back(finish(std::move(v)));
  }
  {
    SetVerdict v;
    v.set_id = "pq1-fourth";
    v.clauses.push_back(clause("m>=N/(2s1-1)", pr.m, Rel::GE, thr_m_2s1));
    ExtRat lo = pr.m.finite()
                    ? ExtRat(pr.m.value() * N / (N + pr.m.value() * (2 * s2 - 1)))
                    : ext_div_signed(N, 2 * s2 - 1);
    v.clauses.push_back(clause("mN/(N+m(2s2-1))<sigma", lo, Rel::LT, pr.sigma));
    v.clauses.push_back(clause("sigma<1/(s2-s1)", pr.sigma, Rel::LT, ext_div_signed(kOne, delta)));
    rep.sets.push_back(finish(std::move(v)));
  }
  {
    SetVerdict v;
    v.set_id = "pq1-fifth";
    v.clauses.push_back(clause("sigma>=N/(2s2-1)", pr.sigma, Rel::GE, thr_s_2s2));
    BigRat E2 = (2 * s1 - 1) - N * delta;
    ExtRat thr = pr.sigma.finite()
                     ? ext_div_signed(pr.sigma.value() * N, N + pr.sigma.value() * E2)
                     : ext_div_signed(N, E2);
    v.clauses.push_back(clause("m>sigmaN/(N+sigma*E2)", pr.m, Rel::GT, thr));
    rep.sets.push_back(finish(std::move(v)));
  }
  rep.feasible =
      std::any_of(rep.sets.begin(), rep.sets.end(), [](const SetVerdict &s) { return s.pass; });
  return rep;
}

ConditionReport check_nonexistence_thresholds(const ExponentProfile &pr) {
  pr.validate();
  ConditionReport rep;
  rep.profile = pr;
  rep.derived = derive(pr);
  BigRat mx = std::max(pr.p, pr.q);
  BigRat thr1 = (1 + pr.s2) / (kOne - pr.s1);
  BigRat thr2 = kOne / (kOne - pr.s1);
  {
    SetVerdict v;
    v.set_id = "nonexist-thm45-a";
    v.clauses.push_back(clause("max{p,q}>=(1+s2)/(1-s1)", ExtRat(mx), Rel::GE, ExtRat(thr1)));
    rep.sets.push_back(finish(std::move(v)));
  }
  {
    SetVerdict v;
    v.set_id = "nonexist-thm45-b";
    v.clauses.push_back(clause("max{p,q}>=1/(1-s1)", ExtRat(mx), Rel::GE, ExtRat(thr2)));
    rep.sets.push_back(finish(std::move(v)));
  }
  rep.feasible = rep.sets[0].pass || rep.sets[1].pass;
  return rep;
}

ConditionReport check_nonexistence_data(const ExponentProfile &pr) {
  pr.validate();
  ConditionReport rep;
  rep.profile = pr;
  rep.derived = derive(pr);
  SetVerdict v;
  v.set_id = "nonexist-4.24";

  if (!pr.m.finite() && !pr.sigma.finite()) {
    v.note = "m = sigma = inf: flagged for manual review";
    v.pass = false;
    ClauseVerdict c;
    c.id = "manual-review";
    c.lhs = "inf";
    c.rhs = "inf";
    c.rel = Rel::GT;
    c.pass = false;
    c.note = "both integrabilities infinite; limits not taken";
    v.clauses.push_back(c);
    rep.sets.push_back(v);
    rep.flags.push_back("manual-review");
    return rep;
  }

  const BigRat N(pr.N);
  // Sign-aware clause "x > N/(N - D)": true iff N - D <= 0, else x (N-D) > N.
  auto sign_aware = [&](const std::string &id, const ExtRat &x, const ExtRat &D) {
    if (!D.finite()) { // D = +inf => N - D < 0: vacuous
      return clause(id, x, Rel::GT, ExtRat::minus_inf(), "denominator<=0: vacuously true");
    }
    BigRat nd = N - D.value();
    if (nd <= 0) return clause(id, x, Rel::GT, ExtRat::minus_inf(), "denominator<=0: vacuously true");
    return clause(id, x, Rel::GT, ExtRat(N / nd), "denominator>0: compared exactly");
  };

  ExtRat D1 = pr.m.finite() ? ExtRat(pr.m.value() * (2 * pr.s1 - 1)) : ExtRat::plus_inf();
  ExtRat D2 = pr.sigma.finite() ? ExtRat(pr.sigma.value() * (2 * pr.s2 - 1)) : ExtRat::plus_inf();
  Ctx c(pr, rep.derived);
  v.clauses.push_back(sign_aware("psigma>N/(N-m(2s1-1))", c.psigma(), D1));
  v.clauses.push_back(sign_aware("qm>N/(N-sigma(2s2-1))", c.qm(), D2));
  rep.sets.push_back(finish(std::move(v)));
  rep.feasible = rep.sets[0].pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Interval machinery

bool RatInterval::empty() const {
  int c = lo.cmp(hi);
  if (c > 0) return true;
  if (c == 0) return !(lo_closed && hi_closed && lo.finite());
  return false;
}

bool RatInterval::contains(const BigRat &x) const {
  ExtRat v{x};
  int cl = lo.cmp(v);
  if (cl > 0 || (cl == 0 && !lo_closed)) return false;
  int ch = v.cmp(hi);
  if (ch > 0 || (ch == 0 && !hi_closed)) return false;
  return true;
}

std::string RatInterval::str() const {
  std::string s = lo_closed ? "[" : "(";
  s += lo.str();
  s += ", ";
  s += hi.str();
  s += hi_closed ? "]" : ")";
  return s;
}

IntervalSet IntervalSet::all() {
  RatInterval iv{ExtRat::minus_inf(), ExtRat::plus_inf(), false, false};
  return of(iv);
}

IntervalSet IntervalSet::of(RatInterval iv) {
  IntervalSet s;
  if (!iv.empty()) s.parts_.push_back(iv);
  return s;
}

IntervalSet IntervalSet::point(const BigRat &x) {
  return of(RatInterval{ExtRat(x), ExtRat(x), true, true});
}

bool IntervalSet::contains(const BigRat &x) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const RatInterval &iv) { return iv.contains(x); });
}

void IntervalSet::normalize() {
  std::vector<RatInterval> in;
  for (auto &iv : parts_)
    if (!iv.empty()) in.push_back(iv);
  std::sort(in.begin(), in.end(), [](const RatInterval &a, const RatInterval &b) {
    int c = a.lo.cmp(b.lo);
    if (c != 0) return c < 0;
    return a.lo_closed && !b.lo_closed;
  });
  std::vector<RatInterval> out;
  for (auto &iv : in) {
    if (!out.empty()) {
      RatInterval &last = out.back();
      int c = last.hi.cmp(iv.lo);
      bool touch = c > 0 || (c == 0 && (last.hi_closed || iv.lo_closed));
      if (touch) {
        int ch = last.hi.cmp(iv.hi);
        if (ch < 0) {
          last.hi = iv.hi;
          last.hi_closed = iv.hi_closed;
        } else if (ch == 0) {
          last.hi_closed = last.hi_closed || iv.hi_closed;
        }
        continue;
      }
    }
    out.push_back(iv);
  }
  parts_ = std::move(out);
}

IntervalSet IntervalSet::intersect(const IntervalSet &o) const {
  IntervalSet r;
  for (const auto &a : parts_)
    for (const auto &b : o.parts_) {
      RatInterval iv;
      int c = a.lo.cmp(b.lo);
      if (c > 0 || (c == 0 && !a.lo_closed)) {
        iv.lo = a.lo;
        iv.lo_closed = a.lo_closed;
        if (c == 0) iv.lo_closed = a.lo_closed && b.lo_closed;
      } else {
        iv.lo = b.lo;
        iv.lo_closed = b.lo_closed;
        if (c == 0) iv.lo_closed = a.lo_closed && b.lo_closed;
      }
      int ch = a.hi.cmp(b.hi);
      if (ch < 0 || (ch == 0 && !a.hi_closed)) {
        iv.hi = a.hi;
        iv.hi_closed = a.hi_closed;
        if (ch == 0) iv.hi_closed = a.hi_closed && b.hi_closed;
      } else {
        iv.hi = b.hi;
        iv.hi_closed = b.hi_closed;
        if (ch == 0) iv.hi_closed = a.hi_closed && b.hi_closed;
      }
      if (!iv.empty()) r.parts_.push_back(iv);
    }
  r.normalize();
  return r;
}

IntervalSet IntervalSet::unite(const IntervalSet &o) const {
  IntervalSet r;
  r.parts_ = parts_;
  r.parts_.insert(r.parts_.end(), o.parts_.begin(), o.parts_.end());
  r.normalize();
  return r;
}

ExtRat LinFrac::eval(const BigRat &x) const {
  BigRat num = a * x + b;
  BigRat den = c * x + d;
  if (den != 0) return ExtRat(num / den);
  if (num > 0) return ExtRat::plus_inf();
  if (num < 0) return ExtRat::minus_inf();
  // shared root: continuous extension a/c
  if (c != 0) return ExtRat(a / c);
  throw std::domain_error("LinFrac: 0/0");
}

namespace {

// { x : a x + b REL 0 }
IntervalSet solve_linear(const BigRat &a, const BigRat &b, Rel rel) {
  if (a == 0) {
    bool ok = rel_holds(ExtRat(b), rel, ExtRat(0));
    return ok ? IntervalSet::all() : IntervalSet::none();
  }
  BigRat root = -b / a;
  bool closed = (rel == Rel::LE || rel == Rel::GE);
  bool upper = (a > 0) == (rel == Rel::LT || rel == Rel::LE);
  RatInterval iv;
  if (upper) {
    iv = {ExtRat::minus_inf(), ExtRat(root), false, closed};
  } else {
    iv = {ExtRat(root), ExtRat::plus_inf(), closed, false};
  }
  return IntervalSet::of(iv);
}

Rel flip(Rel r) {
  switch (r) {
    case Rel::LT: return Rel::GT;
    case Rel::LE: return Rel::GE;
    case Rel::GT: return Rel::LT;
    case Rel::GE: return Rel::LE;
  }
  return r;
}

} // namespace

IntervalSet solve_compare(const LinFrac &L, Rel rel, const ExtRat &K) {
  // Infinite bound: only the pole value can reach +/-inf (or the whole
  // function if constant).
  if (!K.finite()) {
    IntervalSet res = IntervalSet::none();
    bool want_plus = K.is_plus_inf();
    // Values at non-pole points are finite: "x < +inf" true, "x > +inf" false, etc.
    bool finite_pass = want_plus ? (rel == Rel::LT || rel == Rel::LE)
                                 : (rel == Rel::GT || rel == Rel::GE);
    if (L.c == 0) {
      if (L.d == 0) throw std::domain_error("LinFrac: zero denominator");
      return finite_pass ? IntervalSet::all() : IntervalSet::none();
    }
    BigRat pole = -L.d / L.c;
    ExtRat pole_val = L.eval(pole);
    bool pole_pass = rel_holds(pole_val, rel, K);
    if (finite_pass) {
      res = IntervalSet::all();
      if (!pole_pass) {
        // carve the pole point out
        RatInterval left{ExtRat::minus_inf(), ExtRat(pole), false, false};
        RatInterval right{ExtRat(pole), ExtRat::plus_inf(), false, false};
        res = IntervalSet::of(left).unite(IntervalSet::of(right));
      }
    } else if (pole_pass) {
      res = IntervalSet::point(pole);
    }
    return res;
  }

  const BigRat &k = K.value();
  if (L.c == 0) {
    if (L.d == 0) throw std::domain_error("LinFrac: zero denominator");
    // (a x + b)/d REL k  <=>  (a x + b - k d) REL' 0 with flip for d < 0
    Rel r = L.d > 0 ? rel : flip(rel);
    return solve_linear(L.a, L.b - k * L.d, r);
  }

  BigRat pole = -L.d / L.c;
  // On each side of the pole the denominator sign is fixed:
  //   x < pole: sign = -sign(c);  x > pole: sign = sign(c).
  auto side = [&](bool right_side) {
    bool den_pos = right_side == (L.c > 0);
    Rel r = den_pos ? rel : flip(rel);
    // a x + b REL' k (c x + d)
    IntervalSet lin = solve_linear(L.a - k * L.c, L.b - k * L.d, r);
    RatInterval dom = right_side
                          ? RatInterval{ExtRat(pole), ExtRat::plus_inf(), false, false}
                          : RatInterval{ExtRat::minus_inf(), ExtRat(pole), false, false};
    return lin.intersect(IntervalSet::of(dom));
  };
  IntervalSet res = side(false).unite(side(true));
  ExtRat pole_val = L.eval(pole);
  if (rel_holds(pole_val, rel, K)) res = res.unite(IntervalSet::point(pole));
  return res;
}

// ---------------------------------------------------------------------------
// Region builders

namespace {

// Linear polynomial a*x + b in the sweep variable.
struct Lin {
  BigRat a{0}, b{0};
  bool constant() const { return a == 0; }
  BigRat eval(const BigRat &x) const { return a * x + b; }
};

Lin operator+(const Lin &u, const Lin &v) { return {u.a + v.a, u.b + v.b}; }
Lin operator-(const Lin &u, const Lin &v) { return {u.a - v.a, u.b - v.b}; }
Lin operator*(const BigRat &k, const Lin &v) { return {k * v.a, k * v.b}; }
Lin lconst(const BigRat &k) { return {BigRat(0), k}; }

Lin lmul(const Lin &u, const Lin &v) {
  if (u.constant()) return u.b * v;
  if (v.constant()) return v.b * u;
  throw std::logic_error("lmul: product of two non-constant linears");
}

// { x : L(x) REL R(x) } for linear sides.
IntervalSet solve_lin(const Lin &L, Rel rel, const Lin &R) {
  Lin d = L - R;
  return solve_linear(d.a, d.b, rel);
}

// { x : lhs REL num(x)/(den(x))_+ } with the positive-part convention
// (den <= 0 means the threshold is +inf).  num > 0 on the domain of interest.
IntervalSet solve_vs_pospart(const Lin &lhs, Rel rel, const Lin &num, const Lin &den) {
  // region where den <= 0: threshold +inf
  IntervalSet blow = solve_linear(den.a, den.b, Rel::LE);
  bool lhs_passes_inf = (rel == Rel::LT || rel == Rel::LE); // finite lhs vs +inf
  IntervalSet part1 = lhs_passes_inf ? blow : IntervalSet::none();
  // region where den > 0: lhs * den REL num
  IntervalSet pos = solve_linear(den.a, den.b, Rel::GT);
  IntervalSet cmp = solve_lin(lmul(lhs, den), rel, num);
  return part1.unite(pos.intersect(cmp));
}

// { x : lhs(x) REL num(x)/den(x) } with signed semantics via LinFrac.
// Requires lhs constant or threshold constant.
IntervalSet solve_vs_signed(const Lin &lhs, Rel rel, const Lin &num, const Lin &den) {
  if (!lhs.constant()) {
    if (!num.constant() || !den.constant())
      throw std::logic_error("solve_vs_signed: both sides vary");
    LinFrac lf{lhs.a, lhs.b, BigRat(0), BigRat(1)};
    ExtRat thr = ext_div_signed(num.b, den.b);
    return solve_compare(lf, rel, thr);
  }
  LinFrac lf{num.a, num.b, den.a, den.b};
  return solve_compare(lf, flip(rel), ExtRat(lhs.b));
}

struct SymCtx {
  const ExponentProfile &pr;
  FreeVar fv;
  BigRat N, delta;

  SymCtx(const ExponentProfile &p_, FreeVar f) : pr(p_), fv(f), N(p_.N), delta(p_.s2 - p_.s1) {
    if ((fv != FreeVar::M && !pr.m.finite()) || (fv != FreeVar::Sigma && !pr.sigma.finite()))
      throw std::invalid_argument("region sweep requires finite fixed integrabilities");
  }

  Lin P() const { return fv == FreeVar::P ? Lin{1, 0} : lconst(pr.p); }
  Lin Q() const { return fv == FreeVar::Q ? Lin{1, 0} : lconst(pr.q); }
  Lin M() const { return fv == FreeVar::M ? Lin{1, 0} : lconst(pr.m.value()); }
  Lin Sig() const { return fv == FreeVar::Sigma ? Lin{1, 0} : lconst(pr.sigma.value()); }

  Lin qhat1() const { return lconst(pr.s1) - (kOne - pr.s1) * Q(); }
  Lin qhat2() const { return lconst(2 * pr.s1) - (kOne - pr.s1) * Q(); }
  Lin phat22() const { return lconst(2 * pr.s2) - (kOne - pr.s2) * P(); }
  Lin phat_s1s2() const { return lconst(2 * pr.s2 - pr.s1) - (kOne - pr.s1) * P(); }

  // m-bar as num/den with the pospart convention built in:
  //   m-bar = m N / (N - m qhat1 + m N delta), +inf-free since the
  //   expression is continuous across the m-hat blow-up.
  void mbar(Lin &num, Lin &den) const {
    num = N * M();
    den = lconst(N) - lmul(M(), qhat1()) + lmul(M(), lconst(N * delta));
  }
  // sigma-hat_{s1,s2,p} = sigma N / (N - sigma phat)_+
  void sigmahat(Lin &num, Lin &den) const {
    num = N * Sig();
    den = lconst(N) - lmul(Sig(), phat_s1s2());
  }
};

IntervalSet region_42to45(const SymCtx &c, const std::string &set_id) {
  const BigRat &s1 = c.pr.s1, &s2 = c.pr.s2;
  IntervalSet r = IntervalSet::all();
  auto and_ = [&](IntervalSet s) { r = r.intersect(s); };

  // c_kappa REL s with c_kappa = (kappa+1)/(kappa+2); kappa + 2 > 0 on the domain.
  auto c_kappa_rel = [&](const Lin &kap, Rel rel, const BigRat &s) {
    // (kap + 1) REL s (kap + 2) since kap + 2 > 0 on the domain
    return solve_lin(kap + lconst(BigRat(1)), rel, s * (kap + lconst(BigRat(2))));
  };

  if (set_id == "4.2") {
    and_(c_kappa_rel(c.Q(), Rel::LT, s1));
    if (!(s1 < 1)) return IntervalSet::none();
    and_(c_kappa_rel(c.P(), Rel::LT, s2));
    if (!(s2 < 1)) return IntervalSet::none();
    and_(solve_lin(lconst(kOne), Rel::LT, c.M()));
    and_(solve_vs_signed(c.M(), Rel::LT, lconst(c.N), c.qhat1()));
    and_(solve_lin(lconst(kOne), Rel::LT, c.Sig()));
    and_(solve_vs_signed(c.Sig(), Rel::LT, lconst(c.N), c.phat_s1s2()));
  } else if (set_id == "4.3") {
    if (!(BigRat(1, 2) < s1)) return IntervalSet::none();
    and_(c_kappa_rel(c.Q(), Rel::GT, s1));
    if (!(BigRat(1, 2) < s2)) return IntervalSet::none();
    and_(c_kappa_rel(c.P(), Rel::GT, s2));
    and_(solve_vs_signed(c.M(), Rel::GT, lconst(kOne), c.qhat2()));
    and_(solve_vs_signed(c.M(), Rel::LT, lconst(c.N), c.qhat1()));
    and_(solve_vs_signed(c.Sig(), Rel::GT, lconst(kOne), c.phat22()));
    and_(solve_vs_signed(c.Sig(), Rel::LT, lconst(c.N), c.phat_s1s2()));
  } else if (set_id == "4.4") {
    and_(c_kappa_rel(c.Q(), Rel::LT, s1));
    if (!(s1 < 1) || !(BigRat(1, 2) < s2)) return IntervalSet::none();
    and_(c_kappa_rel(c.P(), Rel::GT, s2));
    and_(solve_lin(c.Q(), Rel::LT, c.P()));
    and_(solve_lin(lconst(kOne), Rel::LT, c.M()));
    and_(solve_vs_signed(c.M(), Rel::LT, lconst(c.N), c.qhat1()));
    and_(solve_vs_signed(c.Sig(), Rel::GT, lconst(kOne), c.phat22()));
    and_(solve_vs_signed(c.Sig(), Rel::LT, lconst(c.N), c.phat_s1s2()));
  } else { // 4.5
    if (!(BigRat(1, 2) < s1) || !(s2 < 1)) return IntervalSet::none();
    and_(c_kappa_rel(c.Q(), Rel::GT, s1));
    and_(c_kappa_rel(c.P(), Rel::LT, s2));
    and_(solve_vs_signed(c.M(), Rel::GT, lconst(kOne), c.qhat2()));
    and_(solve_vs_signed(c.M(), Rel::LT, lconst(c.N), c.qhat1()));
    and_(solve_lin(lconst(kOne), Rel::LT, c.Sig()));
    and_(solve_vs_signed(c.Sig(), Rel::LT, lconst(c.N), c.phat_s1s2()));
  }

  Lin num, den;
  c.mbar(num, den);
  and_(solve_vs_pospart(lmul(c.P(), c.Sig()), Rel::LT, num, den));
  c.sigmahat(num, den);
  and_(solve_vs_pospart(lmul(c.Q(), c.M()), Rel::LT, num, den));
  return r;
}

IntervalSet region_46(const SymCtx &c) {
  IntervalSet r = IntervalSet::all();
  // m >= N/qhat1, signed
  r = r.intersect(solve_vs_signed(c.M(), Rel::GE, lconst(c.N), c.qhat1()));
  // sigma > q m N / (N + q m phat), signed
  Lin qm = lmul(c.Q(), c.M());
  Lin num = c.N * qm;
  Lin den = lconst(c.N) + lmul(qm, c.phat_s1s2());
  r = r.intersect(solve_vs_signed(c.Sig(), Rel::GT, num, den));
  // p sigma < 1/(s2-s1)
  Lin ps = lmul(c.P(), c.Sig());
  r = r.intersect(solve_vs_signed(ps, Rel::LT, lconst(kOne), lconst(c.delta)));
  return r;
}

IntervalSet region_47(const SymCtx &c) {
  IntervalSet r = IntervalSet::all();
  r = r.intersect(solve_vs_signed(c.Sig(), Rel::GE, lconst(c.N), c.phat_s1s2()));
  Lin ps = lmul(c.P(), c.Sig());
  Lin E = c.qhat1() - lconst(c.N * c.delta);
  Lin num = c.N * ps;
  Lin den = lconst(c.N) + lmul(ps, E);
  r = r.intersect(solve_vs_signed(c.M(), Rel::GT, num, den));
  return r;
}

IntervalSet domain_box(FreeVar fv) {
  // sweep domain: [1, +inf)
  (void)fv;
  return IntervalSet::of(RatInterval{ExtRat(1), ExtRat::plus_inf(), true, false});
}

} // namespace

IntervalSet condition_set_region(const ExponentProfile &pr, const std::string &set_id, FreeVar fv) {
  SymCtx c(pr, fv);
  IntervalSet r;
  if (set_id == "4.6")
    r = region_46(c);
  else if (set_id == "4.7")
    r = region_47(c);
  else
    r = region_42to45(c, set_id);
  return r.intersect(domain_box(fv));
}

IntervalSet nonexist_data_region(const ExponentProfile &pr, FreeVar fv) {
  SymCtx c(pr, fv);
  // clause "x > N/(N-D)" sign-aware: (N-D <= 0) or (x (N-D) > N)
  auto cl = [&](const Lin &x, const Lin &D) {
    Lin nd = lconst(c.N) - D;
    IntervalSet vac = solve_linear(nd.a, nd.b, Rel::LE);
    IntervalSet pos = solve_linear(nd.a, nd.b, Rel::GT);
    IntervalSet cmp = solve_lin(lmul(x, nd), Rel::GT, lconst(c.N));
    return vac.unite(pos.intersect(cmp));
  };
  Lin D1 = lmul(c.M(), lconst(2 * pr.s1 - 1));
  Lin D2 = lmul(c.Sig(), lconst(2 * pr.s2 - 1));
  IntervalSet r = cl(lmul(c.P(), c.Sig()), D1).intersect(cl(lmul(c.Q(), c.M()), D2));
  return r.intersect(domain_box(fv));
}

std::string free_var_name(FreeVar v) {
  switch (v) {
    case FreeVar::P: return "p";
    case FreeVar::Q: return "q";
    case FreeVar::M: return "m";
    case FreeVar::Sigma: return "sigma";
  }
  return "?";
}

namespace {

// Whether an existence set is satisfiable for SOME finite (m, sigma) when the
// profile carries L^infty data; only (4.6)/(4.7) are evaluated this way.
// Sound because L^infty(Omega) embeds in every L^r(Omega) on bounded Omega.
bool linfty_closure_passes(const ExponentProfile &pr0, const std::string &set_id, const BigRat &x,
                           FreeVar fv) {
  std::vector<ExtRat> trial = {ExtRat(2),  ExtRat(4),   ExtRat(8),    ExtRat(16),
                               ExtRat(64), ExtRat(256), ExtRat(4096), ExtRat(1 << 30)};
  ExponentProfile pr = pr0;
  if (fv == FreeVar::P) pr.p = x;
  if (fv == FreeVar::Q) pr.q = x;
  bool m_free = !pr0.m.finite();
  bool s_free = !pr0.sigma.finite();
  auto passes_at = [&](const ExtRat &mm, const ExtRat &ss) {
    ExponentProfile t = pr;
    t.m = mm;
    t.sigma = ss;
    ConditionReport rep = check_existence(t);
    for (const auto &sv : rep.sets)
      if (sv.set_id == set_id && sv.pass) return true;
    return false;
  };
  // Downgrade candidates include keeping inf on the coordinate that stays inf.
  std::vector<ExtRat> ms = m_free ? trial : std::vector<ExtRat>{pr0.m};
  if (m_free) ms.push_back(ExtRat::plus_inf());
  std::vector<ExtRat> ss = s_free ? trial : std::vector<ExtRat>{pr0.sigma};
  if (s_free) ss.push_back(ExtRat::plus_inf());
  for (const auto &mm : ms)
    for (const auto &sg : ss)
      if (passes_at(mm, sg)) return true;
  return false;
}

} // namespace

std::vector<SweepInterval> feasible_region(const ExponentProfile &pr, FreeVar fv) {
  pr.validate();
  const std::vector<std::string> set_ids = {"4.2", "4.3", "4.4", "4.5", "4.6", "4.7"};
  bool exponent_sweep = (fv == FreeVar::P || fv == FreeVar::Q);
  bool has_inf = !pr.m.finite() || !pr.sigma.finite();

  // hypothesis box for p/q sweeps
  IntervalSet box = domain_box(fv);
  std::vector<std::string> base_notes;
  if (exponent_sweep) {
    BigRat a_cap = pr.s2 / (kOne - pr.s1);   // weight window of the regularity theorems
    BigRat standing = (fv == FreeVar::Q ? pr.s1 : pr.s2) / (kOne - pr.s1);
    if (has_inf) {
      // Comments' convention: cap at the standing bound, inclusive.
      box = box.intersect(
          IntervalSet::of(RatInterval{ExtRat(1), ExtRat(standing), true, true}));
      base_notes.push_back("linfty-closure; standing cap inclusive");
    } else {
      box = box.intersect(IntervalSet::of(RatInterval{ExtRat(1), ExtRat(a_cap), true, false}));
    }
    // pq > 1
    const BigRat &other = (fv == FreeVar::Q) ? pr.p : pr.q;
    IntervalSet pq = solve_linear(other, BigRat(-1), Rel::GT); // other * x - 1 > 0
    box = box.intersect(pq);
  }

  struct Tagged {
    IntervalSet set;
    std::string id;
  };
  std::vector<Tagged> per_set;
  for (const auto &id : set_ids) {
    IntervalSet region;
    if (has_inf) {
      if (!exponent_sweep)
        throw std::invalid_argument("m/sigma sweep with infinite fixed data is not supported");
      if (id == "4.6" || id == "4.7") {
        // closure region probed on the box; clause algebra is replaced by
        // exact satisfiability checks at interval endpoints and midpoints.
        // The sets' q/p dependence under closure is piecewise-constant over
        // the box here (see ledger), so one representative suffices per part.
        for (const auto &part : box.parts()) {
          BigRat probe;
          if (part.lo.finite() && part.hi.finite())
            probe = (part.lo.value() + part.hi.value()) / 2;
          else if (part.lo.finite())
            probe = part.lo.value() + 1;
          else
            probe = part.hi.value() - 1;
          if (linfty_closure_passes(pr, id, probe, fv))
            region = region.unite(IntervalSet::of(part));
        }
      }
    } else {
      region = condition_set_region(pr, id, fv).intersect(box);
    }
    if (!region.empty()) per_set.push_back({region, id});
  }

  // assemble the union, then tag each maximal interval with every witness set
  IntervalSet uni;
  for (const auto &t : per_set) uni = uni.unite(t.set);
  std::vector<SweepInterval> out;
  for (const auto &part : uni.parts()) {
    SweepInterval si;
    si.iv = part;
    for (const auto &t : per_set) {
      IntervalSet probe = t.set.intersect(IntervalSet::of(part));
      if (!probe.empty()) si.witnesses.push_back(t.id);
    }
    si.notes = base_notes;
    if (fv == FreeVar::Q) {
      BigRat qcap = pr.s1 / (kOne - pr.s1);
      if (part.hi > ExtRat(qcap) || (part.hi == ExtRat(qcap) && part.hi_closed))
        si.notes.push_back("extends into q >= s1/(1-s1): paper-open");
    }
    out.push_back(std::move(si));
  }
  return out;
}

std::vector<SweepInterval> nonexist_data_sweep(const ExponentProfile &pr, FreeVar fv) {
  pr.validate();
  IntervalSet region = nonexist_data_region(pr, fv);
  std::vector<SweepInterval> out;
  const BigRat zero_den_m = pr.N / (2 * pr.s1 - 1);
  const BigRat zero_den_s = pr.N / (2 * pr.s2 - 1);
  for (const auto &part : region.parts()) {
    SweepInterval si;
    si.iv = part;
    si.witnesses.push_back("nonexist-4.24");
    const BigRat &zd = (fv == FreeVar::M) ? zero_den_m : zero_den_s;
    if ((fv == FreeVar::M || fv == FreeVar::Sigma) && part.lo == ExtRat(zd) && part.lo_closed)
      si.notes.push_back("endpoint N/(2s-1): spec convention closed, paper prints open");
    out.push_back(std::move(si));
  }
  return out;
}

} // namespace fracgrad
