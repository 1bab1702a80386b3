#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracgrad/exponents.hpp"
#include "fracgrad/golden.hpp"

#include <optional>

using namespace fracgrad;

namespace {

ExponentProfile make(const BigRat &s1, const BigRat &s2, const BigRat &p, const BigRat &q, int N,
                     ExtRat m, ExtRat sigma) {
  ExponentProfile pr;
  pr.s1 = s1;
  pr.s2 = s2;
  pr.p = p;
  pr.q = q;
  pr.N = N;
  pr.m = m;
  pr.sigma = sigma;
  return pr;
}

const SetVerdict &set_of(const ConditionReport &rep, const std::string &id) {
  for (const auto &s : rep.sets)
    if (s.set_id == id) return s;
  throw std::runtime_error("missing set " + id);
}

// Independent brute-force re-reading of the condition sets as literal
// inequality lists, for finite m, sigma, with plain rational arithmetic;
// blown-up thresholds are represented as absent (= +inf) bounds.
namespace literal {

struct Q {
  bool inf = false;
  BigRat v;
};
Q qv(const BigRat &x) { return {false, x}; }
Q qinf() { return {true, BigRat(0)}; }
bool lt(const Q &a, const Q &b) { return !a.inf && (b.inf || a.v < b.v); }
bool le(const Q &a, const Q &b) { return (a.inf && b.inf) || lt(a, b) || (!a.inf && !b.inf && a.v == b.v); }

// m-hat etc. straight from the notation list, with (.)_+ -> absent bound.
Q mhat(const BigRat &m, int N, const BigRat &s1, const BigRat &q) {
  BigRat den = N - m * (s1 - q * (1 - s1));
  if (den <= 0) return qinf();
  return qv(m * BigRat(N) / den);
}
Q mbar(const BigRat &m, int N, const BigRat &s1, const BigRat &s2, const BigRat &q) {
  Q mh = mhat(m, N, s1, q);
  if (mh.inf) {
    if (s2 == s1) return qinf();
    return qv(BigRat(1) / (s2 - s1));
  }
  return qv(mh.v / (1 + mh.v * (s2 - s1)));
}
Q sigmahat(const BigRat &sg, int N, const BigRat &s1, const BigRat &s2, const BigRat &p) {
  BigRat den = N - sg * (2 * s2 - s1 - p * (1 - s1));
  if (den <= 0) return qinf();
  return qv(sg * BigRat(N) / den);
}

// verdicts for (4.2)-(4.7); any-of for feasibility over the six sets.
bool set42(const ExponentProfile &pr) {
  const BigRat &s1 = pr.s1, &s2 = pr.s2, &p = pr.p, &q = pr.q;
  BigRat m = pr.m.value(), sg = pr.sigma.value();
  int N = pr.N;
  BigRat qh1 = s1 - q * (1 - s1), ph = 2 * s2 - s1 - p * (1 - s1);
  bool ok = (q + 1) / (q + 2) < s1 && s1 < 1 && (p + 1) / (p + 2) < s2 && s2 < 1;
  ok = ok && 1 < m && (qh1 > 0 ? m * qh1 < N : false);
  ok = ok && 1 < sg && (ph > 0 ? sg * ph < N : false);
  ok = ok && lt(qv(p * sg), mbar(m, N, s1, s2, q)) && lt(qv(q * m), sigmahat(sg, N, s1, s2, p));
  return ok;
}
bool set43(const ExponentProfile &pr) {
  const BigRat &s1 = pr.s1, &s2 = pr.s2, &p = pr.p, &q = pr.q;
  BigRat m = pr.m.value(), sg = pr.sigma.value();
  int N = pr.N;
  BigRat qh1 = s1 - q * (1 - s1), qh2 = 2 * s1 - q * (1 - s1);
  BigRat ph = 2 * s2 - s1 - p * (1 - s1), ph22 = 2 * s2 - p * (1 - s2);
  bool ok = BigRat(1, 2) < s1 && s1 < (q + 1) / (q + 2) && BigRat(1, 2) < s2 && s2 < (p + 1) / (p + 2);
  ok = ok && (qh2 > 0 ? m * qh2 > 1 : true) && (qh1 > 0 ? m * qh1 < N : false);
  ok = ok && (ph22 > 0 ? sg * ph22 > 1 : true) && (ph > 0 ? sg * ph < N : false);
  ok = ok && lt(qv(p * sg), mbar(m, N, s1, s2, q)) && lt(qv(q * m), sigmahat(sg, N, s1, s2, p));
  return ok;
}
bool set44(const ExponentProfile &pr) {
  const BigRat &s1 = pr.s1, &s2 = pr.s2, &p = pr.p, &q = pr.q;
  BigRat m = pr.m.value(), sg = pr.sigma.value();
  int N = pr.N;
  BigRat qh1 = s1 - q * (1 - s1), ph = 2 * s2 - s1 - p * (1 - s1), ph22 = 2 * s2 - p * (1 - s2);
  bool ok = (q + 1) / (q + 2) < s1 && s1 < 1 && BigRat(1, 2) < s2 && s2 < (p + 1) / (p + 2) && q < p;
  ok = ok && 1 < m && (qh1 > 0 ? m * qh1 < N : false);
  ok = ok && (ph22 > 0 ? sg * ph22 > 1 : true) && (ph > 0 ? sg * ph < N : false);
  ok = ok && lt(qv(p * sg), mbar(m, N, s1, s2, q)) && lt(qv(q * m), sigmahat(sg, N, s1, s2, p));
  return ok;
}
bool set45(const ExponentProfile &pr) {
  const BigRat &s1 = pr.s1, &s2 = pr.s2, &p = pr.p, &q = pr.q;
  BigRat m = pr.m.value(), sg = pr.sigma.value();
  int N = pr.N;
  BigRat qh1 = s1 - q * (1 - s1), qh2 = 2 * s1 - q * (1 - s1), ph = 2 * s2 - s1 - p * (1 - s1);
  bool ok = BigRat(1, 2) < s1 && s1 < (q + 1) / (q + 2) && (p + 1) / (p + 2) < s2 && s2 < 1;
  ok = ok && (qh2 > 0 ? m * qh2 > 1 : true) && (qh1 > 0 ? m * qh1 < N : false);
  ok = ok && 1 < sg && (ph > 0 ? sg * ph < N : false);
  ok = ok && lt(qv(p * sg), mbar(m, N, s1, s2, q)) && lt(qv(q * m), sigmahat(sg, N, s1, s2, p));
  return ok;
}
bool set46(const ExponentProfile &pr) {
  const BigRat &s1 = pr.s1, &s2 = pr.s2, &p = pr.p, &q = pr.q;
  BigRat m = pr.m.value(), sg = pr.sigma.value();
  int N = pr.N;
  BigRat qh1 = s1 - q * (1 - s1), ph = 2 * s2 - s1 - p * (1 - s1);
  // m >= N/qh1 with signed reading
  bool c1 = qh1 > 0 ? m * qh1 >= N : (qh1 < 0 ? true : false);
  // sigma > q m N / (N + q m ph), signed
  BigRat den = N + q * m * ph;
  bool c2 = den > 0 ? sg * den > q * m * N : (den < 0 ? true : false);
  bool c3 = p * sg * (s2 - s1) < 1;
  return c1 && c2 && c3;
}
bool set47(const ExponentProfile &pr) {
  const BigRat &s1 = pr.s1, &s2 = pr.s2, &p = pr.p, &q = pr.q;
  BigRat m = pr.m.value(), sg = pr.sigma.value();
  int N = pr.N;
  BigRat ph = 2 * s2 - s1 - p * (1 - s1);
  bool c1 = ph > 0 ? sg * ph >= N : (ph < 0 ? true : false);
  BigRat E = (s1 - q * (1 - s1)) - N * (s2 - s1);
  BigRat den = N + p * sg * E;
  bool c2 = den > 0 ? m * den > p * sg * N : (den < 0 ? true : false);
  return c1 && c2;
}

} // namespace literal

} // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rat("3/4") == BigRat(3, 4));
  CHECK(parse_rat("-7") == BigRat(-7));
  CHECK(parse_ext_rat("inf").is_plus_inf());
  CHECK(rat_str(BigRat(40, 16)) == "5/2");
  CHECK_THROWS_AS(parse_rat("x/y"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK(ext_div_signed(BigRat(3), BigRat(-2)) == ExtRat(BigRat(-3, 2)));
  CHECK(ext_div_signed(BigRat(3), BigRat(0)).is_plus_inf());
  CHECK(ext_div_pospart(BigRat(3), BigRat(-2)).is_plus_inf());
}

TEST_CASE("derive: golden profile values") {
  // (s1=3/4, s2=9/10, q=1, N=2, m=2): m-hat = 4 = 8/(1+q), m-bar = 5/2 = 40/(5q+11)
  auto pr = make(BigRat(3, 4), BigRat(9, 10), 1, 1, 2, ExtRat(2), ExtRat(2));
  auto d = derive(pr);
  CHECK(d.m_hat_s1_q == ExtRat(4));
  CHECK(d.m_bar_s1s2_q == ExtRat(BigRat(5, 2)));

  // cross-check by independent evaluation of the notation-list formulas
  CHECK(literal::mhat(BigRat(2), 2, pr.s1, pr.q).v == 4);
  CHECK(literal::mbar(BigRat(2), 2, pr.s1, pr.s2, pr.q).v == BigRat(5, 2));

  // parametric identity m-bar = 40/(5q+11) at m=N=2, s=(3/4,9/10)
  for (long long num = 4; num <= 11; ++num) {
    BigRat q(num, 4); // q in [1, 11/4]
    auto t = make(BigRat(3, 4), BigRat(9, 10), 1, q, 2, ExtRat(2), ExtRat(2));
    auto dt = derive(t);
    CHECK(dt.m_bar_s1s2_q == ExtRat(BigRat(40) / (5 * q + 11)));
  }
}

TEST_CASE("derive: s1 == s2 collapse") {
  // with s1 = s2 = s every two-order quantity equals its single-order version
  for (auto s : {BigRat(3, 5), BigRat(3, 4), BigRat(9, 10)}) {
    for (auto q : {BigRat(1), BigRat(3, 2), BigRat(2)}) {
      for (auto m : {BigRat(1), BigRat(2), BigRat(5)}) {
        auto pr = make(s, s, BigRat(3, 2), q, 2, ExtRat(m), ExtRat(2));
        auto d = derive(pr);
        CHECK(d.q_hat_s1s2 == d.q_hat_1_s1); // 2s2-s1-q(1-s1) collapses to s-q(1-s)
        CHECK(d.m_bar_s1s2_q == d.m_hat_s1_q);
        // sigma-hat_{s1,s2,p} reduces to sigma N/(N - sigma (2s - s - p(1-s)))
        BigRat ph = 2 * s - s - pr.p * (1 - s);
        BigRat den = BigRat(pr.N) - BigRat(2) * ph;
        if (den > 0)
          CHECK(d.sigma_hat_s1s2_p == ExtRat(BigRat(2) * BigRat(pr.N) / den));
        else
          CHECK(d.sigma_hat_s1s2_p.is_plus_inf());
      }
    }
  }
}

TEST_CASE("derive: m = inf limits") {
  // q-hat positive: m-hat blows up, m-bar tends to 1/(s2-s1)
  auto pr = make(BigRat(3, 4), BigRat(9, 10), 1, 1, 2, ExtRat::plus_inf(), ExtRat::plus_inf());
  auto d = derive(pr);
  CHECK(d.m_hat_s1_q.is_plus_inf());
  CHECK(d.m_bar_s1s2_q == ExtRat(BigRat(20, 3)));
  CHECK(d.sigma_hat_s2.is_plus_inf());
  // q-hat negative (q > s1/(1-s1)): finite limit N/|q-hat|
  auto pr2 = make(BigRat(3, 4), BigRat(9, 10), 1, BigRat(7, 2), 2, ExtRat::plus_inf(), ExtRat(2));
  auto d2 = derive(pr2);
  BigRat qh = pr2.s1 - pr2.q * (1 - pr2.s1); // = -1/8
  CHECK(qh < 0);
  CHECK(d2.m_hat_s1_q == ExtRat(BigRat(2) / -qh));
}

TEST_CASE("monotonicity: m-bar strictly decreasing in q") {
  auto base = make(BigRat(3, 4), BigRat(9, 10), 1, 1, 2, ExtRat(2), ExtRat(2));
  std::optional<ExtRat> prev;
  for (long long k = 4; k <= 11; ++k) { // q from 1 to 11/4, inside finite-m-hat range
    auto pr = base;
    pr.q = BigRat(k, 4);
    auto d = derive(pr);
    REQUIRE(d.m_hat_s1_q.finite());
    if (prev) CHECK(d.m_bar_s1s2_q < *prev);
    prev = d.m_bar_s1s2_q;
  }
}

TEST_CASE("check_existence: spec'd point examples") {
  // set (4.2) passes: q=3/2, p=1 at m=sigma=N=2 (p < 40/37, pq > 1)
  auto pr1 = make(BigRat(3, 4), BigRat(9, 10), 1, BigRat(3, 2), 2, ExtRat(2), ExtRat(2));
  auto rep1 = check_existence(pr1);
  CHECK(set_of(rep1, "4.2").pass);
  CHECK(rep1.feasible);

  // m=3, sigma=2: p=8/5 passes, p=12/7 fails (bound 120/71 at q=3/2)
  auto pr2 = make(BigRat(3, 4), BigRat(9, 10), BigRat(8, 5), BigRat(3, 2), 2, ExtRat(3), ExtRat(2));
  CHECK(set_of(check_existence(pr2), "4.2").pass);
  pr2.p = BigRat(12, 7);
  CHECK_FALSE(set_of(check_existence(pr2), "4.2").pass);

  // N=3, m=sigma=3, q=16/5, p=1: set (4.6) passes
  auto pr3 = make(BigRat(3, 4), BigRat(9, 10), 1, BigRat(16, 5), 3, ExtRat(3), ExtRat(3));
  auto rep3 = check_existence(pr3);
  CHECK(set_of(rep3, "4.6").pass);
  // q = 16/5 > 3 = s1/(1-s1): flagged as the paper-open region
  bool open_flag = false;
  for (const auto &f : rep3.flags) open_flag = open_flag || f.find("paper-open") != std::string::npos;
  CHECK(open_flag);
}

TEST_CASE("check_existence agrees with the literal brute-force tables") {
  std::vector<BigRat> s1s = {BigRat(3, 4), BigRat(3, 5), BigRat(7, 10)};
  std::vector<BigRat> s2s = {BigRat(9, 10), BigRat(4, 5)};
  std::vector<BigRat> ps = {BigRat(1), BigRat(3, 2), BigRat(2), BigRat(16, 5)};
  std::vector<BigRat> qs = {BigRat(1), BigRat(5, 4), BigRat(2), BigRat(16, 5)};
  std::vector<BigRat> ms = {BigRat(1), BigRat(2), BigRat(3), BigRat(7)};
  std::vector<BigRat> sgs = {BigRat(1), BigRat(2), BigRat(3), BigRat(7, 2)};
  int checked = 0;
  for (const auto &s1 : s1s)
    for (const auto &s2 : s2s) {
      if (s2 < s1) continue;
      for (const auto &p : ps)
        for (const auto &q : qs)
          for (const auto &m : ms)
            for (const auto &sg : sgs) {
              auto pr = make(s1, s2, p, q, 2, ExtRat(m), ExtRat(sg));
              auto rep = check_existence(pr);
              CHECK(set_of(rep, "4.2").pass == literal::set42(pr));
              CHECK(set_of(rep, "4.3").pass == literal::set43(pr));
              CHECK(set_of(rep, "4.4").pass == literal::set44(pr));
              CHECK(set_of(rep, "4.5").pass == literal::set45(pr));
              CHECK(set_of(rep, "4.6").pass == literal::set46(pr));
              CHECK(set_of(rep, "4.7").pass == literal::set47(pr));
              ++checked;
            }
    }
  CHECK(checked > 1000);
}

TEST_CASE("check_existence_pq1: spec'd examples") {
  // (4.12) needs 2/3 < s1 < 1 and the exact m/sigma windows
  auto pr = make(BigRat(3, 4), BigRat(9, 10), 1, 1, 3, ExtRat(2), ExtRat(BigRat(3, 2)));
  auto rep = check_existence_pq1(pr);
  // N/(2s1-1) = 6, sigma-hat_{s2} = 3*3/2/(3-3/2*4/5) = ... evaluated exactly inside;
  // here m=2 < min{6, sigma-hat}, sigma=3/2 < min{N/(2s2-1)=15/4, m-bar}
  auto d = derive(pr);
  CHECK(set_of(rep, "pq1-first").pass ==
        (ExtRat(2) < ext_min(ExtRat(6), d.sigma_hat_s2) && ExtRat(1) < ExtRat(2) &&
         ExtRat(BigRat(3, 2)) < ext_min(ExtRat(BigRat(15, 4)), d.m_bar_s1s2_q)));

  // s1 = 3/5 < 2/3: (4.12) fails its first clause regardless of m, sigma
  auto pr2 = make(BigRat(3, 5), BigRat(9, 10), 1, 1, 3, ExtRat(2), ExtRat(2));
  auto rep2 = check_existence_pq1(pr2);
  CHECK_FALSE(set_of(rep2, "pq1-first").pass);
  CHECK_FALSE(set_of(rep2, "pq1-first").clauses[0].pass);

  // m = inf: (4.15) first clause passes vacuously; sigma window is
  // (N/(2s2-1), 1/(s2-s1)) exactly
  auto pr3 = make(BigRat(3, 4), BigRat(9, 10), 1, 1, 3, ExtRat::plus_inf(), ExtRat(4));
  auto rep3 = check_existence_pq1(pr3);
  const auto &s = set_of(rep3, "pq1-fourth");
  CHECK(s.clauses[0].pass);                    // inf >= N/(2s1-1)
  CHECK(s.clauses[1].lhs == rat_str(BigRat(15, 4))); // N/(2s2-1) = 3/(4/5)
  CHECK(s.clauses[1].pass);                    // 15/4 < 4
  CHECK(s.clauses[2].pass);                    // 4 < 1/(s2-s1) = 20/3
  CHECK(s.pass);

  CHECK_THROWS_AS(check_existence_pq1(make(BigRat(3, 4), BigRat(9, 10), 2, 1, 3, ExtRat(2), ExtRat(2))),
                  std::invalid_argument);
}

TEST_CASE("check_nonexistence_thresholds: boundary semantics") {
  // p = 4 hits 1/(1-s1) = 4 exactly: non-strict
  auto pr = make(BigRat(3, 4), BigRat(9, 10), 4, 1, 2, ExtRat(2), ExtRat(2));
  auto rep = check_nonexistence_thresholds(pr);
  CHECK_FALSE(set_of(rep, "nonexist-thm45-a").pass); // 4 < 38/5
  CHECK(set_of(rep, "nonexist-thm45-b").pass);       // 4 >= 4

  // p = 38/5 = (1+s2)/(1-s1): case 1 triggers
  pr.p = BigRat(38, 5);
  rep = check_nonexistence_thresholds(pr);
  CHECK(set_of(rep, "nonexist-thm45-a").pass);

  // p = q = 2 < 4: neither
  pr.p = 2;
  pr.q = 2;
  rep = check_nonexistence_thresholds(pr);
  CHECK_FALSE(rep.feasible);
}

TEST_CASE("check_nonexistence_data: sign-aware clauses") {
  // N=3, p=q=1, sigma=2, m=7: clause 1 vacuous (m > 6), clause 2 7 > 15/7
  auto pr = make(BigRat(3, 4), BigRat(9, 10), 1, 1, 3, ExtRat(7), ExtRat(2));
  auto rep = check_nonexistence_data(pr);
  CHECK(rep.feasible);
  CHECK(rep.sets[0].clauses[0].note.find("vacuous") != std::string::npos);

  // m = 3: boundary 2*(3/2) = 3 not > 3 — fails
  pr.m = ExtRat(3);
  CHECK_FALSE(check_nonexistence_data(pr).feasible);

  // m = sigma = inf: documented refusal
  pr.m = ExtRat::plus_inf();
  pr.sigma = ExtRat::plus_inf();
  auto rep3 = check_nonexistence_data(pr);
  CHECK_FALSE(rep3.feasible);
  bool flagged = false;
  for (const auto &f : rep3.flags) flagged = flagged || f == "manual-review";
  CHECK(flagged);
}

TEST_CASE("interval machinery") {
  LinFrac cq{1, 1, 1, 2}; // (q+1)/(q+2)
  auto r = solve_compare(cq, Rel::LT, ExtRat(BigRat(3, 4)));
  // (q+1)/(q+2) < 3/4 <=> q < 2 on q > -2
  CHECK(r.contains(BigRat(1)));
  CHECK(r.contains(BigRat(19, 10)));
  CHECK_FALSE(r.contains(BigRat(2)));
  CHECK_FALSE(r.contains(BigRat(5, 2)));

  // pole semantics: N/qhat1 with qhat1 = (3-q)/4, N=2 — value +inf at q=3
  LinFrac thr{0, 2, BigRat(-1, 4), BigRat(3, 4)};
  auto le = solve_compare(thr, Rel::LE, ExtRat(3)); // N/qhat1 <= m=3
  CHECK_FALSE(le.contains(BigRat(1)));  // 2/(1/2) = 4 > 3
  CHECK_FALSE(le.contains(BigRat(3))); // +inf
  CHECK(le.contains(BigRat(4)));       // negative threshold
  auto lt_inf = solve_compare(thr, Rel::LT, ExtRat::plus_inf());
  CHECK(lt_inf.contains(BigRat(1)));
  CHECK_FALSE(lt_inf.contains(BigRat(3))); // +inf < +inf fails
  CHECK(lt_inf.contains(BigRat(4)));
}

TEST_CASE("sweep endpoints match point verdicts") {
  // sample inside/outside each sweep interval and compare with check_existence
  auto pr = make(BigRat(3, 4), BigRat(9, 10), 1, 1, 2, ExtRat(2), ExtRat(2));
  auto sw = feasible_region(pr, FreeVar::Q);
  REQUIRE(!sw.empty());
  for (const auto &si : sw) {
    if (si.iv.lo.finite() && si.iv.hi.finite()) {
      BigRat mid = (si.iv.lo.value() + si.iv.hi.value()) / 2;
      auto t = pr;
      t.q = mid;
      CHECK(check_existence(t).feasible);
    }
  }
  // outside: q = 5/2 lies in no interval for this profile
  auto t = pr;
  t.q = BigRat(5, 2);
  bool covered = false;
  for (const auto &si : sw) covered = covered || si.iv.contains(BigRat(5, 2));
  CHECK(check_existence(t).feasible == covered);
}

TEST_CASE("golden comment blocks reproduce exactly") {
  for (const auto &c : golden_existence_comments()) {
    INFO(c.id, ": ", c.detail);
    CHECK(c.pass);
  }
  for (const auto &c : golden_nonexistence_comments()) {
    INFO(c.id, ": ", c.detail);
    CHECK(c.pass);
  }
}
