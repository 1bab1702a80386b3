#include "fracgrad/golden.hpp"

#include "fracgrad/exponents.hpp"

#include <sstream>

namespace fracgrad {

namespace {

ExponentProfile base_profile(int N) {
  ExponentProfile pr;
  pr.s1 = BigRat(3, 4);
  pr.s2 = BigRat(9, 10);
  pr.N = N;
  return pr;
}

struct Harness {
  std::vector<GoldenCheck> out;

  void record(const std::string &id, bool pass, const std::string &detail) {
    out.push_back({id, pass, detail});
  }

  void expect_interval(const std::string &id, const std::vector<SweepInterval> &sw, size_t idx,
                       const RatInterval &want, const std::string &witness) {
    std::ostringstream os;
    bool ok = idx < sw.size();
    if (ok) {
      const RatInterval &got = sw[idx].iv;
      ok = got.lo == want.lo && got.hi == want.hi && got.lo_closed == want.lo_closed &&
           got.hi_closed == want.hi_closed;
      if (!witness.empty()) {
        bool w = false;
        for (const auto &s : sw[idx].witnesses) w = w || s == witness;
        ok = ok && w;
      }
      os << "want " << want.str() << " got " << got.str();
    } else {
      os << "want " << want.str() << " got only " << sw.size() << " intervals";
    }
    record(id, ok, os.str());
  }

  void expect_parts(const std::string &id, const IntervalSet &set,
                    const std::vector<RatInterval> &want) {
    bool ok = set.parts().size() == want.size();
    std::ostringstream os;
    if (ok) {
      for (size_t i = 0; i < want.size(); ++i) {
        const RatInterval &g = set.parts()[i];
        const RatInterval &w = want[i];
        ok = ok && g.lo == w.lo && g.hi == w.hi && g.lo_closed == w.lo_closed &&
             g.hi_closed == w.hi_closed;
        os << g.str() << " vs " << w.str() << "; ";
      }
    } else {
      os << "part count " << set.parts().size() << " != " << want.size();
    }
    record(id, ok, os.str());
  }

  void expect_set_pass(const std::string &id, const ConditionReport &rep, const std::string &set_id,
                       bool want) {
    for (const auto &s : rep.sets)
      if (s.set_id == set_id) {
        record(id, s.pass == want, set_id + (s.pass ? " passes" : " fails"));
        return;
      }
    record(id, false, "set " + set_id + " missing");
  }
};

RatInterval open_iv(const BigRat &lo, const BigRat &hi) {
  return {ExtRat(lo), ExtRat(hi), false, false};
}
RatInterval cl_op(const BigRat &lo, const BigRat &hi) {
  return {ExtRat(lo), ExtRat(hi), true, false};
}
RatInterval op_cl(const BigRat &lo, const BigRat &hi) {
  return {ExtRat(lo), ExtRat(hi), false, true};
}
RatInterval cl_inf(const BigRat &lo) { return {ExtRat(lo), ExtRat::plus_inf(), true, false}; }
RatInterval op_inf(const BigRat &lo) { return {ExtRat(lo), ExtRat::plus_inf(), false, false}; }

} // namespace

std::vector<GoldenCheck> golden_existence_comments() {
  Harness h;

  // (1)(i): m = sigma = N = 2 — set (4.2) for q in [1, 9/5), p in [1, 20/(5q+11)),
  // with pq > 1 opening the left endpoint at p = 1.
  {
    ExponentProfile pr = base_profile(2);
    pr.p = 1;
    pr.m = ExtRat(2);
    pr.sigma = ExtRat(2);
    auto sw = feasible_region(pr, FreeVar::Q);
    h.expect_interval("thm41-1i-q-window", sw, 0, open_iv(BigRat(1), BigRat(9, 5)), "4.2");
    // p-window at q = 1 must be (1, 5/4) = (1, 20/(5q+11)).
    ExponentProfile pq = pr;
    pq.q = 1;
    auto swp = feasible_region(pq, FreeVar::P);
    h.expect_interval("thm41-1i-p-window-q1", swp, 0, open_iv(BigRat(1), BigRat(5, 4)), "4.2");
    // and at q = 3/2 the upper bound is 20/(5q+11) = 40/37 (closed at 1).
    pq.q = BigRat(3, 2);
    auto swp2 = feasible_region(pq, FreeVar::P);
    h.expect_interval("thm41-1i-p-window-q32", swp2, 0, cl_op(BigRat(1), BigRat(40, 37)), "4.2");
  }

  // (1)(ii): m = 3, sigma = N = 2 — q in [1,2), p-bound 60/(15q+13).
  {
    ExponentProfile pr = base_profile(2);
    pr.p = 1;
    pr.m = ExtRat(3);
    pr.sigma = ExtRat(2);
    auto sw = feasible_region(pr, FreeVar::Q);
    h.expect_interval("thm41-1ii-q-window", sw, 0, open_iv(BigRat(1), BigRat(2)), "4.2");
    ExponentProfile pq = pr;
    pq.q = BigRat(3, 2);
    auto swp = feasible_region(pq, FreeVar::P);
    h.expect_interval("thm41-1ii-p-window-q32", swp, 0, cl_op(BigRat(1), BigRat(120, 71)), "4.2");
    // spec'd point checks: p = 8/5 passes (4.2), p = 12/7 fails.
    pq.p = BigRat(8, 5);
    h.expect_set_pass("thm41-1ii-point-pass", check_existence(pq), "4.2", true);
    pq.p = BigRat(12, 7);
    h.expect_set_pass("thm41-1ii-point-fail", check_existence(pq), "4.2", false);
  }

  // (1)(iii): m = sigma = N = 3 — set (4.6) for q in (3, 18/5), p in [1, (q+20)/(5q)).
  {
    ExponentProfile pr = base_profile(3);
    pr.p = 1;
    pr.m = ExtRat(3);
    pr.sigma = ExtRat(3);
    auto sw = feasible_region(pr, FreeVar::Q);
    bool found = false;
    for (size_t i = 0; i < sw.size(); ++i) {
      if (sw[i].iv.lo == ExtRat(BigRat(3))) {
        h.expect_interval("thm41-1iii-q-window", sw, i, open_iv(BigRat(3), BigRat(18, 5)), "4.6");
        found = true;
      }
    }
    if (!found) h.record("thm41-1iii-q-window", false, "no interval starting at 3");
    ExponentProfile pq = pr;
    pq.q = BigRat(16, 5); // (q+20)/(5q) = 29/20
    auto swp = feasible_region(pq, FreeVar::P);
    h.expect_interval("thm41-1iii-p-window-q165", swp, 0, cl_op(BigRat(1), BigRat(29, 20)), "4.6");
    pq.q = BigRat(10, 3); // (q+20)/(5q) = 7/5
    auto swp2 = feasible_region(pq, FreeVar::P);
    h.expect_interval("thm41-1iii-p-window-q103", swp2, 0, cl_op(BigRat(1), BigRat(7, 5)), "4.6");
    pq.q = BigRat(16, 5);
    pq.p = 1;
    h.expect_set_pass("thm41-1iii-point-pass", check_existence(pq), "4.6", true);
  }

  // (1)(iv): m = sigma = inf, N = 2 — q in (1, 3] with p = 1 (L^infty closure).
  {
    ExponentProfile pr = base_profile(2);
    pr.p = 1;
    pr.m = ExtRat::plus_inf();
    pr.sigma = ExtRat::plus_inf();
    auto sw = feasible_region(pr, FreeVar::Q);
    h.expect_interval("thm41-1iv-q-window", sw, 0, op_cl(BigRat(1), BigRat(3)), "4.7");
  }

  // (2)(i)-(iii) describe the (4.2) window specifically, so the per-set
  // region is asserted (the sweep union may merge in adjacent (4.6) windows).
  auto set42_window = [](ExponentProfile pr, const BigRat &sg) {
    pr.sigma = ExtRat(sg);
    pr.m = ExtRat(2); // placeholder, m is the free variable
    return condition_set_region(pr, "4.2", FreeVar::M);
  };

  // (2)(i): p = 3/2, q = 1, N = 2 — m-window (30s/(3s+20), 80s/(80-27s)) for
  // sigma <= 80/47, then (30s/(3s+20), 4) up to sigma < 80/27.
  {
    ExponentProfile pr = base_profile(2);
    pr.p = BigRat(3, 2);
    pr.q = 1;
    h.expect_parts("thm41-2i-m-window-s32", set42_window(pr, BigRat(3, 2)),
                   {open_iv(BigRat(90, 49), BigRat(240, 79))});
    h.expect_parts("thm41-2i-m-window-s8047", set42_window(pr, BigRat(80, 47)),
                   {open_iv(BigRat(120, 59), BigRat(4))});
    h.expect_parts("thm41-2i-m-window-s2", set42_window(pr, BigRat(2)),
                   {open_iv(BigRat(30, 13), BigRat(4))});
    h.record("thm41-2i-empty-at-8027", set42_window(pr, BigRat(80, 27)).empty(), "sigma = 80/27");
    h.record("thm41-2i-empty-at-1", set42_window(pr, BigRat(1)).empty(), "sigma = 1");
  }

  // (2)(ii): p = 2, q = 3/2, N = 2 — (80s/(3s+40), 80s/(3(40-11s))) crossover
  // at 5/2, upper bound 16/3 beyond, empty at sigma = 20/9 and sigma = 10/3.
  {
    ExponentProfile pr = base_profile(2);
    pr.p = 2;
    pr.q = BigRat(3, 2);
    h.expect_parts("thm41-2ii-m-window-s125", set42_window(pr, BigRat(12, 5)),
                   {open_iv(BigRat(240, 59), BigRat(80, 17))});
    h.expect_parts("thm41-2ii-m-window-s52", set42_window(pr, BigRat(5, 2)),
                   {open_iv(BigRat(80, 19), BigRat(16, 3))});
    h.expect_parts("thm41-2ii-m-window-s3", set42_window(pr, BigRat(3)),
                   {open_iv(BigRat(240, 49), BigRat(16, 3))});
    h.record("thm41-2ii-empty-at-209", set42_window(pr, BigRat(20, 9)).empty(), "sigma = 20/9");
    h.record("thm41-2ii-empty-at-103", set42_window(pr, BigRat(10, 3)).empty(), "sigma = 10/3");
  }

  // (2)(iii): p = 1, q = 3/2, N = 3 — (40s/(40-s), 10s/(15-4s)) crossover at
  // 20/7, then upper bound 8; empty at 12/9 and 15/4.
  {
    ExponentProfile pr = base_profile(3);
    pr.p = 1;
    pr.q = BigRat(3, 2);
    h.expect_parts("thm41-2iii-m-window-s2", set42_window(pr, BigRat(2)),
                   {open_iv(BigRat(40, 19), BigRat(20, 7))});
    h.expect_parts("thm41-2iii-m-window-s207", set42_window(pr, BigRat(20, 7)),
                   {open_iv(BigRat(40, 13), BigRat(8))});
    h.expect_parts("thm41-2iii-m-window-s3", set42_window(pr, BigRat(3)),
                   {open_iv(BigRat(120, 37), BigRat(8))});
    h.record("thm41-2iii-empty-at-129", set42_window(pr, BigRat(12, 9)).empty(), "sigma = 12/9");
    h.record("thm41-2iii-empty-at-154", set42_window(pr, BigRat(15, 4)).empty(), "sigma = 15/4");
  }

  return h.out;
}

std::vector<GoldenCheck> golden_nonexistence_comments() {
  Harness h;

  auto profile = [&](const BigRat &p, const BigRat &q, const BigRat &sg) {
    ExponentProfile pr = base_profile(3);
    pr.p = p;
    pr.q = q;
    pr.sigma = ExtRat(sg);
    pr.m = ExtRat(2);
    return pr;
  };
  auto m_window = [&](const ExponentProfile &pr) { return nonexist_data_region(pr, FreeVar::M); };
  auto point = [&](const BigRat &p, const BigRat &q, const BigRat &sg, const BigRat &m) {
    ExponentProfile pr = profile(p, q, sg);
    pr.m = ExtRat(m);
    return check_nonexistence_data(pr).feasible;
  };

  // (i) p = q = 1.
  h.expect_parts("thm46-i-s2", m_window(profile(1, 1, BigRat(2))),
                 {open_iv(BigRat(15, 7), BigRat(3)), cl_inf(BigRat(6))});
  h.expect_parts("thm46-i-s3", m_window(profile(1, 1, BigRat(3))), {cl_inf(BigRat(6))});
  h.expect_parts("thm46-i-s258", m_window(profile(1, 1, BigRat(25, 8))), {op_inf(BigRat(6))});
  h.expect_parts("thm46-i-s72", m_window(profile(1, 1, BigRat(7, 2))), {op_inf(BigRat(15))});
  h.expect_parts("thm46-i-s4", m_window(profile(1, 1, BigRat(4))),
                 {cl_op(BigRat(1), BigRat(9, 2)), cl_inf(BigRat(6))});
  h.record("thm46-i-point-m7", point(1, 1, BigRat(2), BigRat(7)), "sigma=2, m=7 passes");
  h.record("thm46-i-point-m3", !point(1, 1, BigRat(2), BigRat(3)), "sigma=2, m=3 fails");

  // (ii) p = 1, q = 2.
  h.expect_parts("thm46-ii-s2", m_window(profile(1, 2, BigRat(2))),
                 {open_iv(BigRat(15, 14), BigRat(3)), cl_inf(BigRat(6))});
  h.expect_parts("thm46-ii-s158", m_window(profile(1, 2, BigRat(15, 8))),
                 {open_iv(BigRat(1), BigRat(14, 5)), cl_inf(BigRat(6))});
  h.expect_parts("thm46-ii-s5516", m_window(profile(1, 2, BigRat(55, 16))), {op_inf(BigRat(6))});
  h.expect_parts("thm46-ii-s4", m_window(profile(1, 2, BigRat(4))),
                 {cl_op(BigRat(1), BigRat(9, 2)), cl_inf(BigRat(6))});

  // (iii) p = 2, q = 1.
  h.expect_parts("thm46-iii-s1", m_window(profile(2, 1, BigRat(1))),
                 {open_iv(BigRat(15, 11), BigRat(3)), cl_inf(BigRat(6))});
  h.expect_parts("thm46-iii-s2", m_window(profile(2, 1, BigRat(2))),
                 {open_iv(BigRat(15, 7), BigRat(9, 2)), cl_inf(BigRat(6))});
  h.expect_parts("thm46-iii-s72", m_window(profile(2, 1, BigRat(7, 2))), {op_inf(BigRat(15))});

  // (iv) p = q = 2.
  h.expect_parts("thm46-iv-s1", m_window(profile(2, 2, BigRat(1))),
                 {cl_op(BigRat(1), BigRat(3)), cl_inf(BigRat(6))});
  h.expect_parts("thm46-iv-s158", m_window(profile(2, 2, BigRat(15, 8))),
                 {open_iv(BigRat(1), BigRat(22, 5)), cl_inf(BigRat(6))});
  h.expect_parts("thm46-iv-s4", m_window(profile(2, 2, BigRat(4))),
                 {cl_op(BigRat(1), BigRat(21, 4)), cl_inf(BigRat(6))});

  // (v) any p, q >= 1: sigma in [1,3] or > 15/4, m > 6.
  {
    bool ok = true;
    for (auto pq : {std::pair<int, int>{1, 1}, {5, 7}, {1, 9}, {3, 2}})
      for (BigRat sg : {BigRat(1), BigRat(2), BigRat(3), BigRat(4), BigRat(100)})
        if (sg <= 3 || sg > BigRat(15, 4)) ok = ok && point(pq.first, pq.second, sg, BigRat(7));
    h.record("thm46-v-grid", ok, "m = 7 > 6 passes across the (p,q,sigma) grid");
  }

  // (vi) q = 1, sigma in (25/8, 15/4): m > 15/(15-4 sigma).
  {
    bool ok = true;
    for (BigRat p : {BigRat(1), BigRat(3), BigRat(10)})
      ok = ok && point(p, 1, BigRat(7, 2), BigRat(16)) && !point(p, 1, BigRat(7, 2), BigRat(14));
    h.record("thm46-vi", ok, "q=1, sigma=7/2: pass at m=16, fail at m=14<15");
  }

  // (vii) q = 2, sigma in (55/16, 15/4): m > 15/(2(15-4 sigma)).
  {
    bool ok = true;
    for (BigRat p : {BigRat(1), BigRat(4)})
      ok = ok && point(p, 2, BigRat(18, 5), BigRat(13)) && !point(p, 2, BigRat(18, 5), BigRat(12));
    h.record("thm46-vii", ok, "q=2, sigma=18/5: pass at m=13, fail at m=12<25/2");
  }

  return h.out;
}

} // namespace fracgrad
