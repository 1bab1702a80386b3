#ifndef FRACGRAD_EXPONENTS_HPP
#define FRACGRAD_EXPONENTS_HPP

#include "fracgrad/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fracgrad {

/// All exponent symbols of the coupled system in exact arithmetic.
/// m = inf / sigma = inf encode L^infty data.
struct ExponentProfile {
  BigRat s1{3, 4};
  BigRat s2{9, 10};
  BigRat p{1};
  BigRat q{1};
  int N = 2;
  ExtRat m{1};
  ExtRat sigma{1};

  /// Hard type invariants (ranges, positivity).  Throws std::invalid_argument.
  void validate() const;

  /// Standing hypotheses of the existence theorems that do not hold for this
  /// profile.  Violations are reported, not errors.
  std::vector<std::string> standing_violations() const;
};

/// The derived quantities from the notation list: c_kappa, kappa-hats,
/// m-hat / m-bar / sigma-hats, with the positive-part convention rendering
/// blown-up denominators as +inf.
struct DerivedExponents {
  BigRat c_p, c_q;
  BigRat q_hat_1_s1;  // s1 - q(1-s1)
  BigRat q_hat_2_s1;  // 2 s1 - q(1-s1)
  BigRat p_hat_2_s2;  // 2 s2 - p(1-s2)
  BigRat p_hat_s1s2;  // 2 s2 - s1 - p(1-s1)
  BigRat q_hat_s1s2;  // 2 s2 - s1 - q(1-s1)
  ExtRat m_hat_s1_q;
  ExtRat m_bar_s1s2_q;
  ExtRat sigma_hat_s2;
  ExtRat sigma_hat_s1s2_p;
};

DerivedExponents derive(const ExponentProfile &pr);

enum class Rel { LT, LE, GT, GE };
std::string rel_str(Rel r);
bool rel_holds(const ExtRat &lhs, Rel r, const ExtRat &rhs);

struct ClauseVerdict {
  std::string id;
  std::string lhs, rhs;  // exact rational strings
  Rel rel = Rel::LT;
  bool pass = false;
  std::string note;
};

struct SetVerdict {
  std::string set_id;
  std::vector<ClauseVerdict> clauses;
  bool pass = false;  // every clause passes
  std::string note;
};

struct ConditionReport {
  ExponentProfile profile;
  DerivedExponents derived;
  std::vector<SetVerdict> sets;
  bool feasible = false;  // some set passes
  std::vector<std::string> flags;
};

/// Theorem-4.1-style condition sets (4.2)-(4.7), evaluated literally at the
/// given profile.  Standing-assumption violations land in flags.
ConditionReport check_existence(const ExponentProfile &pr);

/// Theorem-4.2-style sets for p = q = 1 ("pq1-first" ... "pq1-fifth").
/// Throws std::invalid_argument unless p == q == 1.
ConditionReport check_existence_pq1(const ExponentProfile &pr);

/// Supercritical thresholds: max{p,q} >= (1+s2)/(1-s1) and >= 1/(1-s1).
ConditionReport check_nonexistence_thresholds(const ExponentProfile &pr);

/// Low-integrability data condition, sign-aware: "x > N/(N-D)" holds iff
/// (N-D > 0 and x(N-D) > N) or N-D <= 0.  m = sigma = inf is flagged for
/// manual review instead of guessed.
ConditionReport check_nonexistence_data(const ExponentProfile &pr);

// ---------------------------------------------------------------------------
// Exact sweeps over one free exponent.

enum class FreeVar { P, Q, M, Sigma };
std::string free_var_name(FreeVar v);

struct RatInterval {
  ExtRat lo, hi;
  bool lo_closed = false, hi_closed = false;
  bool empty() const;
  bool contains(const BigRat &x) const;
  std::string str() const;
};

/// Sorted disjoint union of rational intervals.
class IntervalSet {
public:
  static IntervalSet none() { return IntervalSet(); }
  static IntervalSet all();
  static IntervalSet of(RatInterval iv);
  static IntervalSet point(const BigRat &x);

  bool empty() const { return parts_.empty(); }
  const std::vector<RatInterval> &parts() const { return parts_; }
  bool contains(const BigRat &x) const;

  IntervalSet intersect(const IntervalSet &o) const;
  IntervalSet unite(const IntervalSet &o) const;
  void normalize();

private:
  std::vector<RatInterval> parts_;
};

/// (a x + b) / (c x + d); at the pole the value is the signed infinity given
/// by the numerator sign (continuous extension when the root is shared).
struct LinFrac {
  BigRat a, b, c, d;
  static LinFrac constant(const BigRat &k) { return {BigRat(0), k, BigRat(0), BigRat(1)}; }
  static LinFrac identity() { return {BigRat(1), BigRat(0), BigRat(0), BigRat(1)}; }
  ExtRat eval(const BigRat &x) const;
  bool is_constant() const { return a == 0 && c == 0; }
};

/// { x : L(x) rel K } as an exact interval set (poles handled pointwise).
IntervalSet solve_compare(const LinFrac &L, Rel rel, const ExtRat &K);

/// Exact solution set of one condition set in the free variable, literal
/// clause reading (no hypothesis box applied).  set_id in {"4.2",...,"4.7"}.
IntervalSet condition_set_region(const ExponentProfile &pr, const std::string &set_id, FreeVar fv);

/// Same for the (4.24)-style data condition.
IntervalSet nonexist_data_region(const ExponentProfile &pr, FreeVar fv);

struct SweepInterval {
  RatInterval iv;
  std::vector<std::string> witnesses;  // condition sets passing on the interval
  std::vector<std::string> notes;      // "paper-open", "linfty-closure", ...
};

/// Union of the per-set regions where some existence set passes, intersected
/// (for free p or q) with the hypothesis box: kappa in [1, s2/(1-s1)),
/// pq > 1, and for profiles with infinite data the Comments' conventions
/// (L^infty closure of (4.6)/(4.7), standing cap inclusive).  Free m / sigma
/// sweeps are literal with domain [1, +inf).
std::vector<SweepInterval> feasible_region(const ExponentProfile &pr, FreeVar fv);

/// feasible_region against the (4.24) data condition instead of the
/// existence sets (used by the Theorem-4.6 comment reproductions).
std::vector<SweepInterval> nonexist_data_sweep(const ExponentProfile &pr, FreeVar fv);

} // namespace fracgrad

#endif
