#ifndef FRACGRAD_GOLDEN_HPP
#define FRACGRAD_GOLDEN_HPP

#include <string>
#include <vector>

namespace fracgrad {

/// One reproduced comment-value from the source's discussion sections:
/// interval endpoints and set memberships checked in exact arithmetic.
struct GoldenCheck {
  std::string id;
  bool pass = false;
  std::string detail;
};

/// The seven comment blocks after the pq>1 existence theorem
/// ((1)(i)-(iv) size conditions and (2)(i)-(iii) reciprocal windows).
std::vector<GoldenCheck> golden_existence_comments();

/// The seven items (i)-(vii) after the low-integrability nonexistence
/// theorem, for s1=3/4, s2=9/10, N=3.
std::vector<GoldenCheck> golden_nonexistence_comments();

} // namespace fracgrad

#endif
