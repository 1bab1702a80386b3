#ifndef FRACGRAD_KERNEL_HPP
#define FRACGRAD_KERNEL_HPP

#include "fracgrad/geometry.hpp"

#include <string>

namespace fracgrad {

/// Dirichlet Green's function of the fractional Laplacian on the unit ball,
///   G_s(x,y) = kappa(N,s) |x-y|^{2s-N} int_0^{r0} t^{s-1} (1+t)^{-N/2} dt,
///   r0 = (1-|x|^2)(1-|y|^2)/|x-y|^2,
/// evaluated through the incomplete Beta identity.
class GreenKernel {
public:
  GreenKernel(int dim, double s);

  int dim() const { return dim_; }
  double s() const { return s_; }
  double normalization() const { return kappa_; }

  /// Zero if either point is outside the ball; throws on x == y.
  double operator()(Point x, Point y) const;

  /// Gradient in x, closed-form differentiation of the profile integral.
  Point grad_x(Point x, Point y) const;

  /// Central finite differences with step min(|x-y|, delta(x))/64; *reliable
  /// is cleared when the two-step consistency check fails (caller refines).
  Point grad_x_fd(Point x, Point y, bool *reliable = nullptr) const;

  /// Profile integral int_0^{r0} t^{s-1}(1+t)^{-N/2} dt via incomplete Beta.
  double profile(double r0) const;
  /// Same by adaptive quadrature; used to cross-check the Beta identity.
  double profile_by_quadrature(double r0) const;

  double r0(Point x, Point y) const;

private:
  int dim_;
  double s_;
  double kappa_;
  Domain dom_;
};

/// Two-sided comparison kernel:
///   |x-y|^{2s-N} (delta^s(x)/|x-y|^s ^ 1)(delta^s(y)/|x-y|^s ^ 1).
double comparison_first(Point x, Point y, double s, int dim);

/// min{ |x-y|^{2s-N}, delta^s(x)|x-y|^{s-N}, delta^s(y)|x-y|^{s-N} } and the
/// two eta-weighted upper bounds.
struct ComparisonMenu {
  double min_bound;
  double eta_split;    // delta^{eta s}(y) delta^{(1-eta)s}(x) |x-y|^{s-N}
  double eta_reduced;  // delta^{eta s}(y) |x-y|^{-(N-s(2-eta))}
};
ComparisonMenu comparison_menu(Point x, Point y, double s, int dim, double eta);

struct EstimateRatioReport {
  std::string estimate_id;
  double min_ratio = 0;
  double max_ratio = 0;
  int samples = 0;
  double s = 0;
  double eta = 0;
};

/// Min/max of the estimate ratio over quasi-random interior pairs avoiding
/// |x-y| < 1e-4 and delta < 1e-4.  estimate_id in {"2.2", "2.3", "2.4-left",
/// "2.4-right", "2.5", "2.6"}.
EstimateRatioReport ratio_scan(const GreenKernel &ker, const std::string &estimate_id, int samples,
                               unsigned seed = 1, double eta = 0.5);

/// Halton low-discrepancy point in the open unit ball (index-seeded).
Point halton_ball_point(int dim, unsigned long long index);

} // namespace fracgrad

#endif
