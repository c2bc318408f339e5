#pragma once

#include <optional>

#include "confdist/confidence.hpp"
#include "confdist/posterior.hpp"

// Consonant belief functions built from the plausibility contour
// pls(theta; d) = 1 - |2 F(theta) - 1|, where F is the base CDF (the CD
// including its atom, or the atom-free UP posterior G), and
// Bel(A; d) = 1 - sup_{theta in A^c} pls(theta; d).

namespace confdist {

enum class BeliefBase { CD, UP };

class BeliefCurve {
 public:
  static BeliefCurve from_cd(ConfidenceCurve curve) {
    BeliefCurve bc;
    bc.base_ = BeliefBase::CD;
    bc.d_ = curve.observed_d();
    bc.sigma_ = curve.config().sigma;
    bc.k_ = curve.config().k;
    bc.cd_ = std::move(curve);
    if (bc.cd_->point_mass() >= 0.5) {
      bc.median_ = 0.0;  // the atom alone reaches half mass
    } else {
      double hi = bc.d_ + bc.sigma_;
      while ((*bc.cd_)(hi) < 0.5) hi *= 2.0;
      bc.median_ = detail::solve_increasing([&](double t) { return (*bc.cd_)(t) - 0.5; }, 0.0, hi,
                                            1e-10 * (1.0 + hi));
    }
    return bc;
  }

  static BeliefCurve from_up(double d, double sigma, int k) {
    BeliefCurve bc;
    bc.base_ = BeliefBase::UP;
    bc.d_ = d;
    bc.sigma_ = sigma;
    bc.k_ = k;
    bc.median_ = up_quantile(0.5, d, sigma, k);
    return bc;
  }

  BeliefBase base() const { return base_; }
  double median() const { return median_; }

  double base_cdf(double theta) const {
    return base_ == BeliefBase::CD ? (*cd_)(theta) : up_cdf(theta, d_, sigma_, k_);
  }

  // The contour is 1 - |2 F(theta) - 1| wherever F is continuous. At the CD's
  // atom the two-sided form uses F(0-) = 0 for the upper side, so the point
  // value is min(2 F(0), 1) while the right limit stays 1 - |2 F(0) - 1|;
  // with M(d) >= 1/2 the contour peaks at the median theta = 0 with pls = 1.
  double plausibility(double theta) const {
    theta = clamp_theta(theta);
    if (theta == 0.0) return std::min(1.0, 2.0 * base_cdf(0.0));
    return 1.0 - std::fabs(2.0 * base_cdf(theta) - 1.0);
  }

  // Pl(A) = sup_{theta in A} pls. pls is unimodal with peak 1 at the median,
  // so the sup over an interval is 1 if the median lies inside and the value
  // at the endpoint nearest the median otherwise.
  double plaus_of_set(const Proposition& a) const {
    if (!a.complemented())
      return sup_piece(a.lower(), a.upper(), a.lower() == 0.0 && !a.lower_closed());
    double sup = 0.0;
    const double lo = a.lower();
    if (lo > 0.0) {
      sup = std::max(sup, sup_piece(0.0, lo, false));
    } else if (!a.lower_closed()) {
      sup = std::max(sup, plausibility(0.0));  // complement keeps the single point {0}
    }
    if (a.upper()) sup = std::max(sup, sup_piece(*a.upper(), std::nullopt, *a.upper() == 0.0));
    return sup;
  }

  double belief(const Proposition& a) const { return 1.0 - plaus_of_set(a.complement()); }

 private:
  BeliefCurve() = default;

  // sup of pls over the piece [lo, hi], or (0, hi] when zero_excluded
  double sup_piece(double lo, std::optional<double> hi, bool zero_excluded) const {
    const bool median_inside = median_ >= lo && (!hi || median_ <= *hi) &&
                               !(zero_excluded && median_ == 0.0 && lo == 0.0);
    if (median_inside) return 1.0;
    if (median_ <= lo) {
      if (lo == 0.0 && zero_excluded)  // approach 0 through the continuous part
        return 1.0 - std::fabs(2.0 * base_cdf(0.0) - 1.0);
      return plausibility(lo);
    }
    return hi ? plausibility(*hi) : 0.0;
  }

  BeliefBase base_ = BeliefBase::CD;
  double d_ = 0.0, sigma_ = 1.0;
  int k_ = 2;
  std::optional<ConfidenceCurve> cd_{};
  double median_ = 0.0;
};

struct TestDecision {
  bool reject = false;
  double belief = 0.0;
};

// Reject the null iff Bel(H0) <= alpha.
inline TestDecision belief_test(const Proposition& null_prop, const BeliefCurve& bc,
                                double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("belief_test: alpha in (0,1) required");
  const double b = bc.belief(null_prop);
  return {b <= alpha, b};
}

}  // namespace confdist
