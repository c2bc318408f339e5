#pragma once

#include <optional>

#include "confdist/confidence.hpp"
#include "confdist/numerics.hpp"

// CI procedures CI_alpha(D) = [theta_L(D), theta_U(D)) with
// theta_L = q_{1-alpha-beta}^{-1}(D), theta_U = q_{1-beta}^{-1}(D), their
// closed variant, the observed-CI case classification, and the CD confidence
// of an observed CI.

namespace confdist {

struct IntervalSpec {
  double alpha = 0.9;   // confidence level, in (0,1)
  double beta = 0.05;   // upper-tail allocation, 0 <= beta <= 1 - alpha
  bool closed = false;  // closed upper end: [theta_L, theta_U] instead of [theta_L, theta_U)

  static void validate(const IntervalSpec& s) {
    if (!(s.alpha > 0.0 && s.alpha < 1.0))
      throw std::invalid_argument("IntervalSpec: alpha in (0,1) required");
    if (!(s.beta >= 0.0 && s.beta <= 1.0 - s.alpha + 1e-12))
      throw std::invalid_argument("IntervalSpec: 0 <= beta <= 1 - alpha required");
  }
};

enum class IntervalKind {
  TwoSided,   // theta_L > 0
  OneSided,   // [0, theta_U)
  Empty,      // [0, 0), half-open procedure
  PointZero,  // {0}, closed procedure
};

inline const char* to_string(IntervalKind k) {
  switch (k) {
    case IntervalKind::TwoSided: return "two-sided";
    case IntervalKind::OneSided: return "one-sided";
    case IntervalKind::Empty: return "empty";
    case IntervalKind::PointZero: return "point-zero";
  }
  return "?";
}

struct ObservedInterval {
  double lower = 0.0;
  std::optional<double> upper = 0.0;  // nullopt: unbounded (beta = 0)
  IntervalKind kind = IntervalKind::Empty;
  bool closed = false;
  double d = 0.0;  // the observation the interval came from
};

namespace detail {

// q_level(0) = sigma * sqrt of the (1-level) central quantile; level 1 -> 0
inline double central_threshold(double level, double sigma, int k) {
  if (level >= 1.0) return 0.0;
  return sigma * std::sqrt(central_chisq_quantile(1.0 - level, k));
}

}  // namespace detail

// Case classification follows the paper's inequalities verbatim:
// (a) d > q_{1-alpha-beta}(0); (b) q_{1-beta}(0) < d <= q_{1-alpha-beta}(0);
// (c) d <= q_{1-beta}(0).
inline ObservedInterval ci_observe(double d, const IntervalSpec& spec, const ModelConfig& cfg) {
  IntervalSpec::validate(spec);
  ModelConfig::validate(cfg);
  if (cfg.kind != ModelKind::NormMean)
    throw std::invalid_argument("ci_observe: NormMean model required");
  if (!(d >= 0.0)) throw std::invalid_argument("ci_observe: d >= 0 required");

  const double lower_level = std::max(0.0, 1.0 - spec.alpha - spec.beta);  // in [0, 1)
  const double upper_level = 1.0 - spec.beta;                              // in (0, 1]

  ObservedInterval out;
  out.closed = spec.closed;
  out.d = d;

  const bool two_sided_possible = lower_level > 1e-12;
  if (two_sided_possible && d > detail::central_threshold(lower_level, cfg.sigma, cfg.k)) {
    out.kind = IntervalKind::TwoSided;
    out.lower = *d_quantile_inverse(lower_level, d, cfg.sigma, cfg.k);
    out.upper = d_quantile_inverse(upper_level, d, cfg.sigma, cfg.k);
    return out;
  }
  if (d > detail::central_threshold(upper_level, cfg.sigma, cfg.k)) {
    out.kind = IntervalKind::OneSided;
    out.lower = 0.0;
    out.upper = d_quantile_inverse(upper_level, d, cfg.sigma, cfg.k);
    return out;
  }
  out.kind = spec.closed ? IntervalKind::PointZero : IntervalKind::Empty;
  out.lower = 0.0;
  out.upper = 0.0;
  return out;
}

// The CD confidence of an observed CI: the maximum attainable confidence
// level among CI procedures reproducing it. Two-sided: alpha; one-sided:
// 1 - beta; empty or {0}: the point mass M(d).
inline double ci_confidence(const ObservedInterval& interval, const ConfidenceCurve& curve) {
  if (std::fabs(interval.d - curve.observed_d()) > 1e-9 * (1.0 + std::fabs(interval.d)))
    throw std::invalid_argument("ci_confidence: interval was observed at a different d");
  switch (interval.kind) {
    case IntervalKind::TwoSided: {
      const double hi = interval.upper ? curve(*interval.upper) : 1.0;
      return hi - curve(interval.lower);
    }
    case IntervalKind::OneSided:
      return interval.upper ? curve(*interval.upper) : 1.0;
    case IntervalKind::Empty:
    case IntervalKind::PointZero:
      return curve.point_mass();
  }
  return 0.0;
}

}  // namespace confdist
