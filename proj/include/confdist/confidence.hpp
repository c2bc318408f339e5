#pragma once

#include <optional>
#include <span>

#include "confdist/model.hpp"
#include "confdist/numerics.hpp"

// The confidence distribution C(theta; d) = P_theta(D >= d) for the norm
// parameter, with its point mass M(d) at theta = 0 kept as a first-class
// scalar (it is never encoded as a density spike).

namespace confdist {

// Slightly negative theta from caller round-off is clamped to zero; anything
// below the tolerance is a domain error.
inline double clamp_theta(double theta) {
  if (theta >= 0.0) return theta;
  if (theta >= -1e-12) return 0.0;
  throw std::invalid_argument("theta must lie in [0, inf)");
}

class ConfidenceCurve {
 public:
  ConfidenceCurve(ModelConfig cfg, double d) : cfg_(cfg), d_(d) {
    ModelConfig::validate(cfg_);
    if (cfg_.kind != ModelKind::NormMean)
      throw std::invalid_argument("ConfidenceCurve: NormMean model required (see curved_cd)");
    if (!(d >= 0.0)) throw std::invalid_argument("ConfidenceCurve: d >= 0 required");
    const double x = (d_ / cfg_.sigma) * (d_ / cfg_.sigma);
    point_mass_ = central_chisq_sf(x, cfg_.k);  // exp(-d^2/2sigma^2) for k = 2
  }

  // C(theta; d) = 1 - Gamma_k(d^2/sigma^2; theta^2/sigma^2); C(0) = M(d)
  double operator()(double theta) const {
    theta = clamp_theta(theta);
    const double s = cfg_.sigma;
    const double x = (d_ / s) * (d_ / s);
    if (theta == 0.0) return point_mass_;
    return noncentral_chisq_sf(x, {cfg_.k, (theta / s) * (theta / s)});
  }

  const ModelConfig& config() const { return cfg_; }
  double observed_d() const { return d_; }
  double point_mass() const { return point_mass_; }

 private:
  ModelConfig cfg_;
  double d_;
  double point_mass_;
};

inline double cd_eval(double theta, const ConfidenceCurve& curve) { return curve(theta); }

inline double point_mass(const ConfidenceCurve& curve) { return curve.point_mass(); }

// Continuous part c_+(theta; d) of the confidence density, theta > 0 only;
// the atom at zero is reported by point_mass, never as a density value.
// dC/dtheta = (2 theta / sigma^2) * gamma_{k+2}(d^2/sigma^2; theta^2/sigma^2).
inline double confidence_density(double theta, const ConfidenceCurve& curve) {
  if (!(theta > 0.0))
    throw std::invalid_argument("confidence_density: theta > 0 required (atom via point_mass)");
  const ModelConfig& cfg = curve.config();
  const double s = cfg.sigma;
  const double x = (curve.observed_d() / s) * (curve.observed_d() / s);
  const double nu = (theta / s) * (theta / s);
  return (2.0 * theta / (s * s)) * noncentral_chisq_pdf(x, {cfg.k + 2, nu});
}

// A subset of Theta = [0, inf): one interval (with open/closed ends, possibly
// unbounded above) or the complement of one.
class Proposition {
 public:
  static Proposition interval(double lower, std::optional<double> upper, bool lower_closed = true,
                              bool upper_closed = true) {
    Proposition a;
    a.lower_ = lower;
    a.upper_ = upper;
    a.lower_closed_ = lower_closed;
    a.upper_closed_ = upper ? upper_closed : false;
    if (!(lower >= 0.0)) throw std::invalid_argument("Proposition: lower >= 0 required");
    if (upper && !(*upper >= lower))
      throw std::invalid_argument("Proposition: lower <= upper required");
    return a;
  }
  static Proposition singleton(double t) { return interval(t, t, true, true); }
  static Proposition all() { return interval(0.0, std::nullopt, true, false); }
  static Proposition upper_tail(double lower, bool closed = false) {
    return interval(lower, std::nullopt, closed, false);
  }

  Proposition complement() const {
    Proposition a = *this;
    a.complemented_ = !a.complemented_;
    return a;
  }

  double lower() const { return lower_; }
  std::optional<double> upper() const { return upper_; }
  bool lower_closed() const { return lower_closed_; }
  bool upper_closed() const { return upper_closed_; }
  bool complemented() const { return complemented_; }

  bool contains(double t) const {
    const bool in_interval = (lower_closed_ ? t >= lower_ : t > lower_) &&
                             (!upper_ || (upper_closed_ ? t <= *upper_ : t < *upper_));
    return complemented_ ? !in_interval : in_interval;
  }

 private:
  double lower_ = 0.0;
  std::optional<double> upper_{};
  bool lower_closed_ = true;
  bool upper_closed_ = false;
  bool complemented_ = false;
};

// C(A; d) = atom contribution + continuous mass of the interval part.
// Closedness of endpoints matters only through membership of theta = 0.
inline double confidence_of_set(const Proposition& a, const ConfidenceCurve& curve) {
  const Proposition base = a.complemented() ? a.complement() : a;  // the underlying interval
  const double lo = base.lower();
  const double flo = curve(lo);
  const double fhi = base.upper() ? curve(*base.upper()) : 1.0;
  double mass = fhi - flo;  // continuous mass on (lo, hi]
  if (base.contains(0.0)) mass += curve.point_mass();
  if (mass < 0.0) mass = 0.0;
  if (mass > 1.0) mass = 1.0;
  return a.complemented() ? 1.0 - mass : mass;
}

// Point-mass detector: the CD for a model has no point mass iff the quantile
// limits at the parameter-space boundary reach the sample-space boundary.
struct PointMassReport {
  bool has_point_mass = false;
  double alpha = 0.0;   // level whose quantile limit sits deepest in the interior
  double limit = 0.0;   // extrapolated lim q_alpha(theta), theta -> boundary
  double boundary = 0.0;
};

// quantile: (alpha, theta) -> q_alpha(theta). thetas: a sequence decreasing to
// the boundary of Theta. omega_boundary: the matching boundary of Omega_D
// (may be -inf). "Interior" means more than 1e-6 away from the boundary.
template <typename QuantileFn>
PointMassReport probe_point_mass(QuantileFn&& quantile, std::span<const double> thetas,
                                 double omega_boundary) {
  PointMassReport report;
  report.boundary = omega_boundary;
  double worst = 0.0;
  for (double alpha : {0.05, 0.5, 0.95}) {
    const double limit = quantile(alpha, thetas.back());
    double distance;
    if (std::isinf(omega_boundary)) {
      // infinite boundary: a point mass shows up as a limit that stalls at a
      // finite value instead of tracking the probe sequence
      const double prev = quantile(alpha, thetas[thetas.size() - 2]);
      const bool diverges =
          !std::isfinite(limit) || std::fabs(limit - prev) > 1e-3 * (1.0 + std::fabs(limit));
      distance = diverges ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      distance = limit - omega_boundary;
    }
    if (distance > 1e-6 && distance > worst) {
      worst = distance;
      report.has_point_mass = true;
      report.alpha = alpha;
      report.limit = limit;
    }
  }
  return report;
}

namespace detail {

// (1-alpha) quantile of |N(theta, theta^2)|, by monotone inversion
inline double folded_normal_quantile(double alpha, double theta) {
  const double p = 1.0 - alpha;
  auto cdf = [&](double t) {
    return normal_cdf((t - theta) / theta) - normal_cdf((-t - theta) / theta);
  };
  double hi = theta;
  while (cdf(hi) < p) hi *= 2.0;
  return solve_increasing([&](double t) { return cdf(t) - p; }, 0.0, hi, 1e-12 * (1.0 + hi));
}

}  // namespace detail

inline PointMassReport has_point_mass(const ModelConfig& cfg) {
  static const double thetas[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  if (cfg.kind == ModelKind::NormMean) {
    return probe_point_mass(
        [&](double alpha, double theta) {
          return d_quantile({alpha, theta, cfg.sigma, cfg.k});
        },
        thetas, 0.0);
  }
  return probe_point_mass(
      [&](double alpha, double theta) { return detail::folded_normal_quantile(alpha, theta); },
      thetas, 0.0);
}

// Curved-model CDs of the §-style example Y ~ N(theta, theta^2), theta > 0.
// use_abs = false evaluates the raw-Y curve 1 - Phi((y - theta)/theta), which
// is not a proper distribution function; use_abs = true evaluates the proper
// one based on D = |Y|.
inline double curved_cd(double theta, const Observation& obs, bool use_abs) {
  if (!(theta > 0.0)) throw std::invalid_argument("curved_cd: theta > 0 required");
  if (use_abs) {
    const double d = obs.d;
    return 1.0 - normal_cdf((d - theta) / theta) + normal_cdf((-d - theta) / theta);
  }
  if (obs.y.empty()) throw std::invalid_argument("curved_cd: raw-Y curve needs the signed y");
  return 1.0 - normal_cdf((obs.y.front() - theta) / theta);
}

}  // namespace confdist
