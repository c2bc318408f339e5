#pragma once

#include <vector>

#include "confdist/confidence.hpp"
#include "confdist/model.hpp"
#include "confdist/numerics.hpp"

// Posterior-style competitors to the CD: the uniform-prior marginal posterior
// G (equal to the integrated CD), the reference posterior R, and the GFD
// sampling mechanism. None of these carry an atom at theta = 0.

namespace confdist {

// G(theta; d) = Gamma_k(theta^2/sigma^2; d^2/sigma^2) - the theta/d role swap
// of the CD.
inline double up_cdf(double theta, double d, double sigma, int k) {
  theta = clamp_theta(theta);
  if (!(d >= 0.0)) throw std::invalid_argument("up_cdf: d >= 0 required");
  if (!(sigma > 0.0)) throw std::invalid_argument("up_cdf: sigma > 0 required");
  if (theta == 0.0) return 0.0;
  const double nu = (d / sigma) * (d / sigma);
  return noncentral_chisq_cdf((theta / sigma) * (theta / sigma), {k, nu});
}

// g(theta; d) = (2 theta / sigma^2) gamma_k(theta^2/sigma^2; d^2/sigma^2)
inline double up_density(double theta, double d, double sigma, int k) {
  theta = clamp_theta(theta);
  if (!(d >= 0.0)) throw std::invalid_argument("up_density: d >= 0 required");
  if (!(sigma > 0.0)) throw std::invalid_argument("up_density: sigma > 0 required");
  const double nu = (d / sigma) * (d / sigma);
  if (theta == 0.0) {
    // k = 1 has a positive limit; k >= 2 vanishes with the 2 theta factor
    return k == 1 ? (2.0 / sigma) * std::exp(-0.5 * nu) / std::sqrt(2.0 * M_PI) : 0.0;
  }
  return (2.0 * theta / (sigma * sigma)) *
         noncentral_chisq_pdf((theta / sigma) * (theta / sigma), {k, nu});
}

inline double up_quantile(double p, double d, double sigma, int k) {
  const double nu = (d / sigma) * (d / sigma);
  return sigma * std::sqrt(noncentral_chisq_quantile(p, {k, nu}));
}

// Probability a continuous (atom-free) CDF assigns to a proposition.
template <typename Cdf>
double set_probability(Cdf&& cdf, const Proposition& a) {
  const Proposition base = a.complemented() ? a.complement() : a;
  const double flo = base.lower() > 0.0 ? cdf(base.lower()) : 0.0;
  const double fhi = base.upper() ? cdf(*base.upper()) : 1.0;
  double mass = fhi - flo;
  if (mass < 0.0) mass = 0.0;
  if (mass > 1.0) mass = 1.0;
  return a.complemented() ? 1.0 - mass : mass;
}

// Reference posterior for theta: flat prior on the norm itself (Bernardo's
// reference prior for this problem), i.e. the normalized marginal likelihood
// of D. With the Poisson-mixture form of the noncentral density the posterior
// CDF reduces to an exact mixture over half-integer gamma CDFs:
//
//   R(T; d) = sum_j w_j P(j+1/2, T^2/(2 sigma^2)),
//   w_j ~ g_{k+2j}(d^2/sigma^2) Gamma(j+1/2) / j!   (normalized),
//
// so construction and evaluation need no quadrature.
class ReferencePosterior {
 public:
  ReferencePosterior(double d, double sigma, int k) : d_(d), sigma_(sigma), k_(k) {
    if (!(d >= 0.0)) throw std::invalid_argument("ReferencePosterior: d >= 0 required");
    if (!(sigma > 0.0)) throw std::invalid_argument("ReferencePosterior: sigma > 0 required");
    if (k < 1) throw std::invalid_argument("ReferencePosterior: k >= 1 required");

    const double x = (d / sigma) * (d / sigma);
    const double a = 0.5 * k;
    if (x == 0.0) {  // limiting posterior: half-normal scale sigma
      weights_ = {1.0};
      log_norm_ = std::log(std::sqrt(2.0 / M_PI) / sigma);
      return;
    }

    // relative weights from j = 0 upward; rescale to dodge overflow
    std::vector<double> u;
    double cur = 1.0, umax = 1.0;
    int rescales = 0;
    u.push_back(cur);
    for (long j = 0;; ++j) {
      const double r = 0.5 * x * (j + 0.5) / ((a + j) * (j + 1.0));
      cur *= r;
      u.push_back(cur);
      if (cur > umax) umax = cur;
      if (r < 1.0 && cur < umax * 1e-18) break;
      if (j >= 2000000)
        throw std::runtime_error("ReferencePosterior: d^2/sigma^2 too large, series too long");
      if (cur > 1e280) {
        for (double& w : u) w *= 1e-300;
        cur *= 1e-300;
        umax *= 1e-300;
        ++rescales;
      }
    }

    double sum = 0.0;
    for (double w : u) sum += w;
    if (!(sum > 0.0) || !std::isfinite(sum))
      throw std::runtime_error("ReferencePosterior: degenerate normalization");

    // keep only the window of non-negligible weights
    std::size_t lo = 0, hi = u.size();
    while (lo + 1 < hi && u[lo] < umax * 1e-18) ++lo;
    while (hi > lo + 1 && u[hi - 1] < umax * 1e-18) --hi;
    j_lo_ = static_cast<long>(lo);
    weights_.assign(u.begin() + static_cast<std::ptrdiff_t>(lo),
                    u.begin() + static_cast<std::ptrdiff_t>(hi));
    for (double& w : weights_) w /= sum;

    // log of the flat-prior normalizer, used by density():
    // N = (sqrt(2) d / sigma) sum_j g_{k+2j}(x) Gamma(j+1/2) / j!
    const double log_u0 = std::log(0.5) + detail::log_gamma_term(a - 1.0, 0.5 * x) +
                          std::lgamma(0.5);
    log_norm_ = std::log(M_SQRT2 * d_ / sigma_) + log_u0 + std::log(sum) +
                rescales * 300.0 * std::log(10.0);
  }

  double cdf(double theta) const {
    theta = clamp_theta(theta);
    if (theta == 0.0) return 0.0;
    if (std::isinf(theta)) return 1.0;
    const double s = theta / sigma_;
    const double arg = 0.5 * s * s;
    double aj = j_lo_ + 0.5;
    double p = detail::reg_gamma_p(aj, arg);
    double t = detail::reg_gamma_term(aj, arg);
    double acc = 0.0;
    for (double w : weights_) {
      acc += w * p;
      p -= t;
      if (p < 0.0) p = 0.0;
      t *= arg / (aj + 1.0);
      aj += 1.0;
    }
    if (acc < 0.0) return 0.0;
    return acc > 1.0 ? 1.0 : acc;
  }

  double density(double theta) const {
    theta = clamp_theta(theta);
    if (d_ == 0.0)  // half-normal limit
      return std::exp(-0.5 * (theta / sigma_) * (theta / sigma_) + log_norm_);
    if (theta == 0.0) return 0.0;
    const double x = (d_ / sigma_) * (d_ / sigma_);
    const double nu = (theta / sigma_) * (theta / sigma_);
    const double like = (2.0 * d_ / (sigma_ * sigma_)) * noncentral_chisq_pdf(x, {k_, nu});
    return like <= 0.0 ? 0.0 : std::exp(std::log(like) - log_norm_);
  }

  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("ReferencePosterior::quantile: p in (0,1) required");
    double hi = sigma_ + d_;
    while (cdf(hi) < p) hi *= 2.0;
    return detail::solve_increasing([&](double t) { return cdf(t) - p; }, 0.0, hi,
                                    1e-11 * (1.0 + hi));
  }

  double observed_d() const { return d_; }
  double sigma() const { return sigma_; }
  int dim() const { return k_; }

 private:
  double d_, sigma_;
  int k_;
  long j_lo_ = 0;
  std::vector<double> weights_;
  double log_norm_ = 0.0;
};

inline double rp_posterior(double theta, double d, double sigma, int k) {
  return ReferencePosterior(d, sigma, k).cdf(theta);
}

// Draws from the set-valued inverse of the data-generating equation:
// Q(y, U*) ~ sigma * sqrt(chisq_2(d^2/sigma^2)); the empirical CDF converges
// to the uniform-prior posterior G.
struct GfdSample {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

inline GfdSample gfd_sample(const Observation& obs, const ModelConfig& cfg, long n,
                            std::uint64_t seed) {
  ModelConfig::validate(cfg);
  if (cfg.kind != ModelKind::NormMean || cfg.k != 2)
    throw std::invalid_argument("gfd_sample: defined for the NormMean model with k = 2");
  if (n < 1) throw std::invalid_argument("gfd_sample: n >= 1 required");
  const double nu = (obs.d / cfg.sigma) * (obs.d / cfg.sigma);
  GfdSample out;
  out.seed = seed;
  out.values.resize(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(i));
    out.values[static_cast<std::size_t>(i)] = cfg.sigma * std::sqrt(rng.noncentral_chisq(2, nu));
  }
  return out;
}

}  // namespace confdist
