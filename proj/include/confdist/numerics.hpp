#pragma once

#include <optional>

#include "confdist/special.hpp"

// Noncentral chi-square distribution functions and the quantile machinery for
// the scalar statistic D, with D^2/sigma^2 ~ chisq_k(theta^2/sigma^2).
//
// The distribution functions are Poisson mixtures of central chi-square terms
// summed outward from the modal Poisson index, with gamma-function recurrences
// between neighbouring terms (Benton & Krishnamoorthy 2003). Summation stops
// when a bracketing bound on the remaining mixture mass drops below 1e-14,
// which keeps the absolute error of the cdf within ~1e-13 for noncentralities
// from 0 up to ~1e7.

namespace confdist {

struct ChiSqParams {
  int df = 2;        // degrees of freedom (the problem dimension k)
  double ncp = 0.0;  // noncentrality theta^2/sigma^2
};

inline void validate(const ChiSqParams& p) {
  if (p.df < 1) throw std::invalid_argument("ChiSqParams: df must be a positive integer");
  if (!(p.ncp >= 0.0) || !std::isfinite(p.ncp))
    throw std::invalid_argument("ChiSqParams: ncp must be finite and nonnegative");
}

namespace detail {

inline constexpr double kMixtureTol = 1e-14;

// sum_j Poisson(j; lambda) * G(a+j, x2), G = P (lower) or Q (upper), summed
// outward from the modal Poisson index with geometric tail bounds. Work is
// confined to the index window carrying all but ~1e-16 of the Poisson mass;
// outside the transition zone huge noncentralities short-circuit through the
// monotonicity of G in j.
inline double poisson_mixture_cdf(double x2, double a, double lambda, bool lower) {
  if (x2 == 0.0) return lower ? 0.0 : 1.0;
  if (lambda == 0.0) return lower ? reg_gamma_p(a, x2) : reg_gamma_q(a, x2);

  const double spread = 12.0 * std::sqrt(lambda) + 12.0;
  const long j_lo = static_cast<long>(std::max(0.0, std::floor(lambda - spread)));
  const long j_hi = static_cast<long>(std::ceil(lambda + spread));

  if (lambda > 1e8) {
    // far outside the transition zone the answer is flat; inside it the sweep
    // would need ~sqrt(lambda) terms, beyond what this engine supports
    const double sd = std::sqrt(a + 2.0 * lambda);
    if (x2 < a + lambda - 14.0 * sd) return lower ? 0.0 : 1.0;
    if (x2 > a + lambda + 14.0 * sd) return lower ? 1.0 : 0.0;
    throw std::runtime_error(
        "poisson_mixture_cdf: noncentrality too large inside the transition zone");
  }
  if (lambda > 1e4) {
    // G is monotone in j: bound the whole mixture by its extreme component
    if (lower) {
      if (reg_gamma_p(a + j_lo, x2) < 1e-15) return 0.0;
      if (reg_gamma_p(a + j_hi, x2) > 1.0 - 1e-15) return 1.0;
    } else {
      if (reg_gamma_q(a + j_lo, x2) > 1.0 - 1e-15) return 1.0;
      if (reg_gamma_q(a + j_hi, x2) < 1e-15) return 0.0;
    }
  }

  const long m = static_cast<long>(lambda);
  const double wm = reg_gamma_term(static_cast<double>(m), lambda);  // Poisson(m; lambda)
  const double gm = lower ? reg_gamma_p(a + m, x2) : reg_gamma_q(a + m, x2);
  const double tm = reg_gamma_term(a + m, x2);  // P(a+m,x2) - P(a+m+1,x2)

  double sum = wm * gm;

  // downward sweep, j = m-1 .. j_lo; weights fall off geometrically below the mode
  {
    double w = wm, g = gm, t = tm;
    for (long j = m; j > j_lo; --j) {
      t *= (a + j) / x2;
      g = lower ? g + t : g - t;
      w *= static_cast<double>(j) / lambda;
      sum += w * g;
      const double r = static_cast<double>(j - 1) / lambda;
      if (r < 1.0) {
        const double cap = lower ? 1.0 : g;
        if (w * (r / (1.0 - r)) * cap <= 0.5 * kMixtureTol) break;
      }
    }
  }
  // upward sweep, j = m+1 .. j_hi
  {
    double w = wm, g = gm, t = tm;
    for (long j = m + 1; j <= j_hi; ++j) {
      g = lower ? g - t : g + t;
      if (g < 0.0) g = 0.0;
      w *= lambda / static_cast<double>(j);
      sum += w * g;
      t *= x2 / (a + j);
      const double r = lambda / static_cast<double>(j + 1);
      if (r < 1.0) {
        const double cap = lower ? g : 1.0;
        if (w * (r / (1.0 - r)) * cap <= 0.5 * kMixtureTol) break;
      }
    }
  }
  if (sum < 0.0) return 0.0;
  return sum > 1.0 ? 1.0 : sum;
}

}  // namespace detail

// P(chisq_df(ncp) <= x)
inline double noncentral_chisq_cdf(double x, const ChiSqParams& p) {
  validate(p);
  if (x < 0.0) throw std::invalid_argument("noncentral_chisq_cdf: x >= 0 required");
  if (std::isinf(x)) return 1.0;
  if (p.ncp == 0.0) return central_chisq_cdf(x, p.df);
  return detail::poisson_mixture_cdf(0.5 * x, 0.5 * p.df, 0.5 * p.ncp, /*lower=*/true);
}

// P(chisq_df(ncp) > x); accurate in the upper tail
inline double noncentral_chisq_sf(double x, const ChiSqParams& p) {
  validate(p);
  if (x < 0.0) throw std::invalid_argument("noncentral_chisq_sf: x >= 0 required");
  if (std::isinf(x)) return 0.0;
  if (p.ncp == 0.0) return central_chisq_sf(x, p.df);
  return detail::poisson_mixture_cdf(0.5 * x, 0.5 * p.df, 0.5 * p.ncp, /*lower=*/false);
}

inline double noncentral_chisq_pdf(double x, const ChiSqParams& p) {
  validate(p);
  if (x < 0.0) throw std::invalid_argument("noncentral_chisq_pdf: x >= 0 required");
  if (p.ncp == 0.0) return central_chisq_pdf(x, p.df);
  const double lambda = 0.5 * p.ncp;
  if (x == 0.0) {
    if (p.df < 2) return std::numeric_limits<double>::infinity();
    if (p.df == 2) return 0.5 * std::exp(-lambda);
    return 0.0;
  }
  const double a = 0.5 * p.df;
  const double x2 = 0.5 * x;

  // modal index of w_j * f_{df+2j}(x): positive root of (j+1)(a+j) = lambda*x2
  const double disc = (a - 1.0) * (a - 1.0) + 4.0 * lambda * x2;
  long j0 = static_cast<long>(0.5 * (std::sqrt(disc) - (a + 1.0)));
  if (j0 < 0) j0 = 0;

  const double log_s0 = detail::log_gamma_term(static_cast<double>(j0), lambda) + std::log(0.5) +
                        detail::log_gamma_term(a + j0 - 1.0, x2);
  const double s0 = std::exp(log_s0);
  if (s0 == 0.0) return 0.0;
  if (lambda > 1e8)
    throw std::runtime_error("noncentral_chisq_pdf: noncentrality too large");

  double sum = s0;
  {  // upward
    double s = s0;
    long j = j0 + 1;
    for (; j - j0 < detail::kMaxSeriesIter; ++j) {
      const double r = lambda * x2 / (static_cast<double>(j) * (a + j - 1.0));
      s *= r;
      sum += s;
      if (r < 1.0 && s * (r / (1.0 - r)) <= detail::kMixtureTol * sum) break;
    }
    if (j - j0 >= detail::kMaxSeriesIter)
      throw std::runtime_error("noncentral_chisq_pdf: series did not converge");
  }
  {  // downward
    double s = s0;
    for (long j = j0; j >= 1; --j) {
      const double r = static_cast<double>(j) * (a + j - 1.0) / (lambda * x2);
      s *= r;
      sum += s;
      if (r < 1.0 && s * (r / (1.0 - r)) <= detail::kMixtureTol * sum) break;
    }
  }
  return sum;
}

// smallest x with P(chisq_df(ncp) <= x) >= prob; prob = 0 maps to 0
inline double noncentral_chisq_quantile(double prob, const ChiSqParams& p) {
  validate(p);
  if (!(prob >= 0.0 && prob < 1.0))
    throw std::invalid_argument("noncentral_chisq_quantile: prob in [0,1) required");
  if (prob == 0.0) return 0.0;
  if (p.ncp == 0.0) return central_chisq_quantile(prob, p.df);

  // Pearson's three-moment central approximation as a seed
  const double k = p.df, l = p.ncp;
  const double c = (k + 3.0 * l) / (k + 2.0 * l);
  const double b = -(l * l) / (k + 3.0 * l);
  const double ff = (k + 2.0 * l) / (c * c);
  double guess = b + c * central_chisq_quantile(prob, ff);
  if (!(guess > 0.0)) guess = 1e-8 * (k + l);

  double lo = guess, hi = std::max(guess, 1.0);
  while (lo > 1e-300 && noncentral_chisq_cdf(lo, p) > prob) lo *= 0.5;
  while (noncentral_chisq_cdf(hi, p) < prob) hi *= 2.0;
  return detail::solve_increasing([&](double x) { return noncentral_chisq_cdf(x, p) - prob; }, lo,
                                  hi, 1e-13 * (1.0 + hi));
}

// Parameters of the D-quantile q_alpha(theta): P_theta(D <= q_alpha(theta)) = 1 - alpha.
struct QuantileQuery {
  double alpha = 0.05;  // upper-tail level, in (0,1)
  double theta = 0.0;   // nonnegative
  double sigma = 1.0;   // known, positive
  int k = 2;            // dimension
};

inline void validate(const QuantileQuery& q) {
  if (!(q.alpha > 0.0 && q.alpha < 1.0))
    throw std::invalid_argument("QuantileQuery: alpha in (0,1) required");
  if (!(q.theta >= 0.0)) throw std::invalid_argument("QuantileQuery: theta >= 0 required");
  if (!(q.sigma > 0.0)) throw std::invalid_argument("QuantileQuery: sigma > 0 required");
  if (q.k < 1) throw std::invalid_argument("QuantileQuery: k >= 1 required");
}

inline double d_quantile(const QuantileQuery& q) {
  validate(q);
  const double nu = (q.theta / q.sigma) * (q.theta / q.sigma);
  return q.sigma * std::sqrt(noncentral_chisq_quantile(1.0 - q.alpha, {q.k, nu}));
}

// Clamped inverse of q_alpha(theta) in theta. Returns 0 for d <= q_alpha(0)
// and for alpha = 0; returns an unbounded sentinel (nullopt) for alpha = 1.
inline std::optional<double> d_quantile_inverse(double alpha, double d, double sigma, int k) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("d_quantile_inverse: alpha in [0,1] required");
  if (!(d >= 0.0)) throw std::invalid_argument("d_quantile_inverse: d >= 0 required");
  if (!(sigma > 0.0)) throw std::invalid_argument("d_quantile_inverse: sigma > 0 required");
  if (k < 1) throw std::invalid_argument("d_quantile_inverse: k >= 1 required");
  if (alpha == 0.0) return 0.0;
  if (alpha == 1.0) return std::nullopt;

  const double x = (d / sigma) * (d / sigma);
  const double target = 1.0 - alpha;
  if (central_chisq_cdf(x, k) <= target) return 0.0;  // d <= q_alpha(0)

  // cdf is strictly decreasing in the noncentrality; bracket then refine
  double hi = (d / sigma + 10.0) * (d / sigma + 10.0);
  while (noncentral_chisq_cdf(x, {k, hi}) > target) hi *= 2.0;
  const double nu = detail::solve_increasing(
      [&](double v) { return target - noncentral_chisq_cdf(x, {k, v}); }, 0.0, hi,
      1e-12 * (1.0 + hi));
  return sigma * std::sqrt(nu);
}

}  // namespace confdist
