#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

// Regularized incomplete gamma functions and the central chi-square family.
// P(a,x) uses the power series for x < a+1 and the Lentz continued fraction
// for Q(a,x) otherwise (Numerical Recipes 6.2 scheme, double precision).

namespace confdist {
namespace detail {

inline constexpr double kSeriesEps = 3e-16;
inline constexpr int kMaxSeriesIter = 400000;

// Stirling remainder S(s) in lgamma(s+1) = (s+1/2) ln s - s + ln(2 pi)/2 + S(s).
inline double stirling_tail(double s) {
  const double r = 1.0 / s;
  const double r2 = r * r;
  return r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)));
}

// ln( x^s e^(-x) / Gamma(s+1) ). The direct form s*ln(x) - x - lgamma(s+1)
// cancels catastrophically when s and x are both large and comparable; the
// Stirling rearrangement keeps the absolute error of the log near 1e-13 there.
inline double log_gamma_term(double s, double x) {
  if (s == 0.0) return -x;
  if (s < 20.0 || x <= 0.0) return s * std::log(x) - x - std::lgamma(s + 1.0);
  return s * std::log1p((x - s) / s) - (x - s) - 0.5 * std::log(2.0 * M_PI * s) -
         stirling_tail(s);
}

// x^s e^(-x) / Gamma(s+1), the jump between successive regularized gammas:
// P(s,x) - P(s+1,x) = Q(s+1,x) - Q(s,x) = reg_gamma_term(s,x). Doubles as the
// Poisson pmf: reg_gamma_term(j, lambda) = e^(-lambda) lambda^j / j!.
inline double reg_gamma_term(double s, double x) {
  if (x <= 0.0) return s == 0.0 ? 1.0 : 0.0;
  return std::exp(log_gamma_term(s, x));
}

inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxSeriesIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kSeriesEps) {
      return sum * std::exp(log_gamma_term(a, x) + std::log(a));
    }
  }
  throw std::runtime_error("gamma_p_series: no convergence");
}

inline double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / kSeriesEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kSeriesEps) {
      return h * std::exp(log_gamma_term(a, x) + std::log(a));
    }
  }
  throw std::runtime_error("gamma_q_cf: no convergence");
}

// Regularized lower incomplete gamma P(a,x).
inline double reg_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("reg_gamma_p: a > 0, x >= 0 required");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
inline double reg_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("reg_gamma_q: a > 0, x >= 0 required");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

// Monotone scalar root finding: f increasing on [lo, hi] with f(lo) <= 0 <= f(hi).
// Bisection with a secant step when it stays inside the bracket.
template <typename F>
double solve_increasing(F&& f, double lo, double hi, double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) throw std::runtime_error("solve_increasing: root not bracketed");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int i = 0; i < 400 && (hi - lo) > xtol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (fhi > flo) {
      const double sec = lo - flo * (hi - lo) / (fhi - flo);
      if (sec > lo + 0.25 * xtol && sec < hi - 0.25 * xtol && (i % 2 == 0)) mid = sec;
    }
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Acklam's rational approximation with one Halley refinement (~1e-15).
inline double normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("normal_quantile: p in [0,1] required");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01,  -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley step on Phi(x) - p
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

inline double central_chisq_cdf(double x, double df) {
  if (x < 0.0) throw std::invalid_argument("central_chisq_cdf: x >= 0 required");
  if (df == 2.0) return -std::expm1(-0.5 * x);
  return detail::reg_gamma_p(0.5 * df, 0.5 * x);
}

inline double central_chisq_sf(double x, double df) {
  if (x < 0.0) throw std::invalid_argument("central_chisq_sf: x >= 0 required");
  if (df == 2.0) return std::exp(-0.5 * x);
  return detail::reg_gamma_q(0.5 * df, 0.5 * x);
}

inline double central_chisq_pdf(double x, double df) {
  if (x < 0.0) throw std::invalid_argument("central_chisq_pdf: x >= 0 required");
  const double a = 0.5 * df;
  if (x == 0.0) {
    if (df < 2.0) return std::numeric_limits<double>::infinity();
    if (df == 2.0) return 0.5;
    return 0.0;
  }
  return 0.5 * std::exp(detail::log_gamma_term(a - 1.0, 0.5 * x));
}

inline double central_chisq_quantile(double p, double df) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("central_chisq_quantile: p in [0,1) required");
  if (p == 0.0) return 0.0;
  if (df == 2.0) return -2.0 * std::log1p(-p);
  // Wilson-Hilferty seed, then bracketed refinement on the cdf
  const double z = normal_quantile(p);
  const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  double guess = df * t * t * t;
  if (!(guess > 0.0)) guess = 0.5 * df;
  double lo = guess, hi = guess;
  while (central_chisq_cdf(lo, df) > p && lo > 1e-300) lo *= 0.5;
  while (central_chisq_cdf(hi, df) < p) hi *= 2.0;
  return detail::solve_increasing([&](double x) { return central_chisq_cdf(x, df) - p; }, lo, hi,
                                  1e-12 * (1.0 + hi));
}

}  // namespace confdist
