#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "confdist/intervals.hpp"
#include "confdist/model.hpp"
#include "ci_oracle.hpp"

using namespace confdist;
using Catch::Approx;

namespace {

const ModelConfig kSat = ModelConfig::norm_mean(2, 1.0);

bool interval_covers(const ObservedInterval& iv, double theta0) {
  switch (iv.kind) {
    case IntervalKind::Empty: return false;
    case IntervalKind::PointZero: return theta0 == 0.0;
    default: break;
  }
  if (theta0 < iv.lower) return false;
  if (!iv.upper) return true;
  return iv.closed ? theta0 <= *iv.upper : theta0 < *iv.upper;
}

}  // namespace

TEST_CASE("spec validation", "[intervals]") {
  CHECK_THROWS_AS(IntervalSpec::validate({0.9, 0.2, false}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSpec::validate({1.0, 0.0, false}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSpec::validate({0.9, -0.1, false}), std::invalid_argument);
  CHECK_NOTHROW(IntervalSpec::validate({0.9, 0.1, false}));  // beta = 1 - alpha allowed
  CHECK_NOTHROW(IntervalSpec::validate({0.9, 0.0, true}));
}

TEST_CASE("observed-interval cases", "[intervals]") {
  const IntervalSpec spec{0.9, 0.05, false};

  const ObservedInterval one = ci_observe(2.0, spec, kSat);
  CHECK(one.kind == IntervalKind::OneSided);
  CHECK(one.lower == 0.0);
  CHECK(*one.upper == Approx(3.451).margin(1e-3));

  const ObservedInterval empty = ci_observe(0.2, spec, kSat);
  CHECK(empty.kind == IntervalKind::Empty);
  CHECK(empty.lower == 0.0);
  CHECK(*empty.upper == 0.0);

  const ObservedInterval two = ci_observe(3.0, spec, kSat);
  CHECK(two.kind == IntervalKind::TwoSided);
  CHECK(two.lower > 0.0);
  // independent bisection on the cdf as an oracle for the lower endpoint
  {
    double lo = 0.0, hi = 9.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (noncentral_chisq_cdf(9.0, {2, mid * mid}) > 0.95 ? lo : hi) = mid;
    }
    CHECK(two.lower == Approx(lo).margin(1e-8));
  }

  const ObservedInterval pz = ci_observe(0.2, {0.9, 0.05, true}, kSat);
  CHECK(pz.kind == IntervalKind::PointZero);
  CHECK(pz.closed);
}

TEST_CASE("boundary ties use the paper's inequalities", "[intervals]") {
  const IntervalSpec spec{0.9, 0.05, false};
  const double t_two = std::sqrt(central_chisq_quantile(0.95, 2));   // 2.448
  const double t_empty = std::sqrt(central_chisq_quantile(0.05, 2)); // 0.320
  CHECK(ci_observe(t_two, spec, kSat).kind == IntervalKind::OneSided);       // d <= q: case (b)
  CHECK(ci_observe(t_two + 1e-9, spec, kSat).kind == IntervalKind::TwoSided);
  CHECK(ci_observe(t_empty, spec, kSat).kind == IntervalKind::Empty);        // d <= q: case (c)
  CHECK(ci_observe(t_empty + 1e-9, spec, kSat).kind == IntervalKind::OneSided);
}

TEST_CASE("one-sided procedures from beta = 0 and beta = 1 - alpha", "[intervals]") {
  const ObservedInterval lower_only = ci_observe(3.0, {0.9, 0.0, false}, kSat);
  CHECK(lower_only.kind == IntervalKind::TwoSided);
  CHECK(lower_only.lower > 0.0);
  CHECK_FALSE(lower_only.upper.has_value());  // [theta_L, inf)

  const ObservedInterval upper_only = ci_observe(0.5, {0.9, 0.1, false}, kSat);
  CHECK(upper_only.kind == IntervalKind::OneSided);
  CHECK(upper_only.lower == 0.0);

  const ConfidenceCurve curve(kSat, 3.0);
  CHECK(ci_confidence(lower_only, curve) == Approx(0.9).margin(1e-10));
}

TEST_CASE("cd confidence of observed intervals", "[intervals]") {
  const IntervalSpec spec{0.9, 0.05, false};

  const ConfidenceCurve at2(kSat, 2.0);
  CHECK(ci_confidence(ci_observe(2.0, spec, kSat), at2) == Approx(0.95).margin(1e-10));

  const ConfidenceCurve at02(kSat, 0.2);
  CHECK(ci_confidence(ci_observe(0.2, spec, kSat), at02) == Approx(0.980).margin(1e-3));
  CHECK(ci_confidence(ci_observe(0.2, {0.9, 0.05, true}, kSat), at02) ==
        Approx(0.980).margin(1e-3));

  const ConfidenceCurve at3(kSat, 3.0);
  CHECK(ci_confidence(ci_observe(3.0, spec, kSat), at3) == Approx(0.9).margin(1e-10));

  CHECK_THROWS_AS(ci_confidence(ci_observe(2.0, spec, kSat), at3), std::invalid_argument);
}

TEST_CASE("ci confidence equals the brute-force max alpha", "[intervals][oracle]") {
  oracles::CiLevelOracle oracle(1.0, 2);
  struct Case {
    double d, alpha, beta;
  };
  const Case cases[] = {{3.0, 0.9, 0.05}, {2.0, 0.9, 0.05}, {0.2, 0.9, 0.05}, {1.0, 0.6, 0.05}};
  for (const auto& c : cases) {
    const ObservedInterval iv = ci_observe(c.d, {c.alpha, c.beta, false}, kSat);
    const ConfidenceCurve curve(kSat, c.d);
    REQUIRE(ci_confidence(iv, curve) == Approx(oracle.max_alpha(c.d, c.alpha, c.beta)).margin(1e-3));
  }
}

TEST_CASE("half-open procedure keeps exact coverage", "[intervals][sampling]") {
  const long n = 1500;
  for (double beta : {0.0, 0.1, 0.2}) {
    const IntervalSpec spec{0.8, beta, false};
    for (double sigma : {1.0, 20.0}) {
      const ModelConfig cfg = ModelConfig::norm_mean(2, sigma);
      for (double theta0 : {0.0, 1.3}) {
        long hits = 0;
        for (long i = 0; i < n; ++i) {
          Rng rng = Rng::for_replicate(600 + static_cast<std::uint64_t>(100 * beta), i);
          const double d = sample_d(theta0, cfg, rng);
          if (interval_covers(ci_observe(d, spec, cfg), theta0)) ++hits;
        }
        const double cov = static_cast<double>(hits) / n;
        INFO("beta=" << beta << " sigma=" << sigma << " theta0=" << theta0);
        REQUIRE(cov == Approx(0.8).margin(3.0 * std::sqrt(0.8 * 0.2 / n)));
      }
    }
  }
}

TEST_CASE("closed procedure is conservative at zero", "[intervals][sampling]") {
  const long n = 4000;
  const IntervalSpec spec{0.8, 0.1, true};
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    Rng rng = Rng::for_replicate(16, i);
    const double d = sample_d(0.0, kSat, rng);
    if (interval_covers(ci_observe(d, spec, kSat), 0.0)) ++hits;
  }
  const double cov = static_cast<double>(hits) / n;
  CHECK(cov == Approx(0.9).margin(3.0 * std::sqrt(0.9 * 0.1 / n)));  // alpha + beta
}

TEST_CASE("interval carries its observation", "[intervals]") {
  const ObservedInterval iv = ci_observe(0.2, {0.9, 0.05, false}, kSat);
  CHECK(iv.d == 0.2);
}

TEST_CASE("open-interval procedure fails at the boundary (negative control)",
          "[intervals][sampling]") {
  // (theta_L, theta_U) can never contain theta = 0, so its coverage collapses
  // there while the half-open procedure stays at alpha
  const long n = 1500;
  const IntervalSpec spec{0.8, 0.1, false};
  long open_hits = 0, half_open_hits = 0;
  for (long i = 0; i < n; ++i) {
    Rng rng = Rng::for_replicate(17, i);
    const double d = sample_d(0.0, kSat, rng);
    const ObservedInterval iv = ci_observe(d, spec, kSat);
    if (interval_covers(iv, 0.0)) ++half_open_hits;
    const bool open_covers = iv.kind != IntervalKind::Empty && 0.0 > iv.lower &&
                             (!iv.upper || 0.0 < *iv.upper);
    if (open_covers) ++open_hits;
  }
  CHECK(open_hits == 0);
  CHECK(static_cast<double>(half_open_hits) / n ==
        Approx(0.8).margin(3.0 * std::sqrt(0.8 * 0.2 / n)));
}
