// Acceptance suite: one pass/fail line per criterion, with the measured
// values printed next to their targets. Exit code is the number of failed
// criteria. An optional argument runs a single criterion by number.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstdarg>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "ci_oracle.hpp"
#include "confdist/confdist.hpp"
#include "oracles.hpp"

namespace {

using namespace confdist;

std::vector<std::string> g_notes;

void note(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  g_notes.emplace_back(buf);
}

bool within(double value, double target, double tol, const char* label) {
  const bool ok = std::fabs(value - target) <= tol;
  note("%s %s = %.6g (target %.6g +/- %.3g)", ok ? "ok  " : "MISS", label, value, target, tol);
  return ok;
}

bool at_most(double value, double bound, const char* label) {
  const bool ok = value <= bound;
  note("%s %s = %.6g (<= %.6g)", ok ? "ok  " : "MISS", label, value, bound);
  return ok;
}

// ---------------------------------------------------------------- criterion 1
bool golden_numbers() {
  bool ok = true;
  ok &= within(d_quantile({0.05, 0.0, 1.0, 2}), 2.448, 1e-3, "q_.05(0)");
  ok &= within(d_quantile({0.35, 0.0, 1.0, 2}), 1.449, 1e-3, "q_.35(0)");
  ok &= within(d_quantile({0.95, 0.0, 1.0, 2}), 0.320, 1e-3, "q_.95(0)");
  ok &= within(*d_quantile_inverse(0.95, 2.0, 1.0, 2), 3.451, 1e-3, "theta_U(2)");
  ok &= within(*d_quantile_inverse(0.95, 1.0, 1.0, 2), 2.287, 1e-3, "theta_U(1)");
  ok &= within(ConfidenceCurve(ModelConfig::norm_mean(2, 1.0), 0.2).point_mass(), 0.980, 1e-3,
               "M(0.2)");
  return ok;
}

// ---------------------------------------------------------------- criterion 2
bool assessment_values() {
  bool ok = true;
  const Proposition h0 = Proposition::interval(0.0, 2.0);
  {
    const ConfidenceCurve curve(ModelConfig::norm_mean(2, 1.0), 1.0);
    ok &= within(confidence_of_set(h0, curve), 0.918, 1e-3, "C(H0) sigma=1");
    ok &= within(up_cdf(2.0, 1.0, 1.0, 2), 0.731, 1e-3, "G(H0) sigma=1");
    ok &= within(rp_posterior(2.0, 1.0, 1.0, 2), 0.891, 0.02, "R(H0) sigma=1");
  }
  {
    const ConfidenceCurve curve(ModelConfig::norm_mean(2, 100.0), 1.0);
    const double c = confidence_of_set(h0, curve);
    const bool c_ok = c >= 1.0 - 1e-3 && c <= 1.0;
    note("%s C(H0) sigma=100 = %.6g (1.000 - 0, within 1e-3)", c_ok ? "ok  " : "MISS", c);
    ok &= c_ok;
    ok &= at_most(up_cdf(2.0, 1.0, 100.0, 2), 1e-3, "G(H0) sigma=100");
    ok &= within(rp_posterior(2.0, 1.0, 100.0, 2), 0.016, 0.01, "R(H0) sigma=100");
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 3
bool exact_pit() {
  const long n = 100000;
  bool ok = true;
  const double bound = oracles::dkw_bound(n, 0.999);
  for (double sigma : {1.0, 20.0}) {
    for (double theta0 : {0.0, 1.0, 8.0}) {
      const ModelConfig cfg = ModelConfig::norm_mean(2, sigma);
      const double nu = (theta0 / sigma) * (theta0 / sigma);
      std::vector<double> pit(n);
      for (long i = 0; i < n; ++i) {
        Rng rng = Rng::for_replicate(3000 + static_cast<std::uint64_t>(10 * sigma + theta0), i);
        const double d = sample_d(theta0, cfg, rng);
        const double x = (d / sigma) * (d / sigma);
        pit[static_cast<std::size_t>(i)] =
            theta0 == 0.0 ? central_chisq_sf(x, 2) : noncentral_chisq_sf(x, {2, nu});
      }
      const double ks = oracles::ks_statistic(std::move(pit), [](double u) { return u; });
      char label[64];
      std::snprintf(label, sizeof label, "KS(theta0=%g, sigma=%g)", theta0, sigma);
      ok &= at_most(ks, bound, label);
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 4
bool coverage_suite() {
  ExperimentGrid grid{{0.0, 0.5, 1.0, 2.0, 4.0, 8.0}, {1.0, 5.0, 20.0}, {2, 100}, 10000, 4001};
  bool ok = true;

  auto check_cd = [&](const IntervalSpec& spec, const char* label) {
    const SimReport rep = coverage_sim(grid, Method::CD, spec);
    double worst = 0.0;
    bool all = true;
    for (const SimCell& c : rep.cells) {
      const double dev = std::fabs(c.estimate - spec.alpha);
      worst = std::max(worst, dev / c.mc_se);
      if (dev > 3.0 * c.mc_se) {
        all = false;
        note("MISS %s cell theta0=%g sigma=%g k=%d: %.4f (3 SE band %.4f)", label, c.theta0,
             c.sigma, c.k, c.estimate, 3.0 * c.mc_se);
      }
    }
    note("%s cd %s: all %zu cells within 3 SE of %.2g (worst dev %.2f SE)",
         all ? "ok  " : "MISS", label, rep.cells.size(), spec.alpha, worst);
    return all;
  };
  ok &= check_cd({0.8, 0.1, false}, "two-sided");
  ok &= check_cd({0.8, 0.2, false}, "one-sided");

  auto check_dilution = [&](Method m, const char* label) {
    const SimReport rep = coverage_sim(grid, m, {0.8, 0.1, false});
    double lowest = 1.0;
    for (const SimCell& c : rep.cells)
      if (c.theta0 <= 0.5) lowest = std::min(lowest, c.estimate);
    const bool diluted = lowest < 0.65;
    note("%s %s dilution: smallest small-theta coverage %.4f (< 0.65)",
         diluted ? "ok  " : "MISS", label, lowest);
    return diluted;
  };
  ok &= check_dilution(Method::UP, "up");
  ok &= check_dilution(Method::RP, "rp");

  {
    ExperimentGrid zero{{0.0}, {1.0, 5.0, 20.0}, {2, 100}, 10000, 4002};
    const IntervalSpec closed{0.8, 0.1, true};
    const SimReport rep = coverage_sim(zero, Method::CD, closed);
    bool all = true;
    for (const SimCell& c : rep.cells)
      if (std::fabs(c.estimate - 0.9) > 3.0 * c.mc_se) {
        all = false;
        note("MISS closed sigma=%g k=%d: %.4f", c.sigma, c.k, c.estimate);
      }
    note("%s closed procedure at theta0=0 covers at alpha+beta = 0.9 (all cells, 3 SE)",
         all ? "ok  " : "MISS");
    ok &= all;
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 5
bool collision_averages() {
  ExperimentGrid grid{{1.0}, {20.0}, {2}, 100000, 5001};
  const SimReport rep = collision_confidence_sim(grid, 2.0);
  const double c = rep.cells[0].estimate;
  const double bel = rep.cells[1].estimate;
  const double g = rep.cells[2].estimate;
  const double belg = rep.cells[3].estimate;

  bool ok = true;
  ok &= within(c, 0.5, 0.01, "avg C(H0)");
  const bool bel_ok = std::fabs(bel - 0.223) <= 0.01;
  note("%s avg Bel(H0) = %.4f (target 0.223 +/- 0.01)", bel_ok ? "ok  " : "MISS", bel);
  if (!bel_ok) {
    note("     the consonant belief of [0,R] equals max(2 C(R;d) - 1, 0); at theta0=1,");
    note("     sigma=20 its exact mean is 0.25076 (quadrature) and it tends to 0.25 as");
    note("     sigma grows, so this statistic cannot land at 0.223; see decision notes");
  }
  ok &= bel_ok;
  ok &= at_most(g, 0.05, "avg G(H0)");
  const bool trend = belg <= g;
  note("%s avg Bel_G(H0) = %.4g <= avg G(H0) = %.4g (dilution trend)", trend ? "ok  " : "MISS",
       belg, g);
  ok &= trend;
  return ok;
}

// ---------------------------------------------------------------- criterion 6
bool false_confidence_bound() {
  const ModelConfig sat = ModelConfig::norm_mean(2, 1.0);
  const Proposition a = Proposition::upper_tail(0.0);  // (0, inf): false at theta0 = 0
  bool ok = true;
  for (double alpha : {0.05, 0.2, 0.5}) {
    const ProbeResult r = false_confidence_probe(0.0, a, alpha, Method::CD, sat, 100000, 6001);
    char label[64];
    std::snprintf(label, sizeof label, "P{C(A;D) >= %.2g}", 1.0 - alpha);
    ok &= at_most(r.estimate, alpha + 3.0 * r.mc_se, label);
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 7
bool null_belief_and_cb_failure() {
  const ModelConfig sat = ModelConfig::norm_mean(2, 1.0);
  const Proposition h0 = Proposition::interval(0.0, 2.0);
  const long n = 10000;
  bool ok = true;

  const std::vector<double> bels = belief_samples(2.0, h0, BeliefBase::CD, sat, n, 7001);
  long zeros = 0;
  for (double b : bels)
    if (b == 0.0) ++zeros;
  ok &= within(static_cast<double>(zeros) / n, 0.5, 0.015, "P{Bel(H0) = 0} at theta0 = R");

  for (double alpha : {0.05, 0.2, 0.4}) {
    long rejects = 0;
    for (double b : bels)
      if (b <= alpha) ++rejects;
    const double rate = static_cast<double>(rejects) / n;
    const double se = std::sqrt(rate * (1.0 - rate) / n);
    const bool pass = rate >= 0.5 - 3.0 * se;
    note("%s CB rejection rate at alpha = %.2g: %.4f (>= 0.5)", pass ? "ok  " : "MISS", alpha,
         rate);
    ok &= pass;
  }

  // open question, reported without gating: the Bel_G floor under sigma = 1
  {
    const std::vector<double> bg = belief_samples(2.0, h0, BeliefBase::UP, sat, n, 7002);
    long z = 0;
    for (double b : bg)
      if (b == 0.0) ++z;
    const double floor1 = static_cast<double>(z) / n;
    const bool match = std::fabs(floor1 - 0.847) <= 0.02;
    note("REPORT Bel_G floor at sigma=1: %.4f vs 0.847 +/- 0.02 -> %s (open question;"
         " not gating)",
         floor1, match ? "match" : "MISMATCH");
    if (!match) {
      const ModelConfig alt = ModelConfig::norm_mean(2, 1.3936);
      const std::vector<double> bg2 = belief_samples(2.0, h0, BeliefBase::UP, alt, n, 7003);
      long z2 = 0;
      for (double b : bg2)
        if (b == 0.0) ++z2;
      note("REPORT the floor reaches 0.847 near sigma = 1.394 (measured %.4f there);"
           " exact floor at sigma=1 is 0.7164",
           static_cast<double>(z2) / n);
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 8
bool point_null_size() {
  const ModelConfig sat = ModelConfig::norm_mean(2, 1.0);
  const Proposition point_null = Proposition::singleton(0.0);
  bool ok = true;
  for (double alpha : {0.01, 0.05, 0.1}) {
    const ProbeResult r = test_size_probe(point_null, Method::CD, alpha, 0.0, sat, 100000, 8001);
    char label[48];
    std::snprintf(label, sizeof label, "P{M(D) < %.2g}", alpha);
    ok &= within(r.estimate, alpha, 3.0 * r.mc_se, label);
  }
  bool zero_ok = true;
  for (long i = 0; i < 500; ++i) {
    Rng rng = Rng::for_replicate(8002, i);
    const double d = sample_d(1.0, sat, rng);
    const ReferencePosterior post(d, 1.0, 2);
    if (set_probability([&](double t) { return up_cdf(t, d, 1.0, 2); }, point_null) != 0.0 ||
        set_probability([&](double t) { return post.cdf(t); }, point_null) != 0.0)
      zero_ok = false;
  }
  note("%s UP and RP p-values for the point null are identically 0 (500 draws)",
       zero_ok ? "ok  " : "MISS");
  ok &= zero_ok;
  return ok;
}

// ---------------------------------------------------------------- criterion 9
bool gfd_up_equivalence() {
  const ModelConfig sat = ModelConfig::norm_mean(2, 1.0);
  const Observation obs = observe({2.0, 0.0}, sat);
  GfdSample s = gfd_sample(obs, sat, 1000000, 9001);
  const double sup = oracles::ks_statistic(std::move(s.values),
                                           [&](double t) { return up_cdf(t, 2.0, 1.0, 2); });
  return at_most(sup, 0.005, "sup |ecdf(GFD) - G|");
}

// --------------------------------------------------------------- criterion 10
bool oracle_equivalences() {
  bool ok = true;
  {
    double worst = 0.0;
    for (const ChiSqParams p : {ChiSqParams{2, 4.0}, ChiSqParams{5, 10.0}, ChiSqParams{100, 3.0}}) {
      const double span = p.df + p.ncp + 4.0 * std::sqrt(2.0 * (p.df + 2.0 * p.ncp));
      for (int i = 1; i <= 20; ++i) {
        const double x = span * i / 20.0;
        const double quad = oracles::integrate(
            [&](double t) { return noncentral_chisq_pdf(t, p); }, 0.0, x, 1e-11);
        worst = std::max(worst, std::fabs(noncentral_chisq_cdf(x, p) - quad));
      }
    }
    ok &= at_most(worst, 1e-8, "max |cdf - pdf quadrature| on 20-point grids");
  }
  {
    oracles::CiLevelOracle oracle(1.0, 2);
    const ModelConfig sat = ModelConfig::norm_mean(2, 1.0);
    double worst = 0.0;
    const double ds[] = {3.0, 2.0, 0.2, 1.0};
    const double alphas[] = {0.9, 0.9, 0.9, 0.6};
    for (int i = 0; i < 4; ++i) {
      const ObservedInterval iv = ci_observe(ds[i], {alphas[i], 0.05, false}, sat);
      const ConfidenceCurve curve(sat, ds[i]);
      worst = std::max(worst, std::fabs(ci_confidence(iv, curve) -
                                        oracle.max_alpha(ds[i], alphas[i], 0.05)));
    }
    ok &= at_most(worst, 1e-3, "max |ci_confidence - grid-search max alpha|");
  }
  {
    const ConfidenceCurve curve(ModelConfig::norm_mean(2, 1.0), 2.0);
    const double h = 1e-6;
    double worst = 0.0;
    for (double th : {0.5, 1.0, 3.0}) {
      const double fd = (curve(th + h) - curve(th - h)) / (2.0 * h);
      worst = std::max(worst, std::fabs(confidence_density(th, curve) - fd));
    }
    ok &= at_most(worst, 1e-5, "max |density - finite differences|");
  }
  {
    const Observation y1 = observe({1.0}, ModelConfig::curved_normal());
    ok &= within(curved_cd(1e7, y1, false), 0.8413, 1e-4, "curved-model limit 1 - Phi(-1)");
  }
  return ok;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool()> run;
};

const Criterion kCriteria[] = {
    {1, "golden numbers (thresholds, theta_U, point mass)", golden_numbers},
    {2, "collision assessment at d=1, R=2 (sigma = 1 and 100)", assessment_values},
    {3, "exact PIT: C(theta0; D) uniform at theta0 in {0,1,8}", exact_pit},
    {4, "coverage suite: CD exact, UP/RP dilution, closed at alpha+beta", coverage_suite},
    {5, "collision averages at theta0=1, sigma=20", collision_averages},
    {6, "false-confidence bound at theta0=0", false_confidence_bound},
    {7, "null belief and CB test failure", null_belief_and_cb_failure},
    {8, "point-null test size via the point mass", point_null_size},
    {9, "GFD/UP equivalence on 1e6 draws", gfd_up_equivalence},
    {10, "oracle equivalences (quadrature, grid search, finite differences)",
     oracle_equivalences},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    g_notes.clear();
    const bool ok = c.run();
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", c.id, c.title);
    for (const std::string& line : g_notes) std::printf("        %s\n", line.c_str());
    if (!ok) ++failures;
  }
  if (only == 0)
    std::printf("%d of %d criteria failed\n", failures,
                static_cast<int>(std::size(kCriteria)));
  return failures;
}
