#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "confdist/belief.hpp"
#include "confdist/confidence.hpp"
#include "confdist/intervals.hpp"
#include "confdist/model.hpp"
#include "confdist/posterior.hpp"

// Seeded Monte Carlo experiments: coverage curves, average CDFs, collision
// confidence averages, false-confidence probes, null-belief probes and test
// sizes. Replicate i always draws from Rng::for_replicate(seed, i) and chunk
// results are combined in fixed order, so reports are bit-identical for any
// worker count.

namespace confdist {

struct ExperimentGrid {
  std::vector<double> thetas;
  std::vector<double> sigmas;
  std::vector<int> ks{2};
  long n_reps = 10000;
  std::uint64_t seed = 1;

  static void validate(ExperimentGrid& g) {
    if (g.thetas.empty() || g.sigmas.empty() || g.ks.empty())
      throw std::invalid_argument("ExperimentGrid: grids must be non-empty");
    if (g.n_reps < 1) throw std::invalid_argument("ExperimentGrid: n_reps >= 1 required");
    for (double& s : g.sigmas) {
      if (s == 0.0) s = 1e-3;  // sigma = 0 is degenerate; figure axes that start at 0 use 1e-3
      if (!(s > 0.0)) throw std::invalid_argument("ExperimentGrid: sigma > 0 required");
    }
    for (double t : g.thetas)
      if (!(t >= 0.0)) throw std::invalid_argument("ExperimentGrid: theta >= 0 required");
    for (int k : g.ks)
      if (k < 1) throw std::invalid_argument("ExperimentGrid: k >= 1 required");
  }
};

struct SimCell {
  double theta0 = 0.0;
  double sigma = 1.0;
  int k = 2;
  std::string method;
  double x = std::numeric_limits<double>::quiet_NaN();  // secondary coordinate, if any
  double estimate = 0.0;
  double mc_se = 0.0;
  long n_reps = 0;
};

struct SimReport {
  std::string experiment_id;
  std::uint64_t seed = 0;
  std::vector<SimCell> cells;
};

struct ProbeResult {
  double estimate = 0.0;
  double mc_se = 0.0;
  long n_reps = 0;
};

enum class Method { CD, UP, RP, BelCD, BelUP };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::CD: return "cd";
    case Method::UP: return "up";
    case Method::RP: return "rp";
    case Method::BelCD: return "bel-cd";
    case Method::BelUP: return "bel-up";
  }
  return "?";
}

namespace detail {

inline constexpr long kChunk = 4096;

inline double proportion_se(double p, long n) { return std::sqrt(p * (1.0 - p) / n); }

// independent sub-stream per grid cell
inline std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t cell_index) {
  return Rng::for_replicate(seed, 0x5eedull ^ cell_index).next_u64();
}

// Deterministic chunked reduction over replicates [0, n): per-chunk
// accumulators filled serially, merged in chunk order.
template <typename Acc, typename PerRep, typename Merge>
Acc parallel_accumulate(long n, int threads, Acc zero, PerRep per_rep, Merge merge) {
  const long nchunks = (n + kChunk - 1) / kChunk;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (threads > nchunks) threads = static_cast<int>(nchunks);

  std::vector<Acc> parts(static_cast<std::size_t>(nchunks), zero);
  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      const long c = next.fetch_add(1);
      if (c >= nchunks) return;
      Acc acc = zero;
      const long lo = c * kChunk;
      const long hi = std::min(n, lo + kChunk);
      for (long i = lo; i < hi; ++i) per_rep(i, acc);
      parts[static_cast<std::size_t>(c)] = std::move(acc);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  Acc total = zero;
  for (Acc& p : parts) merge(total, p);
  return total;
}

// coverage indicator through the CDF of the method at theta0; equivalent to
// membership of theta0 in the realized interval, clamping included
inline bool covered_cd(double f, double theta0, const IntervalSpec& spec) {
  const double lo = 1.0 - spec.alpha - spec.beta;
  const double hi = 1.0 - spec.beta;
  if (f < lo) return false;
  if (spec.closed) return theta0 == 0.0 ? true : f <= hi;
  return f < hi;
}

inline bool covered_posterior(double f, const IntervalSpec& spec) {
  return f >= 1.0 - spec.alpha - spec.beta && f < 1.0 - spec.beta;
}

}  // namespace detail

// Empirical coverage of the CI procedure (CD) or of equal-tail posterior
// quantile intervals with the same [1-alpha-beta, 1-beta] level split (UP/RP).
inline SimReport coverage_sim(ExperimentGrid grid, Method method, const IntervalSpec& spec,
                              int threads = 0) {
  ExperimentGrid::validate(grid);
  IntervalSpec::validate(spec);
  if (method != Method::CD && method != Method::UP && method != Method::RP)
    throw std::invalid_argument("coverage_sim: method must be cd, up or rp");

  SimReport report;
  report.experiment_id = "coverage";
  report.seed = grid.seed;
  std::uint64_t cell_index = 0;
  for (int k : grid.ks) {
    for (double sigma : grid.sigmas) {
      for (double theta0 : grid.thetas) {
        const ModelConfig cfg = ModelConfig::norm_mean(k, sigma);
        const std::uint64_t cseed = detail::cell_seed(grid.seed, cell_index++);
        const double x_ncp = (theta0 / sigma) * (theta0 / sigma);
        const long hits = detail::parallel_accumulate(
            grid.n_reps, threads, long{0},
            [&](long i, long& acc) {
              Rng rng = Rng::for_replicate(cseed, static_cast<std::uint64_t>(i));
              const double d = sample_d(theta0, cfg, rng);
              const double x = (d / sigma) * (d / sigma);
              bool cov = false;
              switch (method) {
                case Method::CD: {
                  const double f = theta0 == 0.0 ? central_chisq_sf(x, k)
                                                 : noncentral_chisq_sf(x, {k, x_ncp});
                  cov = detail::covered_cd(f, theta0, spec);
                  break;
                }
                case Method::UP:
                  cov = detail::covered_posterior(up_cdf(theta0, d, sigma, k), spec);
                  break;
                case Method::RP:
                  cov = detail::covered_posterior(ReferencePosterior(d, sigma, k).cdf(theta0),
                                                  spec);
                  break;
                default: break;
              }
              if (cov) ++acc;
            },
            [](long& a, const long& b) { a += b; });
        SimCell cell;
        cell.theta0 = theta0;
        cell.sigma = sigma;
        cell.k = k;
        cell.method = to_string(method);
        cell.estimate = static_cast<double>(hits) / grid.n_reps;
        cell.mc_se = detail::proportion_se(cell.estimate, grid.n_reps);
        cell.n_reps = grid.n_reps;
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

// Pointwise averages of C(theta; D) and G(theta; D) over replicates, on the
// supplied evaluation grid.
inline SimReport average_cdf_sim(ExperimentGrid grid, const std::vector<double>& theta_eval,
                                 int threads = 0) {
  ExperimentGrid::validate(grid);
  if (theta_eval.empty()) throw std::invalid_argument("average_cdf_sim: empty evaluation grid");

  struct Acc {
    std::vector<double> c_sum, c_sq, g_sum, g_sq;
  };
  const std::size_t m = theta_eval.size();

  SimReport report;
  report.experiment_id = "average-cdf";
  report.seed = grid.seed;
  std::uint64_t cell_index = 0;
  for (int k : grid.ks) {
    for (double sigma : grid.sigmas) {
      for (double theta0 : grid.thetas) {
        const ModelConfig cfg = ModelConfig::norm_mean(k, sigma);
        const std::uint64_t cseed = detail::cell_seed(grid.seed, cell_index++);
        Acc zero;
        zero.c_sum.assign(m, 0.0);
        zero.c_sq.assign(m, 0.0);
        zero.g_sum.assign(m, 0.0);
        zero.g_sq.assign(m, 0.0);
        const Acc total = detail::parallel_accumulate(
            grid.n_reps, threads, zero,
            [&](long i, Acc& acc) {
              Rng rng = Rng::for_replicate(cseed, static_cast<std::uint64_t>(i));
              const double d = sample_d(theta0, cfg, rng);
              const ConfidenceCurve curve(cfg, d);
              for (std::size_t j = 0; j < m; ++j) {
                const double c = curve(theta_eval[j]);
                const double g = up_cdf(theta_eval[j], d, sigma, k);
                acc.c_sum[j] += c;
                acc.c_sq[j] += c * c;
                acc.g_sum[j] += g;
                acc.g_sq[j] += g * g;
              }
            },
            [m](Acc& a, const Acc& b) {
              for (std::size_t j = 0; j < m; ++j) {
                a.c_sum[j] += b.c_sum[j];
                a.c_sq[j] += b.c_sq[j];
                a.g_sum[j] += b.g_sum[j];
                a.g_sq[j] += b.g_sq[j];
              }
            });
        const double n = static_cast<double>(grid.n_reps);
        auto push = [&](const char* method, const std::vector<double>& sum,
                        const std::vector<double>& sq) {
          for (std::size_t j = 0; j < m; ++j) {
            SimCell cell;
            cell.theta0 = theta0;
            cell.sigma = sigma;
            cell.k = k;
            cell.method = method;
            cell.x = theta_eval[j];
            cell.estimate = sum[j] / n;
            const double var =
                grid.n_reps > 1 ? std::max(0.0, (sq[j] - sum[j] * sum[j] / n) / (n - 1.0)) : 0.0;
            cell.mc_se = std::sqrt(var / n);
            cell.n_reps = grid.n_reps;
            report.cells.push_back(cell);
          }
        };
        push("cd", total.c_sum, total.c_sq);
        push("up", total.g_sum, total.g_sq);
      }
    }
  }
  return report;
}

// Average C(H0), Bel(H0), G(H0) and Bel_G(H0) for the collision proposition
// H0 = [0, R], per grid cell.
inline SimReport collision_confidence_sim(ExperimentGrid grid, double R, int threads = 0) {
  ExperimentGrid::validate(grid);
  if (!(R > 0.0)) throw std::invalid_argument("collision_confidence_sim: R > 0 required");

  struct Acc {
    double sum[4] = {0, 0, 0, 0};
    double sq[4] = {0, 0, 0, 0};
  };
  static const char* names[4] = {"C", "Bel", "G", "BelG"};

  SimReport report;
  report.experiment_id = "collision";
  report.seed = grid.seed;
  std::uint64_t cell_index = 0;
  for (int k : grid.ks) {
    for (double sigma : grid.sigmas) {
      for (double theta0 : grid.thetas) {
        const ModelConfig cfg = ModelConfig::norm_mean(k, sigma, R);
        const std::uint64_t cseed = detail::cell_seed(grid.seed, cell_index++);
        const double nu_R = (R / sigma) * (R / sigma);
        const Acc total = detail::parallel_accumulate(
            grid.n_reps, threads, Acc{},
            [&](long i, Acc& acc) {
              Rng rng = Rng::for_replicate(cseed, static_cast<std::uint64_t>(i));
              const double d = sample_d(theta0, cfg, rng);
              const double x = (d / sigma) * (d / sigma);
              const double c = noncentral_chisq_sf(x, {k, nu_R});  // C([0,R]; d)
              const double g = noncentral_chisq_cdf(nu_R, {k, x});  // G([0,R]; d)
              const double v[4] = {c, std::max(2.0 * c - 1.0, 0.0), g,
                                   std::max(2.0 * g - 1.0, 0.0)};
              for (int j = 0; j < 4; ++j) {
                acc.sum[j] += v[j];
                acc.sq[j] += v[j] * v[j];
              }
            },
            [](Acc& a, const Acc& b) {
              for (int j = 0; j < 4; ++j) {
                a.sum[j] += b.sum[j];
                a.sq[j] += b.sq[j];
              }
            });
        const double n = static_cast<double>(grid.n_reps);
        for (int j = 0; j < 4; ++j) {
          SimCell cell;
          cell.theta0 = theta0;
          cell.sigma = sigma;
          cell.k = k;
          cell.method = names[j];
          cell.x = R;
          cell.estimate = total.sum[j] / n;
          const double var =
              grid.n_reps > 1
                  ? std::max(0.0, (total.sq[j] - total.sum[j] * total.sum[j] / n) / (n - 1.0))
                  : 0.0;
          cell.mc_se = std::sqrt(var / n);
          cell.n_reps = grid.n_reps;
          report.cells.push_back(cell);
        }
      }
    }
  }
  return report;
}

namespace detail {

// the method's confidence / probability / belief assigned to A given d
inline double assign_to_set(Method method, const Proposition& a, double d,
                            const ModelConfig& cfg) {
  switch (method) {
    case Method::CD:
      return confidence_of_set(a, ConfidenceCurve(cfg, d));
    case Method::UP:
      return set_probability([&](double t) { return up_cdf(t, d, cfg.sigma, cfg.k); }, a);
    case Method::RP: {
      const ReferencePosterior post(d, cfg.sigma, cfg.k);
      return set_probability([&](double t) { return post.cdf(t); }, a);
    }
    case Method::BelCD:
      return BeliefCurve::from_cd(ConfidenceCurve(cfg, d)).belief(a);
    case Method::BelUP:
      return BeliefCurve::from_up(d, cfg.sigma, cfg.k).belief(a);
  }
  return 0.0;
}

}  // namespace detail

// MC estimate of P_theta0{ method-confidence(A; D) >= 1 - alpha }.
inline ProbeResult false_confidence_probe(double theta0, const Proposition& a, double alpha,
                                          Method method, const ModelConfig& cfg, long n_reps,
                                          std::uint64_t seed, int threads = 0) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("false_confidence_probe: alpha in (0,1) required");
  if (n_reps < 1) throw std::invalid_argument("false_confidence_probe: n_reps >= 1 required");
  const long hits = detail::parallel_accumulate(
      n_reps, threads, long{0},
      [&](long i, long& acc) {
        Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(i));
        const double d = sample_d(theta0, cfg, rng);
        if (detail::assign_to_set(method, a, d, cfg) >= 1.0 - alpha) ++acc;
      },
      [](long& x, const long& y) { x += y; });
  const double p = static_cast<double>(hits) / n_reps;
  return {p, detail::proportion_se(p, n_reps), n_reps};
}

// Per-replicate beliefs Bel(A; D) under theta0; deterministic in (seed, i).
inline std::vector<double> belief_samples(double theta0, const Proposition& a, BeliefBase base,
                                          const ModelConfig& cfg, long n_reps,
                                          std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(n_reps));
  for (long i = 0; i < n_reps; ++i) {
    Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(i));
    const double d = sample_d(theta0, cfg, rng);
    const BeliefCurve bc = base == BeliefBase::CD
                               ? BeliefCurve::from_cd(ConfidenceCurve(cfg, d))
                               : BeliefCurve::from_up(d, cfg.sigma, cfg.k);
    out[static_cast<std::size_t>(i)] = bc.belief(a);
  }
  return out;
}

// MC estimate of P_theta0{ Bel((theta0-eps, theta0+eps); D) = 0 }; the event
// coincides with the CB median falling outside the interval.
inline ProbeResult null_belief_probe(double theta0, double epsilon, BeliefBase base,
                                     const ModelConfig& cfg, long n_reps, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("null_belief_probe: epsilon > 0 required");
  if (n_reps < 1) throw std::invalid_argument("null_belief_probe: n_reps >= 1 required");
  // the open interval around theta0, clipped to Theta; clipping through zero
  // keeps the boundary point inside
  const bool clipped = theta0 - epsilon < 0.0;
  const double lo = clipped ? 0.0 : theta0 - epsilon;
  const Proposition interval = Proposition::interval(lo, theta0 + epsilon, clipped, false);
  const std::vector<double> bels = belief_samples(theta0, interval, base, cfg, n_reps, seed);
  long zeros = 0;
  for (double b : bels)
    if (b == 0.0) ++zeros;
  const double p = static_cast<double>(zeros) / n_reps;
  return {p, detail::proportion_se(p, n_reps), n_reps};
}

// MC rejection rate of the test with p-value = method's assignment to H0,
// rejecting when p <= alpha.
inline ProbeResult test_size_probe(const Proposition& h0, Method method, double alpha,
                                   double theta0, const ModelConfig& cfg, long n_reps,
                                   std::uint64_t seed, int threads = 0) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("test_size_probe: alpha in (0,1) required");
  if (n_reps < 1) throw std::invalid_argument("test_size_probe: n_reps >= 1 required");
  const long hits = detail::parallel_accumulate(
      n_reps, threads, long{0},
      [&](long i, long& acc) {
        Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(i));
        const double d = sample_d(theta0, cfg, rng);
        if (detail::assign_to_set(method, h0, d, cfg) <= alpha) ++acc;
      },
      [](long& x, const long& y) { x += y; });
  const double p = static_cast<double>(hits) / n_reps;
  return {p, detail::proportion_se(p, n_reps), n_reps};
}

}  // namespace confdist
