#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "confdist/random.hpp"

// Problem definitions mapping raw observations to the scalar statistic
// D = ||y|| and the parameter space Theta = [0, inf).

namespace confdist {

enum class ModelKind {
  NormMean,      // Y_i ~ N(mu_i, sigma^2), i = 1..k; theta = ||mu||, D = ||Y||
  CurvedNormal,  // Y ~ N(theta, theta^2), theta > 0; D = |Y|
};

struct ModelConfig {
  ModelKind kind = ModelKind::NormMean;
  int k = 2;                               // dimension (NormMean only)
  double sigma = 1.0;                      // known noise scale (NormMean only)
  std::optional<double> combined_radius{};  // R, for collision propositions [0, R]

  static ModelConfig norm_mean(int k, double sigma, std::optional<double> R = std::nullopt) {
    ModelConfig cfg;
    cfg.kind = ModelKind::NormMean;
    cfg.k = k;
    cfg.sigma = sigma;
    cfg.combined_radius = R;
    validate(cfg);
    return cfg;
  }

  static ModelConfig curved_normal() {
    ModelConfig cfg;
    cfg.kind = ModelKind::CurvedNormal;
    cfg.k = 1;
    cfg.sigma = 1.0;  // unused; the curved model's scale is theta itself
    return cfg;
  }

  static void validate(const ModelConfig& cfg) {
    if (cfg.kind == ModelKind::NormMean) {
      if (cfg.k < 1) throw std::invalid_argument("ModelConfig: k >= 1 required");
      if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma))
        throw std::invalid_argument("ModelConfig: sigma > 0 required");
    }
    if (cfg.combined_radius && !(*cfg.combined_radius >= 0.0))
      throw std::invalid_argument("ModelConfig: combined radius R >= 0 required");
  }
};

struct Observation {
  std::vector<double> y;  // raw measurements; empty when D was sampled directly
  double d = 0.0;         // Euclidean norm of y
};

inline Observation observe(std::vector<double> y, const ModelConfig& cfg) {
  ModelConfig::validate(cfg);
  const std::size_t want = cfg.kind == ModelKind::NormMean ? static_cast<std::size_t>(cfg.k) : 1u;
  if (y.size() != want)
    throw std::invalid_argument("observe: expected " + std::to_string(want) +
                                " measurements, got " + std::to_string(y.size()));
  double ss = 0.0;
  for (double v : y) ss += v * v;
  Observation obs;
  obs.d = std::sqrt(ss);
  obs.y = std::move(y);
  return obs;
}

// One draw of D at the given theta. NormMean draws D directly through a single
// noncentral chi-square variate (distributionally identical to sampling k
// normals and taking the norm; the equivalence is covered by a test).
inline double sample_d(double theta, const ModelConfig& cfg, Rng& rng) {
  if (!(theta >= 0.0)) throw std::invalid_argument("sample_d: theta >= 0 required");
  if (cfg.kind == ModelKind::NormMean) {
    const double nu = (theta / cfg.sigma) * (theta / cfg.sigma);
    return cfg.sigma * std::sqrt(rng.noncentral_chisq(cfg.k, nu));
  }
  if (theta == 0.0)
    throw std::invalid_argument("sample_d: the curved model is degenerate at theta = 0");
  return std::fabs(theta + theta * rng.normal());
}

inline std::vector<Observation> sample_data(double theta, const ModelConfig& cfg, long n,
                                            std::uint64_t seed) {
  ModelConfig::validate(cfg);
  if (n < 1) throw std::invalid_argument("sample_data: n >= 1 required");
  if (!(theta >= 0.0)) throw std::invalid_argument("sample_data: theta >= 0 required");
  if (cfg.kind == ModelKind::CurvedNormal && theta == 0.0)
    throw std::invalid_argument("sample_data: the curved model is degenerate at theta = 0");

  std::vector<Observation> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(i));
    Observation& obs = out[static_cast<std::size_t>(i)];
    if (cfg.kind == ModelKind::NormMean) {
      obs.d = sample_d(theta, cfg, rng);
    } else {
      const double y = theta + theta * rng.normal();
      obs.y = {y};
      obs.d = std::fabs(y);
    }
  }
  return out;
}

}  // namespace confdist
