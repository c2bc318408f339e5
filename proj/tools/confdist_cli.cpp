// Command-line surface: evaluate confidence curves, intervals, posteriors and
// beliefs, run the Monte Carlo experiments, and emit figure-ready CSV/JSON.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "confdist/confdist.hpp"
#include "table_io.hpp"

namespace {

using namespace confdist;
using cli::Table;
using cli::Value;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: '" + csv + "'");
  return out;
}

// "lo:hi:n" -> n equally spaced points
std::vector<double> parse_grid(const std::string& s) {
  double lo = 0, hi = 0;
  long n = 0;
  char c1 = 0, c2 = 0;
  std::stringstream ss(s);
  if (!(ss >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2 || hi < lo)
    throw std::invalid_argument("grid must be lo:hi:n with n >= 2, got '" + s + "'");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

Method parse_method(const std::string& s) {
  if (s == "cd") return Method::CD;
  if (s == "up") return Method::UP;
  if (s == "rp") return Method::RP;
  if (s == "bel-cd") return Method::BelCD;
  if (s == "bel-up") return Method::BelUP;
  throw std::invalid_argument("unknown method '" + s + "'");
}

struct OutputOptions {
  std::string path;
  std::string format = "csv";
};

void emit(const Table& t, const OutputOptions& out, const std::string& default_name) {
  std::string path = out.path;
  if (path.empty()) {
    if (const char* dir = std::getenv("CONFDIST_OUT_DIR"); dir && *dir && !default_name.empty())
      path = std::string(dir) + "/" + default_name + "." + out.format;
  }
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    os = &file;
  }
  if (out.format == "json")
    cli::write_json(*os, t);
  else
    cli::write_csv(*os, t);
  if (!path.empty()) std::cerr << "wrote " << path << "\n";
}

Value upper_value(const std::optional<double>& u) {
  return u ? Value(*u) : Value(std::numeric_limits<double>::infinity());
}

Table run_cd(double d, double sigma, int k, const std::vector<double>& thetas) {
  const ConfidenceCurve curve(ModelConfig::norm_mean(k, sigma), d);
  Table t;
  t.header = {"d", "sigma", "k", "theta", "C", "point_mass"};
  for (double th : thetas)
    t.rows.push_back({d, sigma, double(k), th, curve(th), curve.point_mass()});
  return t;
}

Table run_ci(double d, const IntervalSpec& spec, double sigma, int k) {
  const ModelConfig cfg = ModelConfig::norm_mean(k, sigma);
  const ObservedInterval iv = ci_observe(d, spec, cfg);
  const ConfidenceCurve curve(cfg, d);
  Table t;
  t.header = {"d",    "alpha", "beta",  "closed", "sigma",     "k",
              "kind", "lower", "upper", "confidence"};
  t.rows.push_back({d, spec.alpha, spec.beta, spec.closed ? "true" : "false", sigma, double(k),
                    to_string(iv.kind), iv.lower, upper_value(iv.upper),
                    ci_confidence(iv, curve)});
  return t;
}

Table run_posterior(const std::string& method, double d, double sigma, int k,
                    const std::vector<double>& thetas, const std::vector<double>& quantiles) {
  Table t;
  t.header = {"method", "d", "sigma", "k", "theta", "cdf", "density"};
  std::function<double(double)> cdf, dens;
  std::function<double(double)> quant;
  if (method == "up") {
    cdf = [=](double th) { return up_cdf(th, d, sigma, k); };
    dens = [=](double th) { return up_density(th, d, sigma, k); };
    quant = [=](double p) { return up_quantile(p, d, sigma, k); };
  } else if (method == "rp") {
    auto post = std::make_shared<ReferencePosterior>(d, sigma, k);
    cdf = [post](double th) { return post->cdf(th); };
    dens = [post](double th) { return post->density(th); };
    quant = [post](double p) { return post->quantile(p); };
  } else {
    throw std::invalid_argument("posterior method must be up or rp");
  }
  for (double th : thetas)
    t.rows.push_back({method, d, sigma, double(k), th, cdf(th), dens(th)});
  for (double p : quantiles) {
    const double th = quant(p);
    t.rows.push_back({method, d, sigma, double(k), th, p, dens(th)});
  }
  return t;
}

Table run_belief(const std::string& base, double d, double sigma, int k, const Proposition& a,
                 std::optional<double> alpha) {
  const BeliefCurve bc = base == "cd"
                             ? BeliefCurve::from_cd(ConfidenceCurve(ModelConfig::norm_mean(k, sigma), d))
                             : BeliefCurve::from_up(d, sigma, k);
  Table t;
  t.header = {"base",  "d",          "sigma", "k",     "lower",  "upper", "complement",
              "median", "belief", "plausibility", "alpha", "reject"};
  const double bel = bc.belief(a);
  const double pl = bc.plaus_of_set(a);
  std::vector<Value> row{base,
                         d,
                         sigma,
                         double(k),
                         a.lower(),
                         upper_value(a.upper()),
                         a.complemented() ? "true" : "false",
                         bc.median(),
                         bel,
                         pl};
  if (alpha) {
    row.push_back(*alpha);
    row.push_back(bel <= *alpha ? "reject" : "accept");
  } else {
    row.push_back("");
    row.push_back("");
  }
  t.rows.push_back(std::move(row));
  return t;
}

Table run_assess(double d, double R, double sigma, int k) {
  const ModelConfig cfg = ModelConfig::norm_mean(k, sigma, R);
  const ConfidenceCurve curve(cfg, d);
  const Proposition h0 = Proposition::interval(0.0, R);
  Table t;
  t.header = {"d", "sigma", "k", "R", "C", "G", "RP", "Bel", "BelG"};
  t.rows.push_back({d, sigma, double(k), R, confidence_of_set(h0, curve),
                    set_probability([&](double th) { return up_cdf(th, d, sigma, k); }, h0),
                    rp_posterior(R, d, sigma, k),
                    BeliefCurve::from_cd(curve).belief(h0),
                    BeliefCurve::from_up(d, sigma, k).belief(h0)});
  return t;
}

Table figure_ci(double sigma, int k) {
  const double beta = 0.05;
  Table t;
  t.header = {"figure", "row_type", "alpha", "beta", "d", "kind", "lower", "upper"};
  const ModelConfig cfg = ModelConfig::norm_mean(k, sigma);
  for (double alpha : {0.95, 0.9, 0.6}) {
    const IntervalSpec spec{alpha, beta, false};
    for (int i = 1; i <= 200; ++i) {
      const double d = 0.02 * i;
      const ObservedInterval iv = ci_observe(d, spec, cfg);
      t.rows.push_back({"ci", "curve", alpha, beta, d, to_string(iv.kind), iv.lower,
                        upper_value(iv.upper)});
    }
    if (1.0 - alpha - beta > 1e-9) {
      const double onset = detail::central_threshold(1.0 - alpha - beta, sigma, k);
      t.rows.push_back({"ci", "two-sided-onset", alpha, beta, onset, "threshold", 0.0, 0.0});
    }
    const double empty_onset = detail::central_threshold(1.0 - beta, sigma, k);
    t.rows.push_back({"ci", "empty-onset", alpha, beta, empty_onset, "threshold", 0.0, 0.0});
  }
  return t;
}

Table figure_cumulatives(long reps, std::uint64_t seed, int threads) {
  ExperimentGrid grid;
  grid.thetas = {1.0, 8.0};
  grid.sigmas = {0.1, 1.0, 5.0, 20.0};
  grid.ks = {2};
  grid.n_reps = reps > 0 ? reps : 10000;
  grid.seed = seed;
  return cli::average_cdf_table(average_cdf_sim(grid, parse_grid("0:25:201"), threads));
}

Table figure_coverage(long reps, std::uint64_t seed, int threads) {
  ExperimentGrid grid;
  grid.thetas = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  grid.sigmas = {1.0, 5.0, 20.0};
  grid.ks = {2, 100};
  grid.n_reps = reps > 0 ? reps : 10000;
  grid.seed = seed;
  const IntervalSpec two_sided{0.8, 0.1, false};
  const IntervalSpec one_sided{0.8, 0.2, false};  // beta = 1 - alpha: [0, theta_U)
  Table t = cli::coverage_table(coverage_sim(grid, Method::CD, two_sided, threads), two_sided);
  t.append(cli::coverage_table(coverage_sim(grid, Method::CD, one_sided, threads), one_sided));
  t.append(cli::coverage_table(coverage_sim(grid, Method::UP, two_sided, threads), two_sided));
  t.append(cli::coverage_table(coverage_sim(grid, Method::RP, two_sided, threads), two_sided));
  return t;
}

Table figure_collision(long reps, std::uint64_t seed, int threads) {
  ExperimentGrid grid;
  grid.thetas = {1.0, 8.0};
  grid.sigmas = {0.1, 0.25};
  for (int i = 1; i <= 40; ++i) grid.sigmas.push_back(0.5 * i);
  grid.ks = {2};
  grid.n_reps = reps > 0 ? reps : 100000;
  grid.seed = seed;
  return cli::collision_table(collision_confidence_sim(grid, 2.0, threads));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confidence-distribution inference for the norm of a Gaussian mean"};
  app.require_subcommand(1);

  OutputOptions out;
  std::uint64_t seed = 1;
  int threads = 0;
  double d = 0.0, sigma = 1.0, R = 2.0;
  int k = 2;
  app.add_option("--out", out.path, "output file (default: stdout)")->capture_default_str();
  app.add_option("--format", out.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
  app.fallthrough();

  std::function<Table()> action;
  std::string output_stem;  // default file name under CONFDIST_OUT_DIR

  // cd
  {
    auto* cmd = app.add_subcommand("cd", "evaluate the confidence distribution C(theta; d)");
    auto th = std::make_shared<std::vector<double>>();
    auto grid = std::make_shared<std::string>();
    cmd->add_option("--d", d, "observed d")->required();
    cmd->add_option("--sigma", sigma, "known noise scale");
    cmd->add_option("--k", k, "dimension");
    cmd->add_option("--theta", *th, "evaluation points");
    cmd->add_option("--theta-grid", *grid, "lo:hi:n evaluation grid");
    cmd->callback([&, th, grid] {
      std::vector<double> pts = *th;
      if (!grid->empty()) {
        auto g = parse_grid(*grid);
        pts.insert(pts.end(), g.begin(), g.end());
      }
      if (pts.empty()) pts = {0.0};
      action = [=] { return run_cd(d, sigma, k, pts); };
    });
  }
  // ci
  {
    auto* cmd = app.add_subcommand("ci", "observed confidence interval and its CD confidence");
    auto spec = std::make_shared<IntervalSpec>();
    cmd->add_option("--d", d, "observed d")->required();
    cmd->add_option("--alpha", spec->alpha, "confidence level")->required();
    cmd->add_option("--beta", spec->beta, "upper-tail allocation");
    cmd->add_flag("--closed", spec->closed, "closed procedure [theta_L, theta_U]");
    cmd->add_option("--sigma", sigma, "known noise scale");
    cmd->add_option("--k", k, "dimension");
    cmd->callback([&, spec] { action = [=] { return run_ci(d, *spec, sigma, k); }; });
  }
  // posterior
  {
    auto* cmd = app.add_subcommand("posterior", "uniform-prior or reference posterior");
    auto method = std::make_shared<std::string>("up");
    auto th = std::make_shared<std::vector<double>>();
    auto qs = std::make_shared<std::vector<double>>();
    auto grid = std::make_shared<std::string>();
    cmd->add_option("--method", *method, "up or rp")->check(CLI::IsMember({"up", "rp"}));
    cmd->add_option("--d", d, "observed d")->required();
    cmd->add_option("--sigma", sigma, "known noise scale");
    cmd->add_option("--k", k, "dimension");
    cmd->add_option("--theta", *th, "evaluation points");
    cmd->add_option("--theta-grid", *grid, "lo:hi:n evaluation grid");
    cmd->add_option("--quantile", *qs, "posterior quantile levels");
    cmd->callback([&, method, th, qs, grid] {
      std::vector<double> pts = *th;
      if (!grid->empty()) {
        auto g = parse_grid(*grid);
        pts.insert(pts.end(), g.begin(), g.end());
      }
      if (pts.empty() && qs->empty()) pts = {1.0};
      action = [=] { return run_posterior(*method, d, sigma, k, pts, *qs); };
    });
  }
  // belief
  {
    auto* cmd = app.add_subcommand("belief", "consonant belief of a proposition");
    auto base = std::make_shared<std::string>("cd");
    auto lower = std::make_shared<double>(0.0);
    auto upper = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    auto open_lower = std::make_shared<bool>(false);
    auto open_upper = std::make_shared<bool>(false);
    auto complement = std::make_shared<bool>(false);
    auto alpha = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    cmd->add_option("--base", *base, "cd or up")->check(CLI::IsMember({"cd", "up"}));
    cmd->add_option("--d", d, "observed d")->required();
    cmd->add_option("--sigma", sigma, "known noise scale");
    cmd->add_option("--k", k, "dimension");
    cmd->add_option("--lower", *lower, "interval lower end");
    cmd->add_option("--upper", *upper, "interval upper end (omit: unbounded)");
    cmd->add_flag("--open-lower", *open_lower, "open lower end");
    cmd->add_flag("--open-upper", *open_upper, "open upper end");
    cmd->add_flag("--complement", *complement, "use the complement of the interval");
    cmd->add_option("--alpha", *alpha, "test level: reject when Bel <= alpha");
    cmd->callback([&, base, lower, upper, open_lower, open_upper, complement, alpha] {
      action = [=] {
        std::optional<double> hi;
        if (!std::isnan(*upper)) hi = *upper;
        Proposition a = Proposition::interval(*lower, hi, !*open_lower, !*open_upper);
        if (*complement) a = a.complement();
        std::optional<double> lvl;
        if (!std::isnan(*alpha)) lvl = *alpha;
        return run_belief(*base, d, sigma, k, a, lvl);
      };
    });
  }
  // assess
  {
    auto* cmd = app.add_subcommand("assess", "collision assessment: C, G, RP, Bel, BelG of [0,R]");
    cmd->add_option("--d", d, "observed d")->required();
    cmd->add_option("--R", R, "combined radius")->required();
    cmd->add_option("--sigma", sigma, "known noise scale");
    cmd->add_option("--k", k, "dimension");
    cmd->callback([&] { action = [=] { return run_assess(d, R, sigma, k); }; });
  }
  // sim
  {
    auto* cmd = app.add_subcommand("sim", "run a Monte Carlo experiment");
    auto experiment = std::make_shared<std::string>();
    auto thetas = std::make_shared<std::string>("0,0.5,1,2,4,8");
    auto sigmas = std::make_shared<std::string>("1");
    auto ks = std::make_shared<std::string>("2");
    auto reps = std::make_shared<long>(10000);
    auto method = std::make_shared<std::string>("cd");
    auto spec = std::make_shared<IntervalSpec>(IntervalSpec{0.8, 0.1, false});
    auto evalgrid = std::make_shared<std::string>("0:25:201");
    auto theta0 = std::make_shared<double>(1.0);
    auto alpha = std::make_shared<double>(0.05);
    auto epsilon = std::make_shared<double>(0.1);
    auto lower = std::make_shared<double>(0.0);
    auto upper = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    auto complement = std::make_shared<bool>(false);
    cmd->add_option("--experiment", *experiment,
                    "coverage | avg-cdf | collision | false-confidence | null-belief | test-size")
        ->required()
        ->check(CLI::IsMember({"coverage", "avg-cdf", "collision", "false-confidence",
                               "null-belief", "test-size"}));
    cmd->add_option("--thetas", *thetas, "true theta grid (comma separated)");
    cmd->add_option("--sigmas", *sigmas, "sigma grid (comma separated)");
    cmd->add_option("--ks", *ks, "dimension grid (comma separated)");
    cmd->add_option("--reps", *reps, "replicates per cell");
    cmd->add_option("--method", *method, "cd | up | rp | bel-cd | bel-up");
    cmd->add_option("--alpha", spec->alpha, "level for coverage intervals");
    cmd->add_option("--beta", spec->beta, "upper-tail allocation");
    cmd->add_flag("--closed", spec->closed, "closed CI procedure");
    cmd->add_option("--eval-grid", *evalgrid, "avg-cdf evaluation grid lo:hi:n");
    cmd->add_option("--theta0", *theta0, "true theta for probes");
    cmd->add_option("--level", *alpha, "alpha for probes");
    cmd->add_option("--epsilon", *epsilon, "half-width for null-belief probes");
    cmd->add_option("--R", R, "combined radius / collision threshold");
    cmd->add_option("--lower", *lower, "proposition lower end");
    cmd->add_option("--upper", *upper, "proposition upper end (omit: unbounded)");
    cmd->add_flag("--complement", *complement, "use the complement of the proposition");
    cmd->callback([&, experiment, thetas, sigmas, ks, reps, method, spec, evalgrid, theta0,
                   alpha, epsilon, lower, upper, complement] {
      output_stem = "sim-" + *experiment;
      action = [=, &out]() -> Table {
        ExperimentGrid grid;
        grid.thetas = parse_list(*thetas);
        grid.sigmas = parse_list(*sigmas);
        grid.ks = parse_int_list(*ks);
        grid.n_reps = *reps;
        grid.seed = seed;
        const Method m = parse_method(*method);
        if (*experiment == "coverage")
          return cli::coverage_table(coverage_sim(grid, m, *spec, threads), *spec);
        if (*experiment == "avg-cdf")
          return cli::average_cdf_table(average_cdf_sim(grid, parse_grid(*evalgrid), threads));
        if (*experiment == "collision")
          return cli::collision_table(collision_confidence_sim(grid, R, threads));

        // probes run on a single (sigma, k) cell
        const ModelConfig cfg = ModelConfig::norm_mean(grid.ks.front(), grid.sigmas.front());
        std::optional<double> hi;
        if (!std::isnan(*upper)) hi = *upper;
        Proposition a = Proposition::interval(*lower, hi);
        if (*complement) a = a.complement();
        if (*experiment == "false-confidence") {
          const ProbeResult r =
              false_confidence_probe(*theta0, a, *alpha, m, cfg, *reps, seed, threads);
          return cli::probe_table("false-confidence", *method, cfg.k, cfg.sigma, *theta0, *alpha,
                                  r, seed);
        }
        if (*experiment == "null-belief") {
          const BeliefBase base = (m == Method::UP || m == Method::BelUP) ? BeliefBase::UP
                                                                          : BeliefBase::CD;
          const ProbeResult r = null_belief_probe(*theta0, *epsilon, base, cfg, *reps, seed);
          return cli::probe_table("null-belief", *method, cfg.k, cfg.sigma, *theta0, *epsilon, r,
                                  seed);
        }
        const ProbeResult r = test_size_probe(a, m, *alpha, *theta0, cfg, *reps, seed, threads);
        return cli::probe_table("test-size", *method, cfg.k, cfg.sigma, *theta0, *alpha, r, seed);
      };
    });
  }
  // figures
  {
    auto* cmd = app.add_subcommand("figures", "emit the datasets behind the standard figures");
    auto name = std::make_shared<std::string>();
    auto reps = std::make_shared<long>(0);
    cmd->add_option("--name", *name, "ci | cumulatives | coverage | collision")
        ->required()
        ->check(CLI::IsMember({"ci", "cumulatives", "coverage", "collision"}));
    cmd->add_option("--reps", *reps, "replicates per cell (0 = figure default)");
    cmd->callback([&, name, reps] {
      output_stem = "figure-" + *name;
      action = [=]() -> Table {
        if (*name == "ci") return figure_ci(1.0, 2);
        if (*name == "cumulatives") return figure_cumulatives(*reps, seed, threads);
        if (*name == "coverage") return figure_coverage(*reps, seed, threads);
        return figure_collision(*reps, seed, threads);
      };
    });
  }

  try {
    app.parse(argc, argv);
    if (output_stem.empty())
      for (const auto* sub : app.get_subcommands()) output_stem = sub->get_name();
    emit(action(), out, output_stem);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
