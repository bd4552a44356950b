#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/diffusion.hpp"
#include "hawkes/empirical.hpp"
#include "hawkes/io.hpp"
#include "hawkes/lob.hpp"
#include "hawkes/markov.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/process.hpp"
#include "hawkes/rng.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;

struct ModelFlags {
  double lambda = 1.0;
  double alpha = 0.0;
  double beta = 1.0;
  std::string kernel = "exp";
  double pl_k = 1.0, pl_c = 1.0, pl_p = 2.5;
  std::string link = "identity";
  double ceiling = 0.0;
  double delta = 0.005;
  std::vector<double> p{0.5, 0.5};  // p_dd, p_uu
  std::string model_path;
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--lambda", m.lambda, "baseline rate (events/s)");
  cmd->add_option("--alpha", m.alpha, "exponential kernel jump");
  cmd->add_option("--beta", m.beta, "exponential kernel decay rate");
  cmd->add_option("--kernel", m.kernel, "kernel family: exp|powerlaw|null")
      ->check(CLI::IsMember({"exp", "powerlaw", "null"}));
  cmd->add_option("--pl-k", m.pl_k, "power-law amplitude");
  cmd->add_option("--pl-c", m.pl_c, "power-law offset (s)");
  cmd->add_option("--pl-p", m.pl_p, "power-law exponent");
  cmd->add_option("--link", m.link, "intensity link: identity|indicator|capped")
      ->check(CLI::IsMember({"identity", "indicator", "capped"}));
  cmd->add_option("--ceiling", m.ceiling, "capped link ceiling");
  cmd->add_option("--delta", m.delta, "fixed half-tick mark size ($)");
  cmd->add_option("--p", m.p, "two-state stay probabilities: p_dd p_uu")->expected(2);
  cmd->add_option("--model", m.model_path, "n-state mark model JSON {n, P, a}");
}

hawkes::HawkesSpec build_spec(const ModelFlags& m) {
  hawkes::HawkesSpec spec;
  spec.baseline = m.lambda;
  if (m.kernel == "exp")
    spec.kernel = hawkes::exponential_kernel(m.alpha, m.beta);
  else if (m.kernel == "powerlaw")
    spec.kernel = hawkes::power_law_kernel(m.pl_k, m.pl_c, m.pl_p);
  else
    spec.kernel = hawkes::null_kernel();
  if (m.link == "indicator")
    spec.link = hawkes::Indicator{};
  else if (m.link == "capped")
    spec.link = hawkes::Capped{m.ceiling};
  hawkes::validate_spec(spec);
  if (!hawkes::finite_first_moment(spec.kernel))
    std::cerr << "warning: kernel first moment is infinite (power-law p <= 2); "
                 "diffusion limits are not guaranteed\n";
  return spec;
}

hawkes::MarkModel build_mark_model(const ModelFlags& m) {
  if (!m.model_path.empty()) return hawkes::read_mark_model(m.model_path);
  Eigen::MatrixXd P(2, 2);
  P << m.p[0], 1.0 - m.p[0], 1.0 - m.p[1], m.p[1];
  Eigen::VectorXd marks(2);
  marks << -m.delta, m.delta;
  return hawkes::MarkModel{hawkes::TransitionMatrix(std::move(P)), std::move(marks)};
}

int default_jobs() {
  if (const char* env = std::getenv("HAWKES_LOB_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

int cmd_simulate(const ModelFlags& m, double horizon, std::uint64_t seed, double s0,
                 const std::string& out_dir) {
  const auto spec = build_spec(m);
  const auto model = build_mark_model(m);
  std::filesystem::create_directories(out_dir);

  const auto events = hawkes::simulate(spec, horizon, seed);
  const auto pi = hawkes::stationary_distribution(model.P).pi;
  std::vector<double> marks;
  if (!events.empty()) {
    const auto states = hawkes::simulate_chain(model.P, pi, static_cast<long>(events.size()),
                                               hawkes::derive_seed(seed, 1));
    marks.reserve(states.size());
    for (int s : states) marks.push_back(model.marks(s));
  }
  hawkes::write_events_csv(out_dir + "/events.csv", events, &marks);

  std::ofstream path(out_dir + "/path.csv");
  path << "time,price\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", 0.0, s0);
  path << buf;
  double price = s0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    price += marks[i];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", events.times()[i], price);
    path << buf;
  }
  std::cout << "simulate: " << events.size() << " events over " << horizon << " s -> "
            << out_dir << "/events.csv, path.csv\n";
  return kExitOk;
}

int cmd_fit(const std::string& events_path, std::optional<double> horizon,
            hawkes::FitConfig config, const std::string& out_path) {
  const auto csv = hawkes::read_events_csv(events_path);
  if (csv.times.empty()) throw std::invalid_argument("fit: no events in " + events_path);
  const double T = horizon.value_or(csv.times.back());
  const hawkes::EventSequence events(csv.times, T);

  const auto fit = hawkes::fit_mle(events, config);
  json j = hawkes::to_json(fit);
  j["empirical_unit_arrivals"] = hawkes::empirical_unit_arrivals(events);
  j["horizon"] = T;
  hawkes::write_json(out_path, j);

  std::printf("fit: lambda=%.4f alpha=%.4f beta=%.4f mu_hat=%.4f loglik=%.2f%s\n", fit.lambda,
              fit.alpha, fit.beta, fit.mu_hat, fit.loglik,
              fit.converged ? "" : " (not converged)");
  return kExitOk;
}

struct AnalyzeFlags {
  std::string messages, orderbook, out_dir = ".";
  std::string variant = "chpdo";
  int quantiles = 16;
  bool per_side = true;
  double trim = 900.0;
  double delta = 0.005;
  double window_max = 1200.0;
  double window_step = 10.0;
  double cluster_window = 60.0;
  long budget = 20'000;
  int restarts = 4;
  std::uint64_t seed = 1;
};

int cmd_analyze(const AnalyzeFlags& a) {
  namespace lob = hawkes::lob;
  std::filesystem::create_directories(a.out_dir);
  const auto out = [&](const std::string& name) { return a.out_dir + "/" + name; };

  const lob::LobSeries series = lob::parse_lob(a.messages, a.orderbook);
  const lob::PriceChangeSeries changes = lob::mid_price_events(series, a.trim);

  const auto liquidity = lob::liquidity_summary(series, changes);
  const auto hist = lob::tick_histogram(changes);
  hawkes::write_json(out("liquidity.json"),
                     json{{"orders_per_second", liquidity.orders_per_second},
                          {"daily_price_changes", liquidity.daily_price_changes},
                          {"fraction_above_half_tick", hist.fraction_above_half_tick},
                          {"s0", changes.s0},
                          {"window_start", changes.window_start},
                          {"window_end", changes.window_end},
                          {"crossed_rejected", series.crossed_rejected}});
  {
    std::ofstream th(out("tick_hist.csv"));
    th << "half_tick_multiple,count\n";
    for (std::size_t mlt = 0; mlt < hist.counts.size(); ++mlt)
      th << (mlt + 1) << ',' << hist.counts[mlt] << '\n';
  }
  hawkes::write_changes_csv(out("changes.csv"), changes);

  std::pair<lob::StateModel, std::vector<int>> built =
      a.variant == "chpdo"       ? lob::build_fixed_tick(changes, a.delta)
      : a.variant == "two-state" ? lob::build_two_state_mean(changes)
                                 : lob::build_quantile_states(changes, a.quantiles, a.per_side);
  const lob::StateModel& model = built.first;

  const hawkes::TransitionMatrix P =
      hawkes::estimate_transitions(built.second, model.states());
  hawkes::write_json(out("states.json"), hawkes::to_json(model, P));

  const hawkes::LimitParams params = hawkes::compute_limit_params(P, model.marks);

  // The arrival process sees the change times re-based to the trimmed window.
  std::vector<double> times;
  times.reserve(changes.events.size());
  for (const auto& e : changes.events) times.push_back(e.time - changes.window_start);
  const hawkes::EventSequence events(times, changes.window_end - changes.window_start);

  hawkes::FitConfig fit_config;
  fit_config.budget = a.budget;
  fit_config.restarts = a.restarts;
  fit_config.seed = a.seed;
  const hawkes::FitResult fit = hawkes::fit_mle(events, fit_config);
  const double empirical_rate = hawkes::empirical_unit_arrivals(events);

  double coefficient = 0.0;
  if (a.variant == "nonlinear") {
    coefficient = hawkes::nonlinear_diffusion_coefficient(params.sigma_star, empirical_rate);
  } else {
    if (fit.supercritical)
      throw std::runtime_error("analyze: fitted arrival model is supercritical");
    coefficient = hawkes::diffusion_coefficient(params.sigma_star, fit.lambda, fit.mu_hat);
  }

  json lp = hawkes::to_json(params);
  lp["fit"] = hawkes::to_json(fit);
  lp["empirical_unit_arrivals"] = empirical_rate;
  lp["theoretical_coefficient"] = coefficient;
  lp["variant"] = a.variant;
  hawkes::write_json(out("limit_params.json"), lp);

  std::vector<double> grid;
  for (double n = a.window_step; n <= a.window_max + 1e-9; n += a.window_step)
    grid.push_back(n);
  std::vector<double> raw_marks;
  raw_marks.reserve(changes.events.size());
  for (const auto& e : changes.events) raw_marks.push_back(e.change);

  const auto empirical = hawkes::empirical_std_curve(changes, raw_marks, params.a_star, grid);
  const auto theoretical = hawkes::theoretical_std_curve(coefficient, grid);
  const auto empirical_sqrt = hawkes::sqrt_transform(empirical);
  const auto theoretical_sqrt = hawkes::sqrt_transform(theoretical);
  hawkes::write_curves_csv(out("curves.csv"), {{"empirical", &empirical},
                                               {"theoretical", &theoretical},
                                               {"empirical_sqrt", &empirical_sqrt},
                                               {"theoretical_sqrt", &theoretical_sqrt}});

  hawkes::write_json(out("mse.json"),
                     json{{"mse_sqrt_transformed",
                           hawkes::mean_squared_residual(empirical_sqrt, theoretical_sqrt)},
                          {"mse_raw", hawkes::mean_squared_residual(empirical, theoretical)},
                          {"variant", a.variant},
                          {"states", model.states()}});

  const auto best = hawkes::best_fit_coefficient(empirical, coefficient);
  hawkes::write_json(out("bestfit.json"), json{{"coefficient", best.coefficient},
                                               {"theoretical_coefficient", coefficient},
                                               {"percent_error", best.percent_error}});

  {
    const auto qq = hawkes::qq_poisson_data(events);
    std::ofstream qf(out("qq.csv"));
    qf << "empirical,fitted\n";
    for (const auto& pt : qq) qf << pt.empirical << ',' << pt.fitted << '\n';
  }
  {
    const auto clusters = hawkes::clustering_counts(events, a.cluster_window);
    std::ofstream cf(out("clustering.csv"));
    cf << "time,count\n";
    for (const auto& pt : clusters) cf << pt.time << ',' << pt.count << '\n';
  }

  std::printf("analyze[%s]: %d states, sigma*=%.6f a*=%.3e coeff=%.6f best=%.6f (%.2f%%)\n",
              a.variant.c_str(), model.states(), params.sigma_star, params.a_star, coefficient,
              best.coefficient, best.percent_error);
  return kExitOk;
}

int cmd_verify(const ModelFlags& m, hawkes::VerifyOptions opts, const std::string& out_path) {
  const auto spec = build_spec(m);
  const auto model = build_mark_model(m);
  const hawkes::CompoundModel compound{spec, model.P, model.marks};

  const auto lln = hawkes::verify_lln(compound, opts);
  const auto fclt = hawkes::verify_fclt(compound, opts);

  const json j{{"lln",
                {{"sample", lln.sample_mean},
                 {"predicted", lln.predicted_drift},
                 {"z", lln.z},
                 {"paths", lln.paths},
                 {"seed", lln.seed}}},
               {"fclt",
                {{"sample", fclt.sample_std},
                 {"predicted", fclt.predicted_std},
                 {"z", fclt.z},
                 {"ks_stat", fclt.ks_stat},
                 {"ks_critical_1pct", fclt.ks_critical_1pct},
                 {"paths", fclt.paths},
                 {"seed", fclt.seed}}}};
  hawkes::write_json(out_path, j);

  std::printf("verify: lln z=%.3f (sample %.6g vs %.6g), fclt z=%.3f (std %.6g vs %.6g)\n",
              lln.z, lln.sample_mean, lln.predicted_drift, fclt.z, fclt.sample_std,
              fclt.predicted_std);
  const bool ok = std::abs(lln.z) <= 4.0 && std::abs(fclt.z) <= 4.0;
  if (!ok) std::cerr << "verify: FAILED, z-score outside +-4\n";
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compound Hawkes mid-price toolchain: simulate, fit, analyze, verify"};
  app.require_subcommand(1);

  ModelFlags sim_model;
  double sim_horizon = 1000.0, sim_s0 = 0.0;
  std::uint64_t sim_seed = 1;
  std::string sim_out = ".";
  auto* sim = app.add_subcommand("simulate", "simulate a compound Hawkes price path");
  add_model_flags(sim, sim_model);
  sim->add_option("--horizon", sim_horizon, "simulation horizon (s)")->required();
  sim->add_option("--seed", sim_seed, "rng seed");
  sim->add_option("--s0", sim_s0, "initial price ($)");
  sim->add_option("--out-dir", sim_out, "output directory");

  std::string fit_events, fit_out = "fit.json";
  double fit_horizon_val = -1.0;
  hawkes::FitConfig fit_config;
  auto* fit = app.add_subcommand("fit", "fit exponential-kernel parameters by MLE");
  fit->add_option("--events", fit_events, "events CSV (time,mark)")->required();
  fit->add_option("--horizon", fit_horizon_val, "observation horizon (default: last event)");
  fit->add_option("--budget", fit_config.budget, "objective evaluation cap");
  fit->add_option("--restarts", fit_config.restarts, "global search restarts");
  fit->add_option("--seed", fit_config.seed, "rng seed");
  fit->add_option("--tol", fit_config.tolerance, "convergence tolerance");
  fit->add_option("--out", fit_out, "output JSON path");

  AnalyzeFlags an;
  auto* analyze = app.add_subcommand("analyze", "run the full LOB pipeline on a file pair");
  analyze->add_option("--messages", an.messages, "LOBSTER message CSV")->required();
  analyze->add_option("--orderbook", an.orderbook, "LOBSTER level-1 orderbook CSV")->required();
  analyze->add_option("--out-dir", an.out_dir, "output directory");
  analyze->add_option("--variant", an.variant, "mark model: chpdo|two-state|quantile|nonlinear")
      ->check(CLI::IsMember({"chpdo", "two-state", "quantile", "nonlinear"}));
  analyze->add_option("--quantiles", an.quantiles, "quantile count for the n-state model");
  analyze->add_flag("--quantiles-per-side,!--quantiles-total", an.per_side,
                    "q levels per side (default) vs q split across sides");
  analyze->add_option("--trim", an.trim, "seconds trimmed from each session end");
  analyze->add_option("--delta", an.delta, "half tick ($)");
  analyze->add_option("--window-max", an.window_max, "largest std window (s)");
  analyze->add_option("--window-step", an.window_step, "std window step (s)");
  analyze->add_option("--cluster-window", an.cluster_window, "moving count window (s)");
  analyze->add_option("--budget", an.budget, "MLE evaluation cap");
  analyze->add_option("--restarts", an.restarts, "MLE restarts");
  analyze->add_option("--seed", an.seed, "rng seed");

  ModelFlags ver_model;
  hawkes::VerifyOptions ver_opts;
  ver_opts.jobs = default_jobs();
  std::string ver_out = "verify.json";
  double override_astar = std::numeric_limits<double>::quiet_NaN();
  auto* verify = app.add_subcommand("verify", "Monte Carlo check of the LLN and FCLT");
  add_model_flags(verify, ver_model);
  verify->add_option("--n", ver_opts.n, "diffusion scale n");
  verify->add_option("--t", ver_opts.t, "rescaled time t");
  verify->add_option("--paths", ver_opts.paths, "Monte Carlo paths");
  verify->add_option("--seed", ver_opts.seed, "master seed");
  verify->add_option("--jobs", ver_opts.jobs, "worker threads (env HAWKES_LOB_JOBS)");
  verify->add_option("--stationary-horizon", ver_opts.stationary_horizon,
                     "horizon for the stationary arrival-rate estimate");
  verify->add_option("--override-astar", override_astar,
                     "inject a deliberate a* (diagnostic)");
  verify->add_option("--out", ver_out, "output JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_model, sim_horizon, sim_seed, sim_s0, sim_out);
    if (fit->parsed()) {
      std::optional<double> h;
      if (fit_horizon_val >= 0.0) h = fit_horizon_val;
      return cmd_fit(fit_events, h, fit_config, fit_out);
    }
    if (analyze->parsed()) return cmd_analyze(an);
    if (verify->parsed()) {
      ver_opts.a_star_override = override_astar;
      return cmd_verify(ver_model, ver_opts, ver_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
