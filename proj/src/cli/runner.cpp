#include "qsd/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qsd/core/error.hpp"
#include "qsd/dynamics/coupling.hpp"
#include "qsd/dynamics/sigma_exit.hpp"
#include "qsd/dynamics/survival.hpp"
#include "qsd/estimators/decay_fit.hpp"
#include "qsd/estimators/exponentiality.hpp"
#include "qsd/measures/measure_checks.hpp"
#include "qsd/measures/observables.hpp"
#include "qsd/model/model_io.hpp"
#include "qsd/phi/moments.hpp"
#include "qsd/phi/phi.hpp"
#include "qsd/spectral/checks.hpp"
#include "qsd/spectral/decay.hpp"
#include "qsd/spectral/tasep_oracles.hpp"
#include "qsd/spectral/uniformization.hpp"

namespace qsd {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Purpose tags for sub-seeds of the master seed.
constexpr std::uint64_t kSeedSurvival = 1, kSeedPhi = 2, kSeedReference = 3, kSeedBootstrap = 4,
                        kSeedSigma = 5, kSeedCoupling = 6, kSeedEta = 7;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw IoError("cannot open " + (dir_ / name).string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + (dir_ / name).string());
    files.push_back(name);
  }

  void table(const std::string& name, const Table& t) {
    std::ostringstream s;
    for (std::size_t i = 0; i < t.header.size(); ++i) s << (i ? "," : "") << t.header[i];
    s << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << r[i];
      s << '\n';
    }
    write(name, s.str());
  }

  const fs::path& dir() const noexcept { return dir_; }

  json metrics = json::object();
  std::vector<std::string> files;

 private:
  fs::path dir_;
};

template <class T>
T opt_or(const json& o, const char* key, T fallback) {
  if (!o.contains(key)) return fallback;
  try {
    return o.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("options.") + key + ": " + e.what());
  }
}

json fit_json(const DecayFit& f) {
  return {{"lambda", f.lambda}, {"se", f.se},         {"t_lo", f.t_lo},
          {"t_hi", f.t_hi},     {"r2", f.r2},         {"n_points", f.n_points},
          {"reduced_chi2", f.reduced_chi2}};
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

Table curve_table(const SurvivalCurve& c) {
  Table t{{"t", "estimate", "ci_lo", "ci_hi", "n_alive"}, {}};
  for (std::size_t i = 0; i < c.t.size(); ++i)
    t.add({num(c.t[i]), num(c.estimate[i]), num(c.ci_lo[i]), num(c.ci_hi[i]), std::to_string(c.n_alive[i])});
  return t;
}

// Fitting uses a dense grid over the same samples.
std::optional<DecayFit> try_fit(const HittingSample& s, double t_hi, const ExperimentConfig& c, json& why) {
  const auto grid = linear_grid(0.0, t_hi, opt_or<std::size_t>(c.options, "fit_points", 41));
  const auto curve = survival_from_samples(s.tau, s.censored, grid, s.t_max);
  DecayFitOptions fo;
  fo.seed = derive_key(c.seed, kSeedBootstrap);
  if (c.options.contains("fit_t_lo")) fo.t_lo = opt_or<double>(c.options, "fit_t_lo", 0.0);
  if (c.options.contains("fit_t_hi")) fo.t_hi = opt_or<double>(c.options, "fit_t_hi", 0.0);
  try {
    return fit_decay(curve, fo);
  } catch (const EstimationError& e) {
    why = e.what();
    return std::nullopt;
  }
}

std::vector<double> uncensored(const HittingSample& s) {
  std::vector<double> out;
  for (std::size_t i = 0; i < s.tau.size(); ++i)
    if (!s.censored[i]) out.push_back(s.tau[i]);
  return out;
}

void run_survival(const ExperimentConfig& c, const Model& m, Output& out) {
  const auto nu = c.build_measure(m);
  InitialSampler init = [&nu](Philox4x32& rng) { return nu.sample(rng); };
  const auto& b = c.budgets;
  const auto s = sample_hitting_times(init, m, b.n_traj, b.t_max, derive_key(c.seed, kSeedSurvival), c.workers);
  out.table("survival.csv", curve_table(survival_from_samples(s.tau, s.censored, b.t_grid, b.t_max)));
  json why;
  const auto fit = try_fit(s, opt_or<double>(c.options, "fit_t_max", b.t_grid.back()), c, why);
  auto& mt = out.metrics;
  mt["n_traj"] = b.n_traj;
  mt["censored"] = static_cast<std::size_t>(std::count(s.censored.begin(), s.censored.end(), 1));
  mt["absorbed"] = s.absorbed;
  const auto tau = uncensored(s);
  if (!tau.empty()) mt["mean_tau"] = mean_se(tau).mean;
  if (fit) {
    mt["fit"] = fit_json(*fit);
    ExponentialityOptions eo;
    eo.seed = derive_key(c.seed, kSeedBootstrap);
    // Exponentiality is a statement about the tail beyond the fit window.
    std::vector<double> tail;
    for (double t : tau)
      if (t > fit->t_lo) tail.push_back(t - fit->t_lo);
    if (tail.size() >= 10) {
      const auto r = exponentiality_report(tail, fit->lambda, eo);
      mt["exponentiality"] = {{"after", fit->t_lo}, {"n", r.n}, {"ks", r.ks}, {"ks_critical", r.ks_critical},
                              {"ks_pvalue", r.ks_pvalue}, {"exponential", r.exponential}};
    }
  } else {
    mt["fit"] = nullptr;
    mt["fit_error"] = why;
  }
}

std::vector<Site> report_sites(const Model& m, const ExperimentConfig& c) {
  return dilate(m.lattice(), m.target().region(), opt_or<int>(c.options, "dilation", 1));
}

void marginal_rows(Table& t, const std::string& label, const WeightedEnsemble& e, const std::vector<Site>& sites,
                   int max_n) {
  for (Site s : sites) {
    for (int n = 0; n <= max_n; ++n) {
      const auto est = e.estimate([s, n](const Configuration& x) { return x[s] == n ? 1.0 : 0.0; });
      t.add({label, std::to_string(s), std::to_string(n), num(est.mean), num(est.se)});
    }
  }
}

json domination_json(const DominationReport& r) {
  double worst = -INFINITY;
  for (const auto& row : r.rows) worst = std::max(worst, row.excess_sigma);
  return {{"violations", r.violations}, {"worst_excess_sigma", worst}, {"tests", r.rows.size()}};
}

void domination_rows(Table& t, const std::string& label, const DominationReport& r) {
  for (const auto& row : r.rows)
    t.add({label, row.name, num(row.value), num(row.value_se), num(row.reference), num(row.reference_se),
           num(row.excess_sigma), row.violated ? "1" : "0"});
}

PhiOptions phi_options(const ExperimentConfig& c) {
  PhiOptions o;
  o.n_particles = c.budgets.n_particles;
  o.t_max = c.budgets.t_max;
  o.seed = derive_key(c.seed, kSeedPhi);
  o.workers = c.workers;
  o.probes = opt_or<std::vector<double>>(c.options, "probes", o.probes);
  o.max_censoring = opt_or<double>(c.options, "max_censoring", o.max_censoring);
  return o;
}

// Shared by phi-iterate and domination.
void run_iterates(const ExperimentConfig& c, const Model& m, Output& out, bool full) {
  const auto nu = c.build_measure(m);
  const auto opt = phi_options(c);
  const auto res = phi_iterate(nu, m, c.budgets.iterations, opt);
  const auto reference = sample_ensemble(nu, c.budgets.n_traj, derive_key(c.seed, kSeedReference), c.workers);
  SuiteOptions so;
  so.dilation = opt_or<int>(c.options, "dilation", 1);
  const auto suite = increasing_suite(m, so);

  Table dom{{"ensemble", "observable", "value", "value_se", "reference", "reference_se", "excess_sigma", "violated"}, {}};
  json per = json::array();
  std::size_t total_violations = 0;
  auto test = [&](const std::string& label, const WeightedEnsemble& e) {
    const auto r = domination_test(e, reference, suite);
    domination_rows(dom, label, r);
    auto j = domination_json(r);
    j["ensemble"] = label;
    per.push_back(j);
    total_violations += r.violations;
  };
  for (std::size_t k = 0; k < res.iterates.size(); ++k) test("phi" + std::to_string(k + 1), res.iterates[k]);
  if (!res.iterates.empty()) test("cesaro", cesaro_mixture(res.iterates));
  out.table("domination.csv", dom);
  out.metrics["domination"] = {{"violations", total_violations}, {"ensembles", per}};

  std::ostringstream log;
  res.log.write_csv(log);
  out.write("iteration_log.csv", log.str());
  json rows = json::array();
  for (const auto& r : res.log.rows) {
    rows.push_back({{"iteration", r.measure_index}, {"mean_tau", r.expected_tau.mean}, {"se", r.expected_tau.se},
                    {"censoring_fraction", r.censoring_fraction}, {"ess", r.ess}, {"t_max", r.t_max}});
  }
  out.metrics["iterations"] = rows;
  if (!full) return;

  Table marg{{"ensemble", "site", "n", "probability", "se"}, {}};
  const auto sites = report_sites(m, c);
  const int max_n = opt_or<int>(c.options, "max_occupancy", 3);
  marginal_rows(marg, "nu", reference, sites, max_n);
  for (std::size_t k = 0; k < res.iterates.size(); ++k) marginal_rows(marg, "phi" + std::to_string(k + 1), res.iterates[k], sites, max_n);
  if (!res.iterates.empty()) marginal_rows(marg, "cesaro", cesaro_mixture(res.iterates), sites, max_n);
  out.table("marginals.csv", marg);

  // Exponentiality of successive iterates against the last mean.
  std::vector<std::vector<double>> taus;
  for (const auto& r : res.log.rows) taus.push_back(r.tau);
  if (!taus.empty() && !taus.back().empty()) {
    const double lambda = 1.0 / res.log.rows.back().expected_tau.mean;
    ExponentialityOptions eo;
    eo.seed = derive_key(c.seed, kSeedBootstrap);
    Table trend{{"iteration", "mean_tau", "ks", "ks_critical", "atom_at_zero", "exponential"}, {}};
    for (const auto& r : exponentiality_trend(taus, lambda, eo))
      trend.add({std::to_string(r.iteration), num(r.mean_tau), num(r.ks), num(r.ks_critical), num(r.atom_at_zero),
                 r.exponential ? "1" : "0"});
    out.table("exponentiality_trend.csv", trend);
    out.metrics["lambda_from_last_iterate"] = lambda;
  }

  // Moment ratios E_{nu_n}[tau] from the nu_0 hitting times.
  const auto& first = res.log.rows.front();
  Table mom{{"n", "estimate", "ci_lo", "ci_hi", "ess", "unstable"}, {}};
  MomentRatioOptions mo;
  mo.seed = derive_key(c.seed, kSeedBootstrap);
  const int n_max = opt_or<int>(c.options, "moment_orders", 5);
  for (int n = 0; n <= n_max && !first.tau.empty(); ++n) {
    const auto r = tau_moment_ratio(first.tau, {}, n, mo);
    mom.add({std::to_string(n), num(r.estimate), num(r.ci_lo), num(r.ci_hi), num(r.ess), r.unstable ? "1" : "0"});
  }
  out.table("moment_ratios.csv", mom);
}

void run_phi_direct(const ExperimentConfig& c, const Model& m, Output& out) {
  const auto nu = c.build_measure(m);
  auto opt = phi_options(c);
  opt.n_particles = c.budgets.n_traj;
  const auto powers = opt_or<std::vector<int>>(c.options, "powers", {1, 2, 3});
  const auto res = phi_direct(nu, m, powers, opt);
  const auto sites = report_sites(m, c);
  const int max_n = opt_or<int>(c.options, "max_occupancy", 3);
  Table marg{{"ensemble", "site", "n", "probability", "se"}, {}};
  json per = json::array();
  const auto window = window_sum(sites);
  for (std::size_t k = 0; k < powers.size(); ++k) {
    const std::string label = "phi" + std::to_string(powers[k]);
    marginal_rows(marg, label, res.ensembles[k], sites, max_n);
    const auto w = res.ensembles[k].estimate(window);
    per.push_back({{"power", powers[k]}, {"window_sum", w.mean}, {"window_sum_se", w.se}, {"ess", res.ess[k]}});
  }
  out.table("marginals.csv", marg);
  out.metrics["powers"] = per;
  out.metrics["censoring_fraction"] = res.censoring_fraction;
  out.metrics["t_max"] = res.t_max;
}

StateConstraint constraint_from(const ExperimentConfig& c, const Model& m) {
  StateConstraint sc = default_constraint(m);
  const auto& o = c.options;
  sc.site_cap = opt_or<int>(o, "site_cap", sc.site_cap);
  if (o.contains("site_cap") && !o.contains("max_total"))
    sc.max_total = static_cast<long>(sc.site_cap) * static_cast<long>(m.num_sites());
  sc.min_total = opt_or<long>(o, "min_total", c.window ? c.window->min_total : sc.min_total);
  sc.max_total = opt_or<long>(o, "max_total", c.window ? c.window->max_total : sc.max_total);
  return sc;
}

void run_spectral(const ExperimentConfig& c, const Model& m, Output& out) {
  const auto sc = constraint_from(c, m);
  const auto space = enumerate_states(m.lattice(), sc, opt_or<std::uint64_t>(c.options, "state_limit", kDefaultStateLimit));
  const auto gen = build_killed_generator(space, m);
  const auto pm = c.build_measure(m);
  const auto nu = measure_vector(gen, pm);
  auto& mt = out.metrics;
  mt["states"] = space.size();
  mt["outside_target"] = gen.size();
  mt["dropped_jumps"] = gen.dropped_jumps;
  mt["constraint"] = {{"site_cap", sc.site_cap}, {"min_total", sc.min_total}, {"max_total", sc.max_total}};
  double enumerated_mass = 0.0;
  for (const auto& s : space.states()) enumerated_mass += pm.probability(s);
  mt["measure_mass_enumerated"] = enumerated_mass;

  const auto spec = principal_decay(gen);
  json classes = json::array();
  for (const auto& cl : spec.classes) classes.push_back({{"size", cl.states.size()}, {"lambda", cl.lambda}, {"leaks", cl.leaks}});
  mt["decay"] = {{"lambda", spec.lambda}, {"defective", spec.defective}, {"absorbing", spec.absorbing},
                 {"left_residual", spec.left_residual}, {"right_residual", spec.right_residual},
                 {"iterations", spec.iterations}, {"classes", classes}};
  if (spec.lambda_fit) mt["decay"]["lambda_fit"] = *spec.lambda_fit;
  if (spec.absorbing) return;

  std::vector<double> surv = exact_survival(gen, nu, c.budgets.t_grid);
  Table st{{"t", "survival", "upper"}, {}};
  const double lambda = spec.lambda_fit.value_or(spec.lambda);
  for (std::size_t i = 0; i < surv.size(); ++i) st.add({num(c.budgets.t_grid[i]), num(surv[i]), num(std::exp(-lambda * c.budgets.t_grid[i]))});
  out.table("exact_survival.csv", st);

  const std::size_t n_mom = opt_or<std::size_t>(c.options, "moment_orders", 12);
  const auto it = exact_phi_iterates(gen, nu, n_mom + 1);
  json moments = json::array();
  for (std::size_t n = 0; n <= n_mom; ++n) moments.push_back({{"n", n}, {"expected_tau", it.expected_tau(n)}});
  mt["expected_tau_iterates"] = moments;
  mt["inverse_lambda"] = 1.0 / lambda;

  if (spec.has_vectors()) {
    const auto fp = qsd_fixed_point_check(gen, spec.left);
    mt["fixed_point"] = {{"phi_distance", fp.phi_distance}, {"generator_residual", fp.generator_residual},
                         {"expected_tau", fp.expected_tau}};
    const auto sw = hitting_sandwich_check(gen, nu, spec, c.budgets.t_grid);
    mt["sandwich"] = {{"entropy", sw.entropy}, {"fg_integral", sw.fg_integral}, {"passed", sw.passed}};
    Table q{{"state", "occupancy", "mu", "g"}, {}};
    for (std::size_t x = 0; x < gen.size(); ++x) {
      std::string occ;
      for (int v : gen.states[x].occupancy()) occ += std::to_string(v) + ' ';
      if (!occ.empty()) occ.pop_back();
      q.add({std::to_string(x), occ, num(spec.left[static_cast<Eigen::Index>(x)]), num(spec.right[static_cast<Eigen::Index>(x)])});
    }
    out.table("qsd.csv", q);
  }
  if (opt_or<bool>(c.options, "rayleigh", true)) {
    const auto sym = build_killed_generator(space, m.symmetrized());
    const auto rb = rayleigh_bound(gen, sym, nu);
    mt["rayleigh"] = {{"lambda", rb.lambda}, {"lambda_s", rb.lambda_s}, {"margin", rb.margin},
                      {"residual", rb.residual}, {"asymmetry", rb.asymmetry}, {"passed", rb.passed}};
  }
  if (opt_or<bool>(c.options, "export_matrix", false)) {
    std::ostringstream s;
    write_triplets(gen, s);
    out.write("generator.txt", s.str());
  }
}

void run_oracle_line(const ExperimentConfig& c, const Model& m, Output& out) {
  const auto& region = m.target().region();
  if (m.lattice().dimension() != 1 || region.size() != 1 || m.target().threshold() != 0)
    throw ValidationError("line oracle needs a one-dimensional lattice and a single-site target with threshold 0");
  const auto nu = c.build_measure(m);
  InitialSampler init = [&nu](Philox4x32& rng) { return nu.sample(rng); };
  const auto& b = c.budgets;
  const auto s = sample_hitting_times(init, m, b.n_traj, b.t_max, derive_key(c.seed, kSeedSurvival), c.workers);
  const auto curve = survival_from_samples(s.tau, s.censored, b.t_grid, b.t_max);
  // Sites left of the origin in the box; chi beyond them is truncated.
  const double truncation = std::pow(1.0 - c.rho, static_cast<double>(region[0] + 1));
  Table t{{"t", "mc", "ci_lo", "ci_hi", "oracle", "diff", "allowed", "within"}, {}};
  double sup = 0.0;
  bool all = true;
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    const double o = tasep_line_survival(c.rho, curve.t[i]);
    const double p = curve.estimate[i];
    const double sigma = std::sqrt(std::max(o * (1 - o), 1e-300) / static_cast<double>(b.n_traj));
    const double allowed = 3.0 * sigma + truncation;
    const double d = p - o;
    sup = std::max(sup, std::abs(d));
    all = all && std::abs(d) <= allowed;
    t.add({num(curve.t[i]), num(p), num(curve.ci_lo[i]), num(curve.ci_hi[i]), num(o), num(d), num(allowed),
           std::abs(d) <= allowed ? "1" : "0"});
  }
  out.table("oracle.csv", t);
  auto& mt = out.metrics;
  mt["oracle"] = "line";
  mt["sup_abs_diff"] = sup;
  mt["within_allowance"] = all;
  mt["lambda_oracle"] = tasep_line_lambda(c.rho);
  json why;
  const auto fit = try_fit(s, opt_or<double>(c.options, "fit_t_max", b.t_grid.back()), c, why);
  if (fit) mt["fit"] = fit_json(*fit);
  else mt["fit_error"] = why;
}

void run_oracle_circle(const ExperimentConfig& c, const Model& m, Output& out) {
  const auto n_sites = static_cast<int>(m.num_sites());
  const int particles = opt_or<int>(c.options, "particles", static_cast<int>(std::floor(c.rho * n_sites)));
  const auto space = enumerate_states(m.lattice(), StateConstraint::canonical(particles));
  const auto gen = build_killed_generator(space, m);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(gen.size()), 1.0 / static_cast<double>(space.size()));
  const auto exact = exact_survival(gen, u, c.budgets.t_grid);
  Table t{{"t", "matrix", "closed_form", "diff"}, {}};
  double sup = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double o = tasep_circle_mixture(n_sites, particles, c.budgets.t_grid[i]);
    sup = std::max(sup, std::abs(exact[i] - o));
    t.add({num(c.budgets.t_grid[i]), num(exact[i]), num(o), num(exact[i] - o)});
  }
  out.table("oracle.csv", t);
  const auto spec = principal_decay(gen);
  auto& mt = out.metrics;
  mt["oracle"] = "circle";
  mt["particles"] = particles;
  mt["states"] = space.size();
  mt["sup_abs_diff"] = sup;
  mt["defective"] = spec.defective;
  mt["lambda"] = spec.lambda_fit.value_or(spec.lambda);
  mt["lambda_oracle"] = tasep_circle_lambda();
  mt["rho"] = c.rho;
}

void run_sigma(const ExperimentConfig& c, const Model& m, Output& out) {
  const auto nu = c.build_measure(m);
  Table t{{"kappa", "estimate", "se", "bound", "poisson_bound", "passed"}, {}};
  bool all = true;
  for (double kappa : opt_or<std::vector<double>>(c.options, "kappa", {0.5, 1.0})) {
    const auto r = sigma_exit(m, nu, kappa, c.budgets.n_traj, derive_key(c.seed, kSeedSigma), c.workers);
    all = all && r.passed;
    t.add({num(kappa), num(r.estimate), num(r.se), num(r.bound), num(r.poisson_bound), r.passed ? "1" : "0"});
  }
  out.table("sigma_exit.csv", t);
  out.metrics["passed"] = all;
}

void run_couplings(const ExperimentConfig& c, const Model& m, Output& out) {
  Configuration eta;
  if (c.options.contains("eta")) {
    eta = Configuration(opt_or<std::vector<int>>(c.options, "eta", {}));
    if (eta.size() != m.num_sites()) throw ValidationError("options.eta has the wrong number of sites");
  } else {
    const auto nu = c.build_measure(m);
    auto rng = make_stream(c.seed, kSeedEta, 0);
    do {
      eta = nu.sample(rng);
    } while (m.in_target(eta));
  }
  Site i = 0;
  if (c.options.contains("site")) {
    const auto coords = opt_or<std::vector<int>>(c.options, "site", {});
    const auto s = m.lattice().site(coords);
    if (!s) throw ValidationError("options.site is outside the lattice");
    i = *s;
  } else {
    // Farthest site from the target by default.
    int best = -1;
    for (Site s = 0; s < m.num_sites(); ++s) {
      int d = 1 << 30;
      for (Site r : m.target().region()) d = std::min(d, m.lattice().distance(s, r));
      if (d > best) {
        best = d;
        i = s;
      }
    }
  }
  SecondClassOptions so;
  so.t_grid = c.budgets.t_grid;
  so.n_traj = c.budgets.n_traj;
  so.t_max = c.budgets.t_grid.back();
  so.seed = derive_key(c.seed, kSeedCoupling);
  so.workers = c.workers;
  const auto r = second_class_escape(m, eta, i, so);
  Table t{{"t", "p_eta", "p_zeta", "gap", "gap_se", "hit_within", "bound", "passed"}, {}};
  for (std::size_t k = 0; k < r.t.size(); ++k)
    t.add({num(r.t[k]), num(r.p_eta[k]), num(r.p_zeta[k]), num(r.gap[k]), num(r.gap_se[k]), num(r.hit_within[k]),
           num(r.bound[k]), r.passed[k] ? "1" : "0"});
  out.table("couplings.csv", t);
  auto& mt = out.metrics;
  mt["site"] = i;
  mt["hit_ever"] = r.hit_ever;
  mt["epsilon"] = r.epsilon;
  mt["bound_rigorous"] = r.bound_rigorous;
  mt["order_violations"] = r.order_violations;
  mt["coupling_violations"] = r.coupling_violations;
  mt["frozen"] = r.frozen;
  mt["passed"] = r.all_passed();
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out[prefix] = j;
  }
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw IoError("cannot parse " + p.string() + ": " + e.what());
  }
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t file_hash(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return fnv1a(s.str());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

RunOutcome run_experiment(const ExperimentConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  const Model m = c.build_model();
  Output out(c.out_dir);
  out.metrics["kind"] = to_string(c.kind);
  switch (c.kind) {
    case ExperimentKind::survival: run_survival(c, m, out); break;
    case ExperimentKind::phi_iterate: run_iterates(c, m, out, true); break;
    case ExperimentKind::phi_direct: run_phi_direct(c, m, out); break;
    case ExperimentKind::spectral: run_spectral(c, m, out); break;
    case ExperimentKind::oracle_check: {
      const auto which = opt_or<std::string>(c.options, "oracle", "line");
      if (which == "line") run_oracle_line(c, m, out);
      else if (which == "circle") run_oracle_circle(c, m, out);
      else throw ValidationError("options.oracle must be 'line' or 'circle'");
      break;
    }
    case ExperimentKind::domination: run_iterates(c, m, out, false); break;
    case ExperimentKind::sigma_exit: run_sigma(c, m, out); break;
    case ExperimentKind::couplings: run_couplings(c, m, out); break;
  }
  out.metrics["model_validation"] = {{"ok", m.validation().ok()}, {"delta", m.delta()}, {"failures", m.validation().failures()}};
  out.write("metrics.json", pretty(out.metrics));
  auto cfg = config_to_json(c);
  cfg.erase("workers");
  cfg.erase("out_dir");
  out.write("config.json", pretty(cfg));

  RunOutcome r;
  r.metrics = out.metrics;
  r.files = out.files;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json files = json::object();
  for (const auto& f : r.files) files[f] = hex64(file_hash(out.dir() / f));
  const json manifest = {{"format", "qsd-manifest"},
                         {"version", 1},
                         {"tool_version", kToolVersion},
                         {"kind", to_string(c.kind)},
                         {"config_hash", hex64(fnv1a(cfg.dump()))},
                         {"seed", c.seed},
                         {"workers", c.workers},
                         {"wall_seconds", r.wall_seconds},
                         {"files", files}};
  out.write("manifest.json", pretty(manifest));
  return r;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DomainError*>(&e)) return kExitValidation;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return kExitIo;
  return kExitRuntime;
}

std::vector<MetricDiff> compare_runs(const fs::path& a, const fs::path& b, double tol) {
  const auto ma = read_json(a / "metrics.json");
  const auto mb = read_json(b / "metrics.json");
  if (ma.value("kind", std::string()) != mb.value("kind", std::string()))
    throw ValidationError("runs have different experiment kinds: " + ma.value("kind", std::string("?")) + " vs " +
                          mb.value("kind", std::string("?")));
  std::map<std::string, json> fa, fb;
  flatten(ma, "", fa);
  flatten(mb, "", fb);
  std::vector<MetricDiff> out;
  for (const auto& [k, va] : fa) {
    const auto it = fb.find(k);
    if (it == fb.end()) {
      out.push_back({k, va, nullptr, NAN});
      continue;
    }
    const auto& vb = it->second;
    if (va.is_number() && vb.is_number()) {
      const double d = vb.get<double>() - va.get<double>();
      if (std::abs(d) > tol) out.push_back({k, va, vb, d});
    } else if (va != vb) {
      out.push_back({k, va, vb, NAN});
    }
  }
  for (const auto& [k, vb] : fb)
    if (!fa.count(k)) out.push_back({k, nullptr, vb, NAN});
  return out;
}

}  // namespace qsd
