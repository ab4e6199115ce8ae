#include "exrisk/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace exrisk {

// ---------------------------------------------------------------------------
// Seeding

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t master, std::uint64_t index, StreamRole role) {
  std::uint64_t k = splitmix64(master);
  k = splitmix64(k ^ index);
  k = splitmix64(k ^ (0x632be59bd9b4e019ULL * (static_cast<std::uint64_t>(role) + 1)));
  return k;
}

std::uint64_t CounterRng::next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Sample draw_sample(const DiscreteDistribution& P, Index n, std::uint64_t master, std::uint64_t trial,
                   StreamRole role) {
  if (n < 1) throw Error("sample size must be at least 1");
  Sample s;
  s.seed = stream_key(master, trial, role);
  s.draws.resize(static_cast<std::size_t>(n));
  CounterRng rng(s.seed);
  const double* begin = P.cumulative().data();
  const double* end = begin + P.size();
  for (auto& x : s.draws) {
    const double u = rng.uniform();
    x = std::min<Index>(static_cast<Index>(std::upper_bound(begin, end, u) - begin), P.size() - 1);
  }
  return s;
}

void parallel_for(Index count, unsigned workers, const std::function<void(Index)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<Index>(workers, std::max<Index>(count, 1)));
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Empirical process

Vector realized_Z(const ClassProfile& prof, const Vector& empirical_risk, const Vector& sigma_grid) {
  const Index fbar = prof.minimizer;
  Vector Z = Vector::Zero(sigma_grid.size());
  for (Index i = 0; i < prof.risk.size(); ++i) {
    if (prof.sup_dev(i) > 1.0 + 1e-12) continue;
    const double centered =
        std::abs((empirical_risk(i) - empirical_risk(fbar)) - (prof.risk(i) - prof.risk(fbar)));
    for (Index j = 0; j < sigma_grid.size(); ++j)
      if (prof.sigma(i) <= sigma_grid(j)) Z(j) = std::max(Z(j), centered);
  }
  return Z;
}

Vector realized_Z(const DiscreteDistribution& P, const FunctionClass& F, const EmpiricalMeasure& Pn,
                  const Vector& sigma_grid) {
  return realized_Z(profile(P, F), empirical_risks(Pn, F), sigma_grid);
}

TabulatedFunction EZEstimate::mean_function() const {
  return {sigma_grid, mean, Extrapolation::clamp};
}

TabulatedFunction EZEstimate::upper() const {
  Vector up = mean + 2.0 * se;
  for (Index i = 1; i < up.size(); ++i) up(i) = std::max(up(i), up(i - 1));
  return {sigma_grid, up, Extrapolation::clamp};
}

EZEstimate estimate_EZ(const DiscreteDistribution& P, const FunctionClass& F, Index n, const Vector& sigma_grid,
                       Index reps, std::uint64_t master_seed, unsigned workers) {
  if (reps < 100) throw Error("EZ estimation needs at least 100 replications");
  const ClassProfile prof = profile(P, F);
  Matrix Z(reps, sigma_grid.size());
  parallel_for(reps, workers, [&](Index r) {
    const Sample s = draw_sample(P, n, master_seed, static_cast<std::uint64_t>(r), StreamRole::ez);
    const EmpiricalMeasure Pn(s, P.size());
    Z.row(r) = realized_Z(prof, empirical_risks(Pn, F), sigma_grid).transpose();
  });

  EZEstimate out;
  out.sigma_grid = sigma_grid;
  out.reps = reps;
  out.mean = Z.colwise().mean().transpose();
  const Matrix centered = Z.rowwise() - out.mean.transpose();
  const Vector var = centered.array().square().colwise().sum().transpose() / static_cast<double>(reps - 1);
  out.se = (var / static_cast<double>(reps)).cwiseSqrt();
  return out;
}

// ---------------------------------------------------------------------------
// Bound construction

bool BoundPipeline::lemma3_hypotheses() const {
  if (!bb || !cc || !tau_n) return false;
  return bb->holds && cc->holds && *tau_n <= bound.params.eta_n / 2.0;
}

FunctionClass unit_subclass(const DiscreteDistribution& P, const FunctionClass& F) {
  const ClassProfile prof = profile(P, F);
  std::vector<Index> keep;
  for (Index i = 0; i < F.size(); ++i)
    if (prof.sup_dev(i) <= 1.0 + 1e-12) keep.push_back(i);
  if (static_cast<Index>(keep.size()) == F.size()) return F;
  return F.subset(keep);
}

BoundPipeline build_bound_pipeline(const DiscreteDistribution& P, const FunctionClass& F, const BoundParams& params,
                                   const Vector& delta_grid, const Vector& sigma_grid, Index reps,
                                   std::uint64_t master_seed, unsigned workers) {
  params.validate();
  const FunctionClass unit = unit_subclass(P, F);
  const ClassProfile prof = profile(P, unit);

  EZEstimate ez = estimate_EZ(P, unit, params.n, sigma_grid, reps, master_seed, workers);
  const TabulatedFunction ez_upper = ez.upper();
  TabulatedFunction D = margin_radius(P, unit, delta_grid);

  const Index m = delta_grid.size();
  Vector w(m);
  for (Index i = 0; i < m; ++i) {
    const double d = i + 1 < m ? D.values()(i + 1) : prof.sigma.maxCoeff();
    w(i) = w_t_value(ez_upper.step_up(d), d, params.t, params.n);
  }
  TabulatedFunction W(delta_grid, w, Extrapolation::clamp);
  TabulatedFunction psi = build_psi(W);
  TabulatedFunction psi_inv = psi_inverse(psi);
  const Vector v_grid = merge_grid(linear_grid(0.0, 2.0 / params.eps, 257), Vector::Constant(1, 1.0 / params.eps));
  TabulatedFunction H = legendre_conjugate(psi_inv, v_grid);
  ExcessRiskBound bound = delta_tn(H, params);

  BoundPipeline out{delta_grid, std::move(ez), std::move(D), std::move(W), std::move(psi), std::move(psi_inv),
                    std::move(H), bound, {}, {}, {}, {}};
  if (F.kind() == ClassKind::convex_parametric) {
    out.D_bold = cc_envelope(P, F, delta_grid);
    if (std::isfinite(bound.delta_tn)) out.tau_n = tau_n(*out.D_bold, bound.delta_tn);
    out.bb = condition_bb_check(P, F, params.eta_n);
    out.cc = condition_cc_check(P, F, *out.D_bold);
  }
  return out;
}

MarginTables build_margin_tables(const DiscreteDistribution& P, const ModelFamily& family, Index n) {
  const double eps = family.eps();
  const FunctionClass& umbrella = family.umbrella();
  const Loss f_star = umbrella.member(risk_minimizer(P, umbrella));

  // Conjugates are tabulated on a grid that contains their arguments exactly.
  Vector args(2 * family.size());
  for (Index k = 0; k < family.size(); ++k) {
    const double tk = family.t_schedule()[static_cast<std::size_t>(k)];
    args(2 * k) = std::sqrt(tk / (static_cast<double>(n) * eps * eps));
    args(2 * k + 1) = std::sqrt(2.0 * tk / (static_cast<double>(n) * eps * eps));
  }
  const Vector v_grid = merge_grid(linear_grid(0.0, 2.0 * std::max(1.0, args.maxCoeff()), 257), args);

  TabulatedFunction phi = margin_envelope(P, umbrella, f_star);
  TabulatedFunction phi_conj = legendre_conjugate(phi, v_grid);
  MarginTables out{std::move(phi), std::move(phi_conj), {}, {}, {}, {}};
  for (Index k = 0; k < family.size(); ++k) {
    const double tk = family.t_schedule()[static_cast<std::size_t>(k)];
    out.phi_k.push_back(margin_envelope(P, family.model(k)));
    out.phi_k_conj.push_back(legendre_conjugate(out.phi_k.back(), v_grid));
    out.alpha.push_back(alpha_k(out.phi_conj, tk, n, eps));
    out.gamma.push_back(gamma_k(out.phi_k_conj.back(), tk, n, eps));
  }
  return out;
}

SelectionRun run_selection(const ModelFamily& family, const MarginTables& margins, const DiscreteDistribution& P,
                           const EmpiricalMeasure& Pn, const EmpiricalMeasure& Pn_prime) {
  SelectionRun run;
  run.fits = fit_models(family, Pn, Pn_prime, P);
  std::vector<double> beta;
  for (Index k = 0; k < family.size(); ++k)
    beta.push_back(beta_hat(Pn, Pn_prime, run.fits[static_cast<std::size_t>(k)], family.model(k)));
  run.penalties = pi_hat(margins.alpha, margins.gamma, beta);
  run.selection = select(run.fits, run.penalties);
  run.selection.oracle = lemma4_oracle_check(run.fits, run.penalties, run.selection.k_hat, family.eps());
  run.lemma5_per_model = lemma5_event_check(run.fits, run.penalties, family.eps());
  run.selection.lemma5_holds =
      std::all_of(run.lemma5_per_model.begin(), run.lemma5_per_model.end(), [](bool b) { return b; });
  run.selection.penalty_valid = penalty_validity_event(run.fits, run.penalties, family.eps());

  const ModelFit& chosen = run.fits[static_cast<std::size_t>(run.selection.k_hat)];
  run.decomposition_ok = std::abs(chosen.excess_star_hat - (chosen.E_k + chosen.excess_star_bar)) <= 1e-12;
  for (Index k = 0; k < run.penalties.size(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (run.penalties.vacuous[kk]) continue;
    if (run.penalties.pi_hat[kk] != run.penalties.beta_hat[kk] + run.penalties.alpha[kk] + 2.0 * run.penalties.gamma[kk])
      run.identity_ok = false;
  }
  return run;
}

// ---------------------------------------------------------------------------
// Experiments

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::lemma1: return "lemma1";
    case Suite::lemma2: return "lemma2";
    case Suite::lemma3: return "lemma3";
    case Suite::lemma4: return "lemma4";
    case Suite::lemma5: return "lemma5";
  }
  return "lemma1";
}

Suite suite_from_string(std::string_view name) {
  for (Suite s : {Suite::lemma1, Suite::lemma2, Suite::lemma3, Suite::lemma4, Suite::lemma5})
    if (to_string(s) == name) return s;
  throw Error("unknown suite '" + std::string(name) + "'");
}

bool ExperimentConfig::has(Suite s) const { return std::find(suites.begin(), suites.end(), s) != suites.end(); }

std::vector<double> ExperimentConfig::effective_schedule() const {
  if (!t_schedule.empty()) return t_schedule;
  return ModelFamily::default_schedule(params.t, models.size());
}

ModelFamily ExperimentConfig::family() const {
  if (models.empty()) throw Error("config has no models section");
  return ModelFamily(cls, models, effective_schedule(), params.eps);
}

void ExperimentConfig::validate() const {
  params.validate();
  if (cls.num_states() != distribution.size()) throw Error("state-space mismatch");
  if (trials < 1) throw Error("trial count must be at least 1");
  if (reps < 100) throw Error("EZ estimation needs at least 100 replications");
  if (series_points < 1 || z_probes < 1) throw Error("series and probe counts must be positive");
  if (has(Suite::lemma3) && cls.kind() != ClassKind::convex_parametric)
    throw Error("suite lemma3 needs a convex-parametric class");
  if ((has(Suite::lemma4) || has(Suite::lemma5)) && models.empty())
    throw Error("suites lemma4 and lemma5 need a models section");
  if (!models.empty()) (void)family();
  if (lemma1_delta && !(*lemma1_delta > 0.0)) throw Error("lemma1 delta must be positive");
}

CoverageRow coverage_row(double x, Index violations, Index trials, double unclipped_bound) {
  CoverageRow row;
  row.x = x;
  row.violations = violations;
  row.trials = trials;
  row.frequency = static_cast<double>(violations) / static_cast<double>(trials);
  row.se = std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(trials));
  row.vacuous = !(unclipped_bound <= 1.0);
  row.bound = std::clamp(unclipped_bound, 0.0, 1.0);
  row.passed = row.vacuous || row.frequency <= row.bound + 3.0 * row.se;
  return row;
}

bool SuiteReport::passed() const {
  if (!applicable) return true;
  for (const auto& [key, value] : notes)
    if (key.ends_with("_failures") && value != 0.0) return false;
  if (!headline.passed) return false;
  return std::all_of(series.begin(), series.end(), [](const CoverageRow& r) { return r.passed; });
}

bool CoverageReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.passed(); });
}

const SuiteReport* CoverageReport::find(Suite suite) const {
  for (const auto& s : suites)
    if (s.suite == suite) return &s;
  return nullptr;
}

namespace {

struct TrialContext {
  const ExperimentConfig& config;
  const SimulationResult& prepared;
  ClassProfile prof;
  std::optional<ModelFamily> family;
};

TrialRecord run_trial(const TrialContext& ctx, Index trial) {
  const ExperimentConfig& cfg = ctx.config;
  const BoundParams& params = cfg.params;
  const BoundPipeline& pipe = ctx.prepared.pipeline;
  const DiscreteDistribution& P = cfg.distribution;
  const auto trial_id = static_cast<std::uint64_t>(trial);

  TrialRecord rec;
  rec.trial = trial;
  const Sample sample = draw_sample(P, params.n, cfg.master_seed, trial_id, StreamRole::primary);
  const EmpiricalMeasure Pn(sample, P.size());
  const Vector emp = empirical_risks(Pn, cfg.cls);

  rec.z_probe = realized_Z(ctx.prof, emp, ctx.prepared.z_probe_sigma);
  const Index f_hat = argmin_lowest(emp);
  rec.excess_hat = ctx.prof.excess(f_hat);

  const double H = pipe.bound.H_value;
  const double delta_tn = pipe.bound.delta_tn;
  if (cfg.has(Suite::lemma1)) {
    rec.ratio = ratio_statistic(ctx.prof, emp, params, H, ctx.prepared.lemma1_delta);
    rec.lemma1_violation = rec.ratio >= params.q;
    for (double d : ctx.prepared.lemma1_deltas)
      rec.lemma1_series.push_back(ratio_statistic(ctx.prof, emp, params, H, d) >= params.q);
  }
  if (cfg.has(Suite::lemma2) || cfg.has(Suite::lemma3)) {
    const bool violated = rec.excess_hat > delta_tn;
    std::vector<bool> series;
    for (double d : ctx.prepared.lemma2_deltas) series.push_back(rec.excess_hat > d);
    if (cfg.has(Suite::lemma2)) {
      rec.lemma2_violation = violated;
      rec.lemma2_series = series;
    }
    if (cfg.has(Suite::lemma3)) {
      rec.lemma3_violation = violated;
      rec.lemma3_series = series;
      if (pipe.tau_n && *pipe.tau_n > 0.0) {
        const ParameterGrid& grid = *cfg.cls.parameters();
        const Vector theta_hat = grid.points.row(f_hat).transpose();
        const Vector theta_bar = grid.points.row(ctx.prof.minimizer).transpose();
        const Interpolation interp = interpolate_theta(theta_hat, theta_bar, *pipe.tau_n, grid.norm);
        rec.tau_tilde = norm_of(grid.norm, interp.theta - theta_bar);
        rec.interpolation_ok = rec.tau_tilde <= 2.0 * *pipe.tau_n + 1e-12;
      }
    }
  }

  if (ctx.family) {
    const ModelFamily& family = *ctx.family;
    const MarginTables& margins = *ctx.prepared.margins;
    const Sample split = draw_sample(P, params.n, cfg.master_seed, trial_id, StreamRole::split);
    const EmpiricalMeasure Pn_prime(split, P.size());

    SelectionRun run = run_selection(family, margins, P, Pn, Pn_prime);
    rec.fits = std::move(run.fits);
    rec.penalties = std::move(run.penalties);
    rec.selection = std::move(run.selection);
    rec.lemma5_per_model = std::move(run.lemma5_per_model);
    rec.decomposition_ok = run.decomposition_ok;
    rec.identity_ok = run.identity_ok;
  }
  return rec;
}

double smallest_positive(const Vector& v) {
  double best = kInfinity;
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) > 1e-15) best = std::min(best, v(i));
  return best;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

SimulationResult prepare(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  const Vector delta_grid = config.delta_grid.build();
  const Vector sigma_grid = config.sigma_grid.build();
  BoundPipeline pipe = build_bound_pipeline(config.distribution, config.cls, config.params, delta_grid, sigma_grid,
                                            config.reps, config.master_seed, workers);
  SimulationResult res{std::move(pipe), {}, 0.0, {}, {}, {}, {}, {}};
  if (!config.models.empty()) res.margins = build_margin_tables(config.distribution, config.family(), config.params.n);

  const ClassProfile prof = profile(config.distribution, unit_subclass(config.distribution, config.cls));
  const BoundParams& p = config.params;
  const double min_excess = smallest_positive(prof.excess);
  const double half_level = std::pow(p.q, 1.0 - 0.5 * std::exp(p.t));
  res.lemma1_delta = config.lemma1_delta.value_or(std::isfinite(min_excess) ? std::max(min_excess, half_level)
                                                                           : half_level);
  const double max_excess = prof.excess.maxCoeff();
  if (std::isfinite(min_excess) && max_excess > min_excess && config.series_points > 1)
    res.lemma1_deltas = to_std(geometric_grid(min_excess, max_excess, config.series_points));
  else
    res.lemma1_deltas = {res.lemma1_delta};

  const double dtn = res.pipeline.bound.delta_tn;
  if (std::isfinite(dtn) && dtn < 1.0 && config.series_points > 1)
    res.lemma2_deltas = to_std(geometric_grid(dtn, 1.0, config.series_points));
  else
    res.lemma2_deltas = {dtn};

  res.z_probe_sigma = config.z_probes > 1 ? geometric_grid(config.sigma_grid.lo, config.sigma_grid.hi, config.z_probes)
                                          : Vector::Constant(1, config.sigma_grid.hi);
  return res;
}

SimulationResult run_suite(const ExperimentConfig& config, unsigned workers) {
  SimulationResult res = prepare(config, workers);
  TrialContext ctx{config, res, profile(config.distribution, config.cls), {}};
  if (!config.models.empty()) ctx.family = config.family();

  res.records.resize(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, workers, [&](Index i) { res.records[static_cast<std::size_t>(i)] = run_trial(ctx, i); });

  const BoundParams& p = config.params;
  const Index T = config.trials;
  auto count = [&](auto pred) {
    Index c = 0;
    for (const auto& r : res.records) c += pred(r) ? 1 : 0;
    return c;
  };
  auto series_rows = [&](const std::vector<double>& deltas, auto member, auto bound_at) {
    std::vector<CoverageRow> rows;
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      const Index v = count([&](const TrialRecord& r) { return (r.*member)[j]; });
      rows.push_back(coverage_row(deltas[j], v, T, bound_at(deltas[j])));
    }
    return rows;
  };
  auto peeling = [&](double d) {
    const TailBound tb = peeling_tail(p.q, d, p.t);
    return tb.unclipped;
  };
  auto delta_bound = [&](double d) { return std::isfinite(d) ? peeling(d) : kInfinity; };

  for (Suite suite : config.suites) {
    SuiteReport rep;
    rep.suite = suite;
    switch (suite) {
      case Suite::lemma1: {
        rep.headline = coverage_row(res.lemma1_delta, count([](const TrialRecord& r) { return r.lemma1_violation; }),
                                    T, peeling(res.lemma1_delta));
        rep.series = series_rows(res.lemma1_deltas, &TrialRecord::lemma1_series, peeling);
        rep.notes.emplace_back("H_t", res.pipeline.bound.H_value);
        break;
      }
      case Suite::lemma2: {
        rep.headline = coverage_row(res.pipeline.bound.delta_tn,
                                    count([](const TrialRecord& r) { return r.lemma2_violation; }), T,
                                    delta_bound(res.pipeline.bound.delta_tn));
        rep.series = series_rows(res.lemma2_deltas, &TrialRecord::lemma2_series, delta_bound);
        break;
      }
      case Suite::lemma3: {
        rep.headline = coverage_row(res.pipeline.bound.delta_tn,
                                    count([](const TrialRecord& r) { return r.lemma3_violation; }), T,
                                    delta_bound(res.pipeline.bound.delta_tn));
        rep.series = series_rows(res.lemma2_deltas, &TrialRecord::lemma3_series, delta_bound);
        rep.applicable = res.pipeline.lemma3_hypotheses();
        rep.notes.emplace_back("tau_n", res.pipeline.tau_n.value_or(kInfinity));
        rep.notes.emplace_back("eta_n", p.eta_n);
        rep.notes.emplace_back("condition_bb", res.pipeline.bb && res.pipeline.bb->holds ? 1.0 : 0.0);
        rep.notes.emplace_back("condition_cc", res.pipeline.cc && res.pipeline.cc->holds ? 1.0 : 0.0);
        rep.notes.emplace_back("interpolation_failures",
                               static_cast<double>(count([](const TrialRecord& r) { return !r.interpolation_ok; })));
        break;
      }
      case Suite::lemma4: {
        const double budget = ctx.family->failure_budget();
        const Index invalid = count([](const TrialRecord& r) { return !r.selection.penalty_valid; });
        const double invalid_freq = static_cast<double>(invalid) / static_cast<double>(T);
        rep.x_label = "trial_set";
        rep.headline = coverage_row(0.0, count([](const TrialRecord& r) { return !r.selection.oracle.holds; }), T,
                                    budget + invalid_freq);
        rep.series = {rep.headline};
        rep.notes.emplace_back("failure_budget", budget);
        rep.notes.emplace_back("penalty_invalid_frequency", invalid_freq);
        rep.notes.emplace_back("negative_penalty_trials", static_cast<double>(count([](const TrialRecord& r) {
                                 return std::any_of(r.penalties.pi_hat.begin(), r.penalties.pi_hat.end(),
                                                    [](double v) { return v < 0.0; });
                               })));
        rep.notes.emplace_back("decomposition_failures",
                               static_cast<double>(count([](const TrialRecord& r) { return !r.decomposition_ok; })));
        rep.notes.emplace_back("identity_failures",
                               static_cast<double>(count([](const TrialRecord& r) { return !r.identity_ok; })));
        break;
      }
      case Suite::lemma5: {
        const ModelFamily& fam = *ctx.family;
        rep.x_label = "model";
        rep.headline = coverage_row(0.0, count([](const TrialRecord& r) { return !r.selection.lemma5_holds; }), T,
                                    fam.failure_budget());
        for (Index k = 0; k < fam.size(); ++k) {
          const auto kk = static_cast<std::size_t>(k);
          const Index v = count([&](const TrialRecord& r) { return !r.lemma5_per_model[kk]; });
          rep.series.push_back(coverage_row(static_cast<double>(k), v, T, std::exp(-fam.t_schedule()[kk])));
        }
        rep.notes.emplace_back("failure_budget", fam.failure_budget());
        break;
      }
    }
    res.coverage.suites.push_back(std::move(rep));
  }
  return res;
}

}  // namespace exrisk
