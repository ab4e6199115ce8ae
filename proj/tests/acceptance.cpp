// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "exrisk/config.hpp"
#include "exrisk/fixtures.hpp"
#include "exrisk/report.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace exrisk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string describe(const CoverageRow& r) {
  return fmt("freq=%.5f bound=%.5f se=%.5f%s", r.frequency, r.bound, r.se, r.vacuous ? " (vacuous)" : "");
}

bool rows_pass(const SuiteReport& s) {
  if (!(s.headline.frequency <= s.headline.bound + 3.0 * s.headline.se || s.headline.vacuous)) return false;
  for (const auto& r : s.series)
    if (!(r.frequency <= r.bound + 3.0 * r.se || r.vacuous)) return false;
  return s.passed();
}

// Shared runs: the bounded fixture backs criteria 1 and 2, the family backs 4, 5 and 8.
struct Runs {
  std::optional<SimulationResult> bounded;
  double bounded_seconds = 0.0;
  std::optional<SimulationResult> family;
  std::optional<ExperimentConfig> family_config;
};

Runs& runs() {
  static Runs r;
  return r;
}

const SimulationResult& bounded_run() {
  Runs& r = runs();
  if (!r.bounded) {
    ExperimentConfig cfg = fixture_config("random20");
    cfg.trials = 10000;
    cfg.reps = 10000;
    cfg.suites = {Suite::lemma1, Suite::lemma2};
    const auto t0 = std::chrono::steady_clock::now();
    r.bounded = run_suite(cfg);
    r.bounded_seconds = seconds_since(t0);
  }
  return *r.bounded;
}

const SimulationResult& family_run() {
  Runs& r = runs();
  if (!r.family) {
    ExperimentConfig cfg = fixture_config("nested3");
    cfg.trials = 10000;
    cfg.reps = 10000;
    cfg.t_schedule.assign(3, 2.0 + std::log(3.0));
    cfg.suites = {Suite::lemma4, Suite::lemma5};
    r.family_config = cfg;
    r.family = run_suite(cfg);
  }
  return *r.family;
}

Outcome ratio_coverage() {
  const SimulationResult& res = bounded_run();
  const SuiteReport& s = *res.coverage.find(Suite::lemma1);
  const double smallest = res.lemma1_deltas.front();
  const bool delta_ok = res.lemma1_delta >= smallest;
  const bool time_ok = runs().bounded_seconds <= 120.0;
  return {rows_pass(s) && delta_ok && time_ok,
          fmt("delta=%.4f %s, %zu series rows, %.1fs", res.lemma1_delta, describe(s.headline).c_str(), s.series.size(),
              runs().bounded_seconds)};
}

Outcome excess_coverage() {
  const SimulationResult& res = bounded_run();
  const SuiteReport& s = *res.coverage.find(Suite::lemma2);
  const bool finite = std::isfinite(res.pipeline.bound.delta_tn) && res.pipeline.ez.reps == 10000;
  const bool time_ok = runs().bounded_seconds <= 300.0;
  return {rows_pass(s) && finite && time_ok,
          fmt("delta_tn=%.4f H(1/eps)=%.4f %s, %.1fs", res.pipeline.bound.delta_tn, res.pipeline.bound.H_value,
              describe(s.headline).c_str(), runs().bounded_seconds)};
}

Outcome parametric_coverage() {
  ExperimentConfig cfg = fixture_config("quadratic");
  cfg.trials = 10000;
  cfg.reps = 10000;
  cfg.suites = {Suite::lemma3};
  const SimulationResult res = run_suite(cfg);
  const BoundPipeline& p = res.pipeline;
  const bool bb = p.bb && p.bb->holds;
  const bool cc = p.cc && p.cc->holds;
  const bool tau = p.tau_n && *p.tau_n <= cfg.params.eta_n / 2.0;
  const SuiteReport& s = *res.coverage.find(Suite::lemma3);
  return {bb && cc && tau && s.applicable && rows_pass(s),
          fmt("BB=%d CC=%d tau_n=%.4f eta_n/2=%.2f delta_tn=%.4f %s", bb, cc, p.tau_n.value_or(kInfinity),
              cfg.params.eta_n / 2.0, p.bound.delta_tn, describe(s.headline).c_str())};
}

Outcome split_event_coverage() {
  const SimulationResult& res = family_run();
  const SuiteReport& s = *res.coverage.find(Suite::lemma5);
  const ModelFamily fam = runs().family_config->family();
  double budget = 0.0;
  for (double t : fam.t_schedule()) budget += std::exp(-t);
  const bool budget_ok = std::abs(budget - std::exp(-2.0)) <= 1e-12;
  return {rows_pass(s) && budget_ok,
          fmt("sum exp(-t_k)=%.5f %s", budget, describe(s.headline).c_str())};
}

Outcome oracle_coverage() {
  const SimulationResult& res = family_run();
  const SuiteReport& s = *res.coverage.find(Suite::lemma4);
  double invalid = 0.0;
  double budget = 0.0;
  for (const auto& [k, v] : s.notes) {
    if (k == "penalty_invalid_frequency") invalid = v;
    if (k == "failure_budget") budget = v;
  }
  return {rows_pass(s), fmt("budget=%.5f invalid=%.5f %s", budget, invalid, describe(s.headline).c_str())};
}

double brute_conjugate(const TabulatedFunction& G, double v, double u_max, Index steps) {
  double best = -kInfinity;
  for (Index i = 0; i <= steps; ++i) {
    const double u = u_max * static_cast<double>(i) / static_cast<double>(steps);
    best = std::max(best, u * v - G(u));
  }
  return best;
}

Outcome conjugate_oracle() {
  std::mt19937_64 rng(20061018);
  std::uniform_real_distribution<double> step(0.05, 0.5), rise(0.0, 1.0);
  double worst_ratio = 0.0;
  bool ok = true;
  for (int rep = 0; rep < 10; ++rep) {
    const Index m = 8 + rep;
    Vector u(m), g(m);
    u(0) = g(0) = 0.0;
    double slope = rise(rng);
    for (Index i = 1; i < m; ++i) {
      u(i) = u(i - 1) + step(rng);
      g(i) = g(i - 1) + slope * (u(i) - u(i - 1));
      slope += rise(rng);
    }
    const TabulatedFunction G(u, g, Extrapolation::infinite);
    const double max_slope = G.slopes().maxCoeff();
    const Vector v_grid = linear_grid(0.0, max_slope, 64);
    const double grid_step = v_grid(1) - v_grid(0);
    const TabulatedFunction H = legendre_conjugate(G, v_grid);
    for (Index j = 0; j < H.size(); ++j) {
      const double brute = brute_conjugate(G, H.grid()(j), u.maxCoeff(), 20000);
      const double tol = 2.0 * grid_step * max_slope;
      const double err = std::abs(H.values()(j) - brute);
      worst_ratio = std::max(worst_ratio, err / tol);
      ok = ok && err <= tol;
    }
  }

  const Vector ug = linear_grid(0.0, 2.0, 201);
  const double h = 0.01;
  const TabulatedFunction sq(ug, ug.array().square().matrix(), Extrapolation::infinite);
  const TabulatedFunction half(ug, (0.5 * ug.array().square()).matrix(), Extrapolation::infinite);
  const TabulatedFunction sq_conj = legendre_conjugate(sq, linear_grid(0.0, 4.0, 41));
  const TabulatedFunction half_conj = legendre_conjugate(half, linear_grid(0.0, 2.0, 41));
  double analytic_err = 0.0;
  for (Index j = 0; j < sq_conj.size(); ++j) {
    const double v = sq_conj.grid()(j);
    analytic_err = std::max(analytic_err, std::abs(sq_conj.values()(j) - v * v / 4.0));
  }
  for (Index j = 0; j < half_conj.size(); ++j) {
    const double v = half_conj.grid()(j);
    analytic_err = std::max(analytic_err, std::abs(half_conj.values()(j) - v * v / 2.0));
  }
  Vector lu(2), lg(2);
  lu << 0.0, 1.0;
  lg << 0.0, 1.0;
  const TabulatedFunction lin_conj = legendre_conjugate(TabulatedFunction(lu, lg, Extrapolation::linear),
                                                        linear_grid(0.0, 2.0, 9));
  const bool linear_ok = lin_conj(0.5) == 0.0 && lin_conj(1.0) == 0.0 && std::isinf(lin_conj(1.5)) &&
                         lin_conj.extrapolation() == Extrapolation::infinite;
  ok = ok && analytic_err <= h * h && linear_ok;
  return {ok, fmt("worst error / tolerance=%.3g, analytic error=%.2g (grid step^2=%.0e), linear pair %s", worst_ratio,
                  analytic_err, h * h, linear_ok ? "ok" : "wrong")};
}

Outcome enumeration_oracle() {
  const ExperimentConfig cfg = fixture_config("two-point");
  const Index n = cfg.params.n;
  const Vector sigma = cfg.sigma_grid.build();
  const EZEstimate ez = estimate_EZ(cfg.distribution, cfg.cls, n, sigma, 10000, cfg.master_seed);

  // Z(s) = |0.4 K/n - 0.2| once s reaches sigma(f1 - fbar), else 0; K ~ Bin(n, 1/2).
  const ClassProfile prof = profile(cfg.distribution, cfg.cls);
  double exact = 0.0;
  for (Index k = 0; k <= n; ++k) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                           static_cast<double>(n) * std::log(2.0);
    exact += std::exp(log_pmf) * std::abs(0.4 * static_cast<double>(k) / static_cast<double>(n) - 0.2);
  }
  bool ok = true;
  double worst = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    const double truth = sigma(i) >= prof.sigma(1) ? exact : 0.0;
    const double err = std::abs(ez.mean(i) - truth);
    ok = ok && err <= 3.0 * ez.se(i);
    if (ez.se(i) > 0.0) worst = std::max(worst, err / ez.se(i));
  }
  return {ok, fmt("exact EZ=%.6f estimate=%.6f se=%.2g, worst |err|/se=%.2f over %td grid points", exact,
                  ez.mean(sigma.size() - 1), ez.se(sigma.size() - 1), worst, sigma.size())};
}

double fenchel_young_gap(const TabulatedFunction& G, const TabulatedFunction& H) {
  double worst = kInfinity;
  for (Index i = 0; i < G.size(); ++i)
    for (Index j = 0; j < H.size(); ++j)
      worst = std::min(worst, G.values()(i) + H.values()(j) - G.grid()(i) * H.grid()(j));
  return worst;
}

Outcome structural_identities() {
  const SimulationResult& fam = family_run();
  Index identity = 0, decomposition = 0;
  double worst_decomp = 0.0;
  for (const auto& r : fam.records) {
    for (Index k = 0; k < r.penalties.size(); ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (r.penalties.vacuous[kk]) continue;
      if (r.penalties.pi_hat[kk] != r.penalties.beta_hat[kk] + r.penalties.alpha[kk] + 2.0 * r.penalties.gamma[kk])
        ++identity;
    }
    const ModelFit& c = r.fits[static_cast<std::size_t>(r.selection.k_hat)];
    const double gap = std::abs(c.excess_star_hat - (c.E_k + c.excess_star_bar));
    worst_decomp = std::max(worst_decomp, gap);
    if (gap > 1e-12) ++decomposition;
  }

  double psi_gap = kInfinity;
  double fy_gap = kInfinity;
  for (const auto& name : fixture_names()) {
    ExperimentConfig cfg = fixture_config(name);
    cfg.reps = 2000;
    const SimulationResult prep = prepare(cfg);
    const BoundPipeline& p = prep.pipeline;
    psi_gap = std::min(psi_gap, (p.psi.values() - p.W.values()).minCoeff());
    fy_gap = std::min(fy_gap, fenchel_young_gap(p.psi_inv, p.H));
    if (prep.margins) {
      fy_gap = std::min(fy_gap, fenchel_young_gap(prep.margins->phi, prep.margins->phi_conj));
      for (std::size_t k = 0; k < prep.margins->phi_k.size(); ++k)
        fy_gap = std::min(fy_gap, fenchel_young_gap(prep.margins->phi_k[k], prep.margins->phi_k_conj[k]));
    }
  }
  const bool ok = identity == 0 && decomposition == 0 && psi_gap >= 0.0 && fy_gap >= -1e-12;
  return {ok, fmt("identity failures=%td, decomposition failures=%td (max gap %.1e), min(psi-W)=%.2e, "
                  "min Fenchel-Young slack=%.2e",
                  identity, decomposition, worst_decomp, psi_gap, fy_gap)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EXRISK_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "exrisk_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  nlohmann::json doc = {{"fixture", "nested3"},
                        {"simulation", {{"trials", 2000}, {"reps", 2000}, {"master_seed", 77}}},
                        {"suites", {"lemma1", "lemma2", "lemma4", "lemma5"}}};
  std::ofstream(dir / "config.json") << doc.dump(2);
  const std::string cfg = (dir / "config.json").string();
  const int a = run_cli("simulate --config " + cfg + " --workers 1 --out " + (dir / "a").string());
  const int b = run_cli("simulate --config " + cfg + " --workers 1 --out " + (dir / "b").string());
  const int c = run_cli("simulate --config " + cfg + " --workers 6 --out " + (dir / "c").string());
  const std::string ra = slurp(dir / "a" / "report.json"), ta = slurp(dir / "a" / "trials.jsonl");
  const bool same_run = ra == slurp(dir / "b" / "report.json") && ta == slurp(dir / "b" / "trials.jsonl");
  const bool same_workers = ra == slurp(dir / "c" / "report.json") && ta == slurp(dir / "c" / "trials.jsonl");
  const bool ok = a == 0 && b == 0 && c == 0 && !ra.empty() && !ta.empty() && same_run && same_workers;
  return {ok, fmt("exit codes %d/%d/%d, report %zu bytes, trial stream %zu bytes, rerun identical=%d, "
                  "1 vs 6 workers identical=%d",
                  a, b, c, ra.size(), ta.size(), same_run, same_workers)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "ratio-statistic tail coverage, random20", ratio_coverage},
      {2, "excess-risk tail coverage via EZ -> W -> psi -> H, random20", excess_coverage},
      {3, "parametric conditions and excess-risk coverage, quadratic", parametric_coverage},
      {4, "split-sample penalty event coverage, nested3", split_event_coverage},
      {5, "oracle inequality end to end, nested3", oracle_coverage},
      {6, "conjugate against brute force and analytic pairs", conjugate_oracle},
      {7, "EZ against exact binomial enumeration, two-point", enumeration_oracle},
      {8, "structural identities", structural_identities},
      {9, "byte-identical simulate output across runs and workers", determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.passed ? 0 : 1;
    std::printf("%s  criterion %d  %s  [%s] (%.1fs)\n", o.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
