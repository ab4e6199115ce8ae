#ifndef EXRISK_MONTECARLO_HPP
#define EXRISK_MONTECARLO_HPP

#include "exrisk/bounds.hpp"
#include "exrisk/margin.hpp"
#include "exrisk/measures.hpp"
#include "exrisk/selection.hpp"
#include "exrisk/tabulated.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace exrisk {

// ---------------------------------------------------------------------------
// Seeding

/// Which independent stream a sample belongs to.
enum class StreamRole : std::uint64_t { primary = 0, split = 1, ez = 2 };

std::uint64_t splitmix64(std::uint64_t x);

/// Key of the stream for (master seed, trial index, role). Streams depend only
/// on these three values, never on scheduling.
std::uint64_t stream_key(std::uint64_t master, std::uint64_t index, StreamRole role);

/// Counter-based generator: output i is splitmix64(key + i * golden).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

Sample draw_sample(const DiscreteDistribution& P, Index n, std::uint64_t master, std::uint64_t trial,
                   StreamRole role);

/// Runs body(i) for i in [0, count) on `workers` threads (0: hardware).
void parallel_for(Index count, unsigned workers, const std::function<void(Index)>& body);

// ---------------------------------------------------------------------------
// Empirical process

/// Z(sigma) = sup over {f : sigma(f - fbar) <= sigma, |f - fbar| <= 1} of
/// |(P_n - P)(f - fbar)| for each grid sigma; 0 over an empty set.
Vector realized_Z(const ClassProfile& prof, const Vector& empirical_risk, const Vector& sigma_grid);
Vector realized_Z(const DiscreteDistribution& P, const FunctionClass& F, const EmpiricalMeasure& Pn,
                  const Vector& sigma_grid);

struct EZEstimate {
  Vector sigma_grid;
  Vector mean;
  Vector se;
  Index reps = 0;

  TabulatedFunction mean_function() const;
  /// mean + 2 se, made nondecreasing by a running max; clamped outside the grid.
  TabulatedFunction upper() const;
};

EZEstimate estimate_EZ(const DiscreteDistribution& P, const FunctionClass& F, Index n, const Vector& sigma_grid,
                       Index reps, std::uint64_t master_seed, unsigned workers = 0);

// ---------------------------------------------------------------------------
// Distribution-dependent bound construction

struct GridSpec {
  double lo = 1e-4;
  double hi = 1.0;
  Index points = 256;

  Vector build() const { return geometric_grid(lo, hi, points); }
  bool operator==(const GridSpec&) const = default;
};

/// EZ -> W_t(D(delta)) -> psi_t -> psi_t^{-1} -> H_t -> delta_tn, plus tau_n and
/// the unbounded-loss conditions for convex-parametric classes.
struct BoundPipeline {
  Vector delta_grid;
  EZEstimate ez;
  TabulatedFunction D;
  /// W at delta_i uses D at the next grid point, so it bounds W on the whole cell.
  TabulatedFunction W;
  TabulatedFunction psi;
  TabulatedFunction psi_inv;
  TabulatedFunction H;
  ExcessRiskBound bound;

  std::optional<TabulatedFunction> D_bold;
  std::optional<double> tau_n;
  std::optional<ConditionCheck> bb;
  std::optional<ConditionCheck> cc;

  /// BB, CC and tau_n <= eta_n / 2 all hold.
  bool lemma3_hypotheses() const;
};

/// Members with |f - fbar| <= 1.
FunctionClass unit_subclass(const DiscreteDistribution& P, const FunctionClass& F);

BoundPipeline build_bound_pipeline(const DiscreteDistribution& P, const FunctionClass& F, const BoundParams& params,
                                   const Vector& delta_grid, const Vector& sigma_grid, Index reps,
                                   std::uint64_t master_seed, unsigned workers = 0);

/// Envelopes, conjugates and the deterministic penalty parts of a family.
struct MarginTables {
  TabulatedFunction phi;
  TabulatedFunction phi_conj;
  std::vector<TabulatedFunction> phi_k;
  std::vector<TabulatedFunction> phi_k_conj;
  std::vector<PenaltyTerm> alpha;
  std::vector<PenaltyTerm> gamma;
};

MarginTables build_margin_tables(const DiscreteDistribution& P, const ModelFamily& family, Index n);

/// One selection on a pair of half samples, with the per-realization checks.
struct SelectionRun {
  std::vector<ModelFit> fits;
  PenaltySchedule penalties;
  SelectionResult selection;
  std::vector<bool> lemma5_per_model;
  bool decomposition_ok = true;
  bool identity_ok = true;
};

SelectionRun run_selection(const ModelFamily& family, const MarginTables& margins, const DiscreteDistribution& P,
                           const EmpiricalMeasure& Pn, const EmpiricalMeasure& Pn_prime);

// ---------------------------------------------------------------------------
// Experiments

enum class Suite { lemma1, lemma2, lemma3, lemma4, lemma5 };

std::string_view to_string(Suite suite);
Suite suite_from_string(std::string_view name);

struct ExperimentConfig {
  std::string fixture;
  DiscreteDistribution distribution;
  FunctionClass cls;
  double class_scale = 1.0;
  std::vector<std::vector<Index>> models;
  BoundParams params;
  std::vector<double> t_schedule;  // empty: t + log K per model
  std::optional<double> lemma1_delta;
  Index trials = 10000;
  Index reps = 10000;
  std::uint64_t master_seed = 20061018;
  GridSpec delta_grid;
  GridSpec sigma_grid;
  Index series_points = 12;
  Index z_probes = 8;
  std::vector<Suite> suites;

  bool has(Suite s) const;
  std::vector<double> effective_schedule() const;
  ModelFamily family() const;
  /// Throws on inconsistent settings (unknown suite needs, bad counts).
  void validate() const;
};

struct TrialRecord {
  Index trial = 0;
  Vector z_probe;
  double ratio = 0.0;
  double excess_hat = 0.0;
  bool lemma1_violation = false;
  bool lemma2_violation = false;
  bool lemma3_violation = false;
  double tau_tilde = 0.0;
  bool interpolation_ok = true;
  std::vector<bool> lemma1_series;
  std::vector<bool> lemma2_series;
  std::vector<bool> lemma3_series;

  std::vector<ModelFit> fits;
  PenaltySchedule penalties;
  SelectionResult selection;
  std::vector<bool> lemma5_per_model;
  bool decomposition_ok = true;
  bool identity_ok = true;
};

struct CoverageRow {
  double x = 0.0;  // delta, or the model index for per-model rows
  Index violations = 0;
  Index trials = 0;
  double frequency = 0.0;
  double bound = 1.0;
  double se = 0.0;
  bool vacuous = false;
  bool passed = true;
};

/// freq, se and the pass flag for a count against a clipped bound.
CoverageRow coverage_row(double x, Index violations, Index trials, double unclipped_bound);

struct SuiteReport {
  Suite suite = Suite::lemma1;
  std::string x_label = "delta";
  CoverageRow headline;
  std::vector<CoverageRow> series;
  bool applicable = true;  // hypotheses of the suite hold
  std::vector<std::pair<std::string, double>> notes;

  bool passed() const;
};

struct CoverageReport {
  std::vector<SuiteReport> suites;

  bool all_passed() const;
  const SuiteReport* find(Suite suite) const;
};

struct SimulationResult {
  BoundPipeline pipeline;
  std::optional<MarginTables> margins;
  double lemma1_delta = 0.0;
  Vector z_probe_sigma;
  std::vector<double> lemma1_deltas;
  std::vector<double> lemma2_deltas;
  CoverageReport coverage;
  std::vector<TrialRecord> records;
};

/// The bound pipeline plus (for families) the margin tables, without trials.
SimulationResult prepare(const ExperimentConfig& config, unsigned workers = 0);

/// Runs every enabled suite. Deterministic in (config, master seed) for any
/// worker count.
SimulationResult run_suite(const ExperimentConfig& config, unsigned workers = 0);

}  // namespace exrisk

#endif  // EXRISK_MONTECARLO_HPP
