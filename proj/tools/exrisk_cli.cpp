// exrisk: excess-risk bounds, penalized selection and coverage simulation.
//
//   exrisk bound    --config cfg.json [--out dir]
//   exrisk simulate --config cfg.json --out dir [--seed s] [--trials n] [--suite lemma2 ...]
//   exrisk select   --config cfg.json [--sample a.txt --sample-prime b.txt] [--seed s]
//   exrisk plotdata --report dir/report.json --out dir
//
// Exit codes: 0 ok, 2 config/input error, 3 only vacuous bounds, 4 a bound was violated.

#include "exrisk/config.hpp"
#include "exrisk/fixtures.hpp"
#include "exrisk/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace exrisk;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfigError = 2, kVacuousOnly = 3, kViolation = 4 };

struct Options {
  std::string config;
  std::string fixture;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<Index> trials;
  std::vector<std::string> suites;
  unsigned workers = 0;
  std::string sample;
  std::string sample_prime;
  std::string report;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = [&] {
    if (!o.config.empty()) return load_config(o.config);
    if (!o.fixture.empty()) return parse_config(nlohmann::json{{"fixture", o.fixture}});
    throw ConfigError("", "one of --config or --fixture is required");
  }();
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (!o.suites.empty()) {
    cfg.suites.clear();
    for (const auto& name : o.suites) {
      try {
        const Suite s = suite_from_string(name);
        if (!cfg.has(s)) cfg.suites.push_back(s);
      } catch (const Error& e) {
        throw ConfigError("/suites", e.what());
      }
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void emit(const Options& o, const std::string& file, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    write_file(fs::path(o.out) / file, text);
}

int cmd_bound(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const SimulationResult res = prepare(cfg, o.workers);
  emit(o, "report.json", dump_document(report_document(cfg, res)));
  const ExcessRiskBound& b = res.pipeline.bound;
  std::cerr << "delta_tn " << b.delta_tn << "  tail " << b.tail_prob << (b.vacuous ? "  (vacuous)" : "") << '\n';
  if (b.vacuous) {
    std::cerr << "warning: the tail bound is vacuous\n";
    return kVacuousOnly;
  }
  return kOk;
}

int cmd_simulate(const Options& o) {
  const ExperimentConfig cfg = load(o);
  if (o.out.empty()) throw ConfigError("", "simulate needs --out");
  const SimulationResult res = run_suite(cfg, o.workers);
  write_file(fs::path(o.out) / "report.json", dump_document(report_document(cfg, res)));
  std::ostringstream trials;
  write_trial_stream(trials, cfg, res.records);
  write_file(fs::path(o.out) / "trials.jsonl", trials.str());

  for (const auto& s : res.coverage.suites) {
    std::cerr << to_string(s.suite) << ": freq " << s.headline.frequency << " bound " << s.headline.bound
              << (s.headline.vacuous ? " (vacuous)" : "") << (s.applicable ? "" : " (not applicable)")
              << (s.passed() ? "  ok" : "  VIOLATED") << '\n';
  }
  const int code = simulation_exit_code(res.coverage);
  if (code == kVacuousOnly) std::cerr << "warning: every bound is vacuous\n";
  return code;
}

EmpiricalMeasure read_sample(const std::string& path, const DiscreteDistribution& P) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open sample file");
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(P.size());
  std::string token;
  while (in >> token) {
    Index s = -1;
    for (Index i = 0; i < P.size(); ++i)
      if (P.states()[static_cast<std::size_t>(i)] == token) s = i;
    if (s < 0) {
      try {
        std::size_t used = 0;
        s = std::stol(token, &used);
        if (used != token.size()) s = -1;
      } catch (const std::exception&) {
        s = -1;
      }
    }
    if (s < 0 || s >= P.size()) throw ConfigError(path, "unknown state '" + token + "'");
    ++counts(s);
  }
  try {
    return EmpiricalMeasure(counts);
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

int cmd_select(const Options& o) {
  const ExperimentConfig cfg = load(o);
  if (cfg.models.empty()) throw ConfigError("/models", "select needs a models section");
  if (o.sample.empty() != o.sample_prime.empty())
    throw ConfigError("", "--sample and --sample-prime go together");
  const ModelFamily family = cfg.family();
  const auto draw = [&](StreamRole role) {
    return EmpiricalMeasure(draw_sample(cfg.distribution, cfg.params.n, cfg.master_seed, 0, role),
                            cfg.distribution.size());
  };
  const EmpiricalMeasure Pn = o.sample.empty() ? draw(StreamRole::primary) : read_sample(o.sample, cfg.distribution);
  const EmpiricalMeasure Pn_prime =
      o.sample_prime.empty() ? draw(StreamRole::split) : read_sample(o.sample_prime, cfg.distribution);
  if (Pn.n() != Pn_prime.n()) throw ConfigError("", "half samples differ in size");

  const MarginTables margins = build_margin_tables(cfg.distribution, family, Pn.n());
  const SelectionRun run = run_selection(family, margins, cfg.distribution, Pn, Pn_prime);
  emit(o, "selection.json", dump_document(selection_document(cfg, family, margins, run)));

  std::cerr << "k_hat " << run.selection.k_hat << "  oracle " << run.selection.oracle.lhs
            << " <= " << run.selection.oracle.rhs << (run.selection.oracle.holds ? "  holds" : "  fails") << '\n';
  return kOk;
}

int cmd_plotdata(const Options& o) {
  if (o.report.empty()) throw ConfigError("", "plotdata needs --report");
  if (o.out.empty()) throw ConfigError("", "plotdata needs --out");
  std::ifstream in(o.report);
  if (!in) throw ConfigError(o.report, "cannot open report");
  nlohmann::json doc;
  std::vector<PlotSeries> series;
  try {
    doc = nlohmann::json::parse(in);
    series = plot_series(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(o.report, e.what());
  } catch (const Error& e) {
    throw ConfigError(o.report, e.what());
  }
  for (const auto& path : write_plot_series(o.out, series)) std::cout << path.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excess-risk bounds, penalized model selection and coverage simulation"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "config document (JSON)");
    sub->add_option("--fixture", o.fixture, "built-in fixture instead of a config");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "master seed (overrides the config)");
    sub->add_option("--workers", o.workers, "worker threads, 0 for all cores");
  };
  auto* bound = app.add_subcommand("bound", "tabulate the bound pipeline without trials");
  add_common(bound);
  auto* simulate = app.add_subcommand("simulate", "run the coverage suites");
  add_common(simulate);
  simulate->add_option("--trials", o.trials, "number of trials (overrides the config)");
  simulate->add_option("--suite", o.suites, "suite to run, repeatable (overrides the config)");
  auto* select = app.add_subcommand("select", "one penalized selection on given or seeded half samples");
  add_common(select);
  select->add_option("--sample", o.sample, "first half sample: state labels or indices");
  select->add_option("--sample-prime", o.sample_prime, "second half sample");
  auto* plotdata = app.add_subcommand("plotdata", "write plot series from a report");
  plotdata->add_option("--report", o.report, "report document");
  plotdata->add_option("--out", o.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*bound) return cmd_bound(o);
    if (*simulate) return cmd_simulate(o);
    if (*select) return cmd_select(o);
    return cmd_plotdata(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
