#include "exrisk/report.hpp"

#include "exrisk/config.hpp"

#include <cstdio>
#include <fstream>

namespace exrisk {

using nlohmann::json;

namespace {

json array_of(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

json array_of(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json array_of(const std::vector<bool>& v) {
  json out = json::array();
  for (bool b : v) out.push_back(b);
  return out;
}

json condition_json(const ConditionCheck& c) {
  return {{"holds", c.holds},
          {"worst_member", c.worst_member},
          {"worst_state", c.worst_state},
          {"worst_slack", number(c.worst_slack)}};
}

json row_json(const CoverageRow& r) {
  return {{"x", number(r.x)},         {"violations", r.violations}, {"trials", r.trials},
          {"frequency", number(r.frequency)}, {"bound", number(r.bound)},   {"se", number(r.se)},
          {"vacuous", r.vacuous},     {"passed", r.passed}};
}

json series_json(const std::string& x_label, const std::string& y_label, const Vector& x, const Vector& y) {
  return {{"x_label", x_label}, {"y_label", y_label}, {"x", array_of(x)}, {"y", array_of(y)}};
}

Vector from_array(const json& j, const char* what) {
  if (!j.is_array()) throw Error(std::string("malformed report: ") + what + " is not an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      v(static_cast<Index>(i)) = read_number(j[i]);
    } catch (const Error&) {
      throw Error(std::string("malformed report: ") + what + " holds a non-number");
    }
  }
  return v;
}

}  // namespace

json tabulated_json(const TabulatedFunction& f) {
  return {{"grid", array_of(f.grid())},
          {"values", array_of(f.values())},
          {"extrapolation", std::string(to_string(f.extrapolation()))}};
}

TabulatedFunction tabulated_from_json(const json& j) {
  if (!j.is_object() || !j.contains("grid") || !j.contains("values") || !j.contains("extrapolation"))
    throw Error("malformed tabulation");
  return TabulatedFunction(from_array(j["grid"], "grid"), from_array(j["values"], "values"),
                           extrapolation_from_string(j["extrapolation"].get<std::string>()));
}

json bound_json(const ExcessRiskBound& b) {
  const TailBound tail = std::isfinite(b.delta_tn) ? peeling_tail(b.params.q, b.delta_tn, b.params.t) : TailBound{};
  return {{"delta_tn", number(b.delta_tn)},
          {"tail_prob", number(b.tail_prob)},
          {"tail_unclipped", number(tail.unclipped)},
          {"vacuous", b.vacuous},
          {"H_at_inverse_eps", number(b.H_value)},
          {"t", number(b.params.t)},
          {"q", number(b.params.q)},
          {"eps", number(b.params.eps)},
          {"n", b.params.n}};
}

json pipeline_json(const BoundPipeline& p) {
  json out = {{"delta_grid", array_of(p.delta_grid)},
              {"ez",
               {{"sigma_grid", array_of(p.ez.sigma_grid)},
                {"mean", array_of(p.ez.mean)},
                {"se", array_of(p.ez.se)},
                {"reps", p.ez.reps}}},
              {"D", tabulated_json(p.D)},
              {"W", tabulated_json(p.W)},
              {"psi", tabulated_json(p.psi)},
              {"psi_inverse", tabulated_json(p.psi_inv)},
              {"H", tabulated_json(p.H)},
              {"D_bold", p.D_bold ? tabulated_json(*p.D_bold) : json(nullptr)},
              {"condition_bb", p.bb ? condition_json(*p.bb) : json(nullptr)},
              {"condition_cc", p.cc ? condition_json(*p.cc) : json(nullptr)}};
  return out;
}

json margins_json(const MarginTables& m) {
  json phi_k = json::array();
  json phi_k_conj = json::array();
  json alpha = json::array();
  json gamma = json::array();
  for (std::size_t k = 0; k < m.phi_k.size(); ++k) {
    phi_k.push_back(tabulated_json(m.phi_k[k]));
    phi_k_conj.push_back(tabulated_json(m.phi_k_conj[k]));
    alpha.push_back({{"value", number(m.alpha[k].value)}, {"vacuous", m.alpha[k].vacuous}});
    gamma.push_back({{"value", number(m.gamma[k].value)}, {"vacuous", m.gamma[k].vacuous}});
  }
  return {{"phi", tabulated_json(m.phi)}, {"phi_conjugate", tabulated_json(m.phi_conj)},
          {"phi_k", phi_k},               {"phi_k_conjugate", phi_k_conj},
          {"alpha", alpha},               {"gamma", gamma}};
}

json coverage_json(const CoverageReport& c) {
  json out = json::array();
  for (const auto& s : c.suites) {
    json series = json::array();
    for (const auto& r : s.series) series.push_back(row_json(r));
    json notes = json::object();
    for (const auto& [k, v] : s.notes) notes[k] = number(v);
    out.push_back({{"suite", std::string(to_string(s.suite))},
                   {"x_label", s.x_label},
                   {"applicable", s.applicable},
                   {"passed", s.passed()},
                   {"headline", row_json(s.headline)},
                   {"series", series},
                   {"notes", notes}});
  }
  return out;
}

json report_document(const ExperimentConfig& config, const SimulationResult& result) {
  const BoundPipeline& p = result.pipeline;
  json plot = json::object();
  plot["ez"] = series_json("sigma", "EZ", p.ez.sigma_grid, p.ez.mean);
  plot["psi"] = series_json("delta", "psi", p.delta_grid, p.psi(p.delta_grid));
  plot["W"] = series_json("delta", "W", p.delta_grid, p.W.values());
  plot["D"] = series_json("delta", "D", p.delta_grid, p.D(p.delta_grid));
  for (const auto& s : result.coverage.suites) {
    const std::vector<CoverageRow>& rows = s.series.empty() ? std::vector<CoverageRow>{s.headline} : s.series;
    Vector x(static_cast<Index>(rows.size())), bound(x.size()), freq(x.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x(static_cast<Index>(i)) = rows[i].x;
      bound(static_cast<Index>(i)) = rows[i].bound;
      freq(static_cast<Index>(i)) = rows[i].frequency;
    }
    const std::string name(to_string(s.suite));
    plot[name + "_bound"] = series_json(s.x_label, "bound", x, bound);
    plot[name + "_frequency"] = series_json(s.x_label, "frequency", x, freq);
  }

  return {{"config", emit_config(config)},
          {"bound", bound_json(p.bound)},
          {"tau_n", p.tau_n ? number(*p.tau_n) : json(nullptr)},
          {"lemma3_hypotheses", p.tau_n ? json(p.lemma3_hypotheses()) : json(nullptr)},
          {"lemma1_delta", number(result.lemma1_delta)},
          {"pipeline", pipeline_json(p)},
          {"margins", result.margins ? margins_json(*result.margins) : json(nullptr)},
          {"coverage", coverage_json(result.coverage)},
          {"all_passed", result.coverage.all_passed()},
          {"plot", plot}};
}

json trial_json(const ExperimentConfig& config, const TrialRecord& r) {
  json out = {{"trial", r.trial}, {"z_probe", array_of(r.z_probe)}, {"excess_hat", number(r.excess_hat)}};
  if (config.has(Suite::lemma1)) {
    out["ratio"] = number(r.ratio);
    out["lemma1_violation"] = r.lemma1_violation;
    out["lemma1_series"] = array_of(r.lemma1_series);
  }
  if (config.has(Suite::lemma2)) {
    out["lemma2_violation"] = r.lemma2_violation;
    out["lemma2_series"] = array_of(r.lemma2_series);
  }
  if (config.has(Suite::lemma3)) {
    out["lemma3_violation"] = r.lemma3_violation;
    out["tau_tilde"] = number(r.tau_tilde);
    out["interpolation_ok"] = r.interpolation_ok;
  }
  if (!r.fits.empty()) {
    json models = json::array();
    for (std::size_t k = 0; k < r.fits.size(); ++k) {
      const ModelFit& f = r.fits[k];
      models.push_back({{"f_hat", f.f_hat},
                        {"f_hat_prime", f.f_hat_prime},
                        {"Pn_f_hat", number(f.Pn_f_hat)},
                        {"beta_hat", number(r.penalties.beta_hat[k])},
                        {"pi_hat", number(r.penalties.pi_hat[k])},
                        {"objective", number(r.selection.objective[k])},
                        {"lemma5", static_cast<bool>(r.lemma5_per_model[k])}});
    }
    out["models"] = models;
    out["k_hat"] = r.selection.k_hat;
    out["oracle"] = {{"lhs", number(r.selection.oracle.lhs)},
                     {"rhs", number(r.selection.oracle.rhs)},
                     {"holds", r.selection.oracle.holds}};
    out["penalty_valid"] = r.selection.penalty_valid;
    out["lemma5_holds"] = r.selection.lemma5_holds;
    out["decomposition_ok"] = r.decomposition_ok;
    out["identity_ok"] = r.identity_ok;
  }
  return out;
}

void write_trial_stream(std::ostream& out, const ExperimentConfig& config, const std::vector<TrialRecord>& records) {
  for (const auto& r : records) out << trial_json(config, r).dump() << '\n';
}

json selection_document(const ExperimentConfig& config, const ModelFamily& family, const MarginTables& margins,
                        const SelectionRun& run) {
  json models = json::array();
  for (Index k = 0; k < family.size(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const ModelFit& f = run.fits[kk];
    models.push_back({{"k", k},
                      {"size", family.model(k).size()},
                      {"t_k", number(family.t_schedule()[kk])},
                      {"f_hat", family.indices(k)[static_cast<std::size_t>(f.f_hat)]},
                      {"Pn_f_hat", number(f.Pn_f_hat)},
                      {"alpha", number(run.penalties.alpha[kk])},
                      {"gamma", number(run.penalties.gamma[kk])},
                      {"beta_hat", number(run.penalties.beta_hat[kk])},
                      {"pi_hat", number(run.penalties.pi_hat[kk])},
                      {"vacuous", static_cast<bool>(run.penalties.vacuous[kk])},
                      {"objective", number(run.selection.objective[kk])},
                      {"excess_f_bar", number(f.excess_star_bar)},
                      {"excess_f_hat", number(f.excess_star_hat)},
                      {"lemma5", static_cast<bool>(run.lemma5_per_model[kk])}});
  }
  return {{"config", emit_config(config)},
          {"models", models},
          {"k_hat", run.selection.k_hat},
          {"oracle",
           {{"lhs", number(run.selection.oracle.lhs)},
            {"rhs", number(run.selection.oracle.rhs)},
            {"holds", run.selection.oracle.holds}}},
          {"penalty_valid", run.selection.penalty_valid},
          {"lemma5_holds", run.selection.lemma5_holds},
          {"failure_budget", number(family.failure_budget())},
          {"margins", margins_json(margins)}};
}

std::vector<PlotSeries> plot_series(const json& report) {
  if (!report.is_object()) throw Error("malformed report: not an object");
  auto it = report.find("plot");
  if (it == report.end() || !it->is_object()) throw Error("malformed report: no plot section");
  std::vector<PlotSeries> out;
  for (const auto& [name, s] : it->items()) {
    if (!s.is_object() || !s.contains("x") || !s.contains("y")) throw Error("malformed report: series " + name);
    const Vector x = from_array(s["x"], "series x");
    const Vector y = from_array(s["y"], "series y");
    if (x.size() != y.size()) throw Error("malformed report: series " + name + " has unequal columns");
    PlotSeries ps{name, s.value("x_label", std::string("x")), s.value("y_label", std::string("y")), {}};
    for (Index i = 0; i < x.size(); ++i) ps.points.push_back({x(i), y(i)});
    out.push_back(std::move(ps));
  }
  return out;
}

std::string format_series(const PlotSeries& s) {
  std::string out = "# " + s.x_label + " " + s.y_label + "\n";
  char buf[64];
  for (const auto& [x, y] : s.points) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x, y);
    out += buf;
  }
  return out;
}

std::vector<std::filesystem::path> write_plot_series(const std::filesystem::path& dir,
                                                     const std::vector<PlotSeries>& series) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& s : series) {
    auto path = dir / (s.name + ".dat");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << format_series(s);
    paths.push_back(std::move(path));
  }
  return paths;
}

int simulation_exit_code(const CoverageReport& coverage) {
  if (!coverage.all_passed()) return 4;
  const auto all_vacuous = [](const SuiteReport& s) {
    return s.headline.vacuous && std::all_of(s.series.begin(), s.series.end(), [](const CoverageRow& r) { return r.vacuous; });
  };
  const auto& suites = coverage.suites;
  if (!suites.empty() && std::all_of(suites.begin(), suites.end(), all_vacuous)) return 3;
  return 0;
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace exrisk
