#include "exrisk/config.hpp"

#include "exrisk/fixtures.hpp"

#include <fstream>
#include <sstream>

namespace exrisk {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "/" + key, "missing field");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  try {
    return read_number(j);
  } catch (const Error&) {
    throw ConfigError(path, "expected a number");
  }
}

Index as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<Index>();
}

Vector as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = as_double(j[i], path + "/" + std::to_string(i));
  return v;
}

Matrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    const Vector row = as_vector(j[r], rp);
    if (static_cast<std::size_t>(row.size()) != cols) throw ConfigError(rp, "rows differ in length");
    m.row(static_cast<Index>(r)) = row.transpose();
  }
  return m;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

// Fixture sections fill in what the document leaves out; params and
// simulation merge field by field.
json with_fixture(const json& doc) {
  auto it = doc.find("fixture");
  if (it == doc.end()) return doc;
  if (!it->is_string()) throw ConfigError("/fixture", "expected a string");
  const std::string name = it->get<std::string>();
  const auto names = fixture_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    if (name.empty() || name == "custom") return doc;
    throw ConfigError("/fixture", "unknown fixture '" + name + "'");
  }
  json merged = fixture_document(name);
  for (const auto& [key, value] : doc.items()) {
    if ((key == "params" || key == "simulation") && value.is_object() && merged.contains(key)) {
      for (const auto& [k2, v2] : value.items()) merged[key][k2] = v2;
    } else {
      merged[key] = value;
    }
  }
  return merged;
}

DiscreteDistribution parse_distribution(const json& j) {
  const std::string path = "/distribution";
  const Vector w = as_vector(require(j, "weights", path), path + "/weights");
  std::vector<std::string> states;
  if (j.contains("states")) {
    const json& s = j["states"];
    if (!s.is_array()) throw ConfigError(path + "/states", "expected an array");
    for (const auto& x : s) states.push_back(x.is_string() ? x.get<std::string>() : x.dump());
  } else {
    for (Index i = 0; i < w.size(); ++i) states.push_back(std::to_string(i));
  }
  try {
    return DiscreteDistribution(std::move(states), w);
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

RescaledClass parse_class(const json& j, const DiscreteDistribution& P) {
  const std::string path = "/class";
  const std::string kind = j.value("kind", std::string("finite"));
  const double prior_scale = j.contains("scale") ? as_double(j["scale"], path + "/scale") : 1.0;
  try {
    std::optional<FunctionClass> cls;
    if (kind == "finite") {
      cls.emplace(as_matrix(require(j, "members", path), path + "/members"));
    } else if (kind == "convex-parametric") {
      if (j.value("loss", std::string()) == "quadratic") {
        cls.emplace(quadratic_class(as_vector(require(j, "state_values", path), path + "/state_values"),
                                    as_vector(require(j, "theta_grid", path), path + "/theta_grid")));
      } else {
        ParameterGrid grid{as_matrix(require(j, "parameters", path), path + "/parameters"),
                           norm_from_string(j.value("norm", std::string("abs")))};
        cls.emplace(as_matrix(require(j, "members", path), path + "/members"), std::move(grid));
      }
    } else {
      throw ConfigError(path + "/kind", "expected 'finite' or 'convex-parametric'");
    }
    if (cls->num_states() != P.size()) throw ConfigError(path + "/members", "state-space mismatch");
    RescaledClass out = rescale_to_unit(*cls, P);
    out.scale *= prior_scale;
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

GridSpec parse_grid(const json& j, const std::string& path, GridSpec fallback) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("lo")) fallback.lo = as_double(j["lo"], path + "/lo");
  if (j.contains("hi")) fallback.hi = as_double(j["hi"], path + "/hi");
  if (j.contains("points")) fallback.points = as_index(j["points"], path + "/points");
  if (!(fallback.lo > 0.0 && fallback.hi > fallback.lo && fallback.points >= 2))
    throw ConfigError(path, "grid needs 0 < lo < hi and at least 2 points");
  return fallback;
}

json grid_json(const GridSpec& g) { return {{"lo", number(g.lo)}, {"hi", number(g.hi)}, {"points", g.points}}; }

}  // namespace

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error("expected a number");
}

ExperimentConfig parse_config(const json& input) {
  if (!input.is_object()) throw ConfigError("", "config document must be an object");
  const json doc = with_fixture(input);

  DiscreteDistribution P = parse_distribution(require(doc, "distribution", ""));
  RescaledClass rc = parse_class(require(doc, "class", ""), P);

  std::vector<std::vector<Index>> models;
  if (doc.contains("models")) {
    const json& m = doc["models"];
    if (!m.is_array()) throw ConfigError("/models", "expected an array of index lists");
    for (std::size_t k = 0; k < m.size(); ++k) {
      const std::string mp = "/models/" + std::to_string(k);
      if (!m[k].is_array()) throw ConfigError(mp, "expected an array of member indices");
      std::vector<Index> idx;
      for (std::size_t i = 0; i < m[k].size(); ++i) {
        const Index v = as_index(m[k][i], mp + "/" + std::to_string(i));
        if (v < 0 || v >= rc.cls.size()) throw ConfigError(mp + "/" + std::to_string(i), "member index out of range");
        idx.push_back(v);
      }
      if (idx.empty()) throw ConfigError(mp, "model is empty");
      models.push_back(std::move(idx));
    }
  }

  ExperimentConfig cfg{.fixture = doc.value("fixture", std::string("custom")),
                       .distribution = std::move(P),
                       .cls = std::move(rc.cls),
                       .class_scale = rc.scale,
                       .models = std::move(models)};

  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (!p.is_object()) throw ConfigError("/params", "expected an object");
    if (p.contains("t")) cfg.params.t = as_double(p["t"], "/params/t");
    if (p.contains("q")) cfg.params.q = as_double(p["q"], "/params/q");
    if (p.contains("eps")) cfg.params.eps = as_double(p["eps"], "/params/eps");
    if (p.contains("eps_bar")) cfg.params.eps_bar = as_double(p["eps_bar"], "/params/eps_bar");
    if (p.contains("eta_n")) cfg.params.eta_n = as_double(p["eta_n"], "/params/eta_n");
    if (p.contains("n")) cfg.params.n = as_index(p["n"], "/params/n");
    if (p.contains("t_schedule")) {
      const Vector ts = as_vector(p["t_schedule"], "/params/t_schedule");
      cfg.t_schedule.assign(ts.data(), ts.data() + ts.size());
    }
    if (p.contains("lemma1_delta") && !p["lemma1_delta"].is_null())
      cfg.lemma1_delta = as_double(p["lemma1_delta"], "/params/lemma1_delta");
  }
  if (doc.contains("simulation")) {
    const json& s = doc["simulation"];
    if (!s.is_object()) throw ConfigError("/simulation", "expected an object");
    if (s.contains("trials")) cfg.trials = as_index(s["trials"], "/simulation/trials");
    if (s.contains("reps")) cfg.reps = as_index(s["reps"], "/simulation/reps");
    if (s.contains("master_seed")) {
      if (!s["master_seed"].is_number_integer() || s["master_seed"].is_number_float())
        throw ConfigError("/simulation/master_seed", "expected an unsigned integer");
      cfg.master_seed = s["master_seed"].get<std::uint64_t>();
    }
    if (s.contains("delta_grid")) cfg.delta_grid = parse_grid(s["delta_grid"], "/simulation/delta_grid", cfg.delta_grid);
    if (s.contains("sigma_grid")) cfg.sigma_grid = parse_grid(s["sigma_grid"], "/simulation/sigma_grid", cfg.sigma_grid);
    if (s.contains("series_points")) cfg.series_points = as_index(s["series_points"], "/simulation/series_points");
    if (s.contains("z_probes")) cfg.z_probes = as_index(s["z_probes"], "/simulation/z_probes");
  }
  if (doc.contains("suites")) {
    const json& s = doc["suites"];
    if (!s.is_array()) throw ConfigError("/suites", "expected an array of suite names");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string sp = "/suites/" + std::to_string(i);
      if (!s[i].is_string()) throw ConfigError(sp, "expected a suite name");
      try {
        const Suite suite = suite_from_string(s[i].get<std::string>());
        if (!cfg.has(suite)) cfg.suites.push_back(suite);
      } catch (const Error& e) {
        throw ConfigError(sp, e.what());
      }
    }
  }

  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json emit_config(const ExperimentConfig& c) {
  json cls = {{"kind", c.cls.kind() == ClassKind::finite ? "finite" : "convex-parametric"},
              {"members", matrix_json(c.cls.members())},
              {"scale", number(c.class_scale)}};
  if (c.cls.parameters()) {
    cls["parameters"] = matrix_json(c.cls.parameters()->points);
    cls["norm"] = std::string(to_string(c.cls.parameters()->norm));
  }
  json states = json::array();
  for (const auto& s : c.distribution.states()) states.push_back(s);

  json models = json::array();
  for (const auto& m : c.models) models.push_back(m);
  json schedule = json::array();
  if (!c.models.empty())
    for (double t : c.effective_schedule()) schedule.push_back(number(t));
  json suites = json::array();
  for (Suite s : c.suites) suites.push_back(std::string(to_string(s)));

  return {
      {"fixture", c.fixture},
      {"distribution", {{"states", states}, {"weights", vector_json(c.distribution.weights())}}},
      {"class", cls},
      {"models", models},
      {"params",
       {{"t", number(c.params.t)},
        {"q", number(c.params.q)},
        {"eps", number(c.params.eps)},
        {"eps_bar", number(c.params.eps_bar)},
        {"eta_n", number(c.params.eta_n)},
        {"n", c.params.n},
        {"t_schedule", schedule},
        {"lemma1_delta", c.lemma1_delta ? number(*c.lemma1_delta) : json(nullptr)}}},
      {"simulation",
       {{"trials", c.trials},
        {"reps", c.reps},
        {"master_seed", c.master_seed},
        {"delta_grid", grid_json(c.delta_grid)},
        {"sigma_grid", grid_json(c.sigma_grid)},
        {"series_points", c.series_points},
        {"z_probes", c.z_probes}}},
      {"suites", suites},
  };
}

bool same_config(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto same_params = [](const BoundParams& x, const BoundParams& y) {
    return x.t == y.t && x.q == y.q && x.eps == y.eps && x.eps_bar == y.eps_bar && x.n == y.n && x.eta_n == y.eta_n;
  };
  auto same_class = [](const FunctionClass& x, const FunctionClass& y) {
    if (x.kind() != y.kind() || x.members() != y.members()) return false;
    if (!x.parameters()) return true;
    return x.parameters()->points == y.parameters()->points && x.parameters()->norm == y.parameters()->norm;
  };
  return a.fixture == b.fixture && a.distribution.states() == b.distribution.states() &&
         a.distribution.weights() == b.distribution.weights() && same_class(a.cls, b.cls) &&
         a.class_scale == b.class_scale && a.models == b.models && same_params(a.params, b.params) &&
         (a.models.empty() || a.effective_schedule() == b.effective_schedule()) && a.lemma1_delta == b.lemma1_delta &&
         a.trials == b.trials && a.reps == b.reps && a.master_seed == b.master_seed && a.delta_grid == b.delta_grid &&
         a.sigma_grid == b.sigma_grid && a.series_points == b.series_points && a.z_probes == b.z_probes &&
         a.suites == b.suites;
}

}  // namespace exrisk
