#include "exrisk/fixtures.hpp"

#include "exrisk/config.hpp"

#include <algorithm>

namespace exrisk {

using nlohmann::json;

namespace {

constexpr std::uint64_t kFixtureSeed = 0x5eed2006ULL;

json rows(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

json uniform_distribution(Index k) {
  json states = json::array();
  json weights = json::array();
  for (Index i = 0; i < k; ++i) {
    states.push_back("s" + std::to_string(i));
    weights.push_back(1.0 / static_cast<double>(k));
  }
  return {{"states", states}, {"weights", weights}};
}

// Values in [lo, lo + span] on each state.
Matrix random_losses(Index members, Index states, std::uint64_t stream, double lo, double span) {
  CounterRng rng(stream_key(kFixtureSeed, stream, StreamRole::primary));
  Matrix m(members, states);
  for (Index r = 0; r < members; ++r)
    for (Index c = 0; c < states; ++c) m(r, c) = lo + span * rng.uniform();
  return m;
}

json base(std::string_view name, json distribution, json cls, json suites) {
  return {{"fixture", std::string(name)},
          {"distribution", std::move(distribution)},
          {"class", std::move(cls)},
          {"params", {{"t", 2.0}, {"q", 2.0}, {"eps", 0.25}, {"eps_bar", 0.6}, {"eta_n", 1.0}, {"n", 200}}},
          {"simulation", {{"trials", 10000}, {"reps", 10000}, {"master_seed", 20061018}}},
          {"suites", std::move(suites)}};
}

}  // namespace

std::vector<std::string> fixture_names() { return {"two-point", "singleton", "random20", "quadratic", "nested3"}; }

FunctionClass quadratic_class(const Vector& state_values, const Vector& theta_grid) {
  Matrix members(theta_grid.size(), state_values.size());
  for (Index i = 0; i < theta_grid.size(); ++i)
    members.row(i) = (state_values.array() - theta_grid(i)).square().matrix().transpose();
  ParameterGrid grid{theta_grid, Norm::abs};
  return FunctionClass(members, std::move(grid));
}

json fixture_document(std::string_view name) {
  if (name == "two-point") {
    Matrix m(2, 2);
    m << 0.0, 0.0, 0.4, 0.0;
    return base(name, uniform_distribution(2), {{"kind", "finite"}, {"members", rows(m)}},
                json::array({"lemma1", "lemma2"}));
  }
  if (name == "singleton") {
    Matrix m(1, 2);
    m << 0.3, 0.7;
    return base(name, uniform_distribution(2), {{"kind", "finite"}, {"members", rows(m)}},
                json::array({"lemma1", "lemma2"}));
  }
  if (name == "random20") {
    const Matrix m = random_losses(20, 10, 20, 0.0, 1.0);
    return base(name, uniform_distribution(10), {{"kind", "finite"}, {"members", rows(m)}},
                json::array({"lemma1", "lemma2"}));
  }
  if (name == "quadratic") {
    json theta = json::array();
    for (int i = 0; i <= 50; ++i) theta.push_back(static_cast<double>(i - 25) / 100.0);
    json cls = {{"kind", "convex-parametric"},
                {"loss", "quadratic"},
                {"state_values", {-0.25, -0.125, 0.0, 0.125, 0.25}},
                {"theta_grid", theta}};
    json dist = {{"states", {"x0", "x1", "x2", "x3", "x4"}}, {"weights", {0.15, 0.2, 0.3, 0.2, 0.15}}};
    return base(name, dist, cls, json::array({"lemma2", "lemma3"}));
  }
  if (name == "nested3") {
    Matrix m = random_losses(24, 8, 3, 0.0, 1.0);
    const Vector r = m.rowwise().mean();
    Index best = argmin_lowest(r);
    m.row(best).swap(m.row(23));
    json doc = base(name, uniform_distribution(8), {{"kind", "finite"}, {"members", rows(m)}},
                    json::array({"lemma4", "lemma5"}));
    json models = json::array();
    for (Index size : {4, 12, 24}) {
      json idx = json::array();
      for (Index i = 0; i < size; ++i) idx.push_back(i);
      models.push_back(idx);
    }
    doc["models"] = models;
    return doc;
  }
  throw Error("unknown fixture '" + std::string(name) + "'");
}

ExperimentConfig fixture_config(std::string_view name) { return parse_config(fixture_document(name)); }

}  // namespace exrisk
