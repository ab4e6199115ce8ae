#include "exrisk/measures.hpp"

#include <algorithm>
#include <unordered_set>

namespace exrisk {

namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kConvexityTolerance = 1e-9;

void check_midpoint_convexity(const Matrix& members, const ParameterGrid& grid) {
  const Matrix& theta = grid.points;
  const Index m = theta.rows();
  const double scale = m > 0 ? std::max(1.0, theta.cwiseAbs().maxCoeff()) : 1.0;
  for (Index i = 0; i < m; ++i) {
    for (Index k = i + 1; k < m; ++k) {
      const Vector mid = 0.5 * (theta.row(i) + theta.row(k)).transpose();
      for (Index j = 0; j < m; ++j) {
        if ((theta.row(j).transpose() - mid).cwiseAbs().maxCoeff() > 1e-12 * scale) continue;
        const Vector chord = 0.5 * (members.row(i) + members.row(k)).transpose();
        const Vector gap = members.row(j).transpose() - chord;
        const double tol = kConvexityTolerance * (1.0 + chord.cwiseAbs().maxCoeff());
        if (gap.maxCoeff() > tol) {
          throw Error("loss map is not convex in the parameter (members " + std::to_string(i) + ", " +
                      std::to_string(j) + ", " + std::to_string(k) + ")");
        }
      }
    }
  }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<std::string> states, Vector weights)
    : states_(std::move(states)), weights_(std::move(weights)) {
  if (weights_.size() == 0) throw Error("distribution needs at least one state");
  if (static_cast<Index>(states_.size()) != weights_.size()) throw Error("state-space mismatch");
  if (!weights_.allFinite() || (weights_.array() < 0.0).any()) throw Error("weights must be nonnegative");
  if (std::abs(weights_.sum() - 1.0) > kWeightTolerance) throw Error("weights must sum to 1");
  std::unordered_set<std::string> seen(states_.begin(), states_.end());
  if (static_cast<Index>(seen.size()) != weights_.size()) throw Error("states must be distinct");

  cumulative_.resize(weights_.size());
  double acc = 0.0;
  for (Index i = 0; i < weights_.size(); ++i) {
    acc += weights_(i);
    cumulative_(i) = acc;
  }
  cumulative_(weights_.size() - 1) = 1.0;
}

DiscreteDistribution DiscreteDistribution::uniform(Index num_states) {
  std::vector<std::string> states;
  for (Index i = 0; i < num_states; ++i) states.push_back(std::to_string(i));
  return {std::move(states), Vector::Constant(num_states, 1.0 / static_cast<double>(num_states))};
}

DiscreteDistribution DiscreteDistribution::point_mass(Index num_states, Index at) {
  std::vector<std::string> states;
  for (Index i = 0; i < num_states; ++i) states.push_back(std::to_string(i));
  Vector w = Vector::Zero(num_states);
  w(at) = 1.0;
  return {std::move(states), std::move(w)};
}

Index DiscreteDistribution::index_of(std::string_view state) const {
  auto it = std::find(states_.begin(), states_.end(), state);
  if (it == states_.end()) throw Error("unknown state '" + std::string(state) + "'");
  return static_cast<Index>(it - states_.begin());
}

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::abs: return "abs";
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::linf: return "linf";
  }
  return "abs";
}

Norm norm_from_string(std::string_view name) {
  if (name == "abs") return Norm::abs;
  if (name == "l1") return Norm::l1;
  if (name == "l2") return Norm::l2;
  if (name == "linf") return Norm::linf;
  throw Error("unknown norm '" + std::string(name) + "'");
}

double ParameterGrid::norm_of(const Vector& theta) const { return exrisk::norm_of(norm, theta); }

double norm_of(Norm norm, const Vector& theta) {
  switch (norm) {
    case Norm::abs:
    case Norm::l1: return theta.lpNorm<1>();
    case Norm::l2: return theta.norm();
    case Norm::linf: return theta.size() ? theta.lpNorm<Eigen::Infinity>() : 0.0;
  }
  return 0.0;
}

double ParameterGrid::distance(Index i, Index j) const {
  return norm_of((points.row(i) - points.row(j)).transpose());
}

FunctionClass::FunctionClass(Matrix members) : members_(std::move(members)) {
  if (members_.rows() == 0) throw Error("function class is empty");
  if (!members_.allFinite()) throw Error("loss values must be finite");
}

FunctionClass::FunctionClass(Matrix members, ParameterGrid parameters)
    : FunctionClass(std::move(members)) {
  if (parameters.points.rows() != members_.rows()) throw Error("parameter grid does not match class size");
  check_midpoint_convexity(members_, parameters);
  parameters_ = std::move(parameters);
}

FunctionClass FunctionClass::subset(std::span<const Index> indices) const {
  Matrix rows(static_cast<Index>(indices.size()), num_states());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] < 0 || indices[r] >= size()) throw Error("member index out of range");
    rows.row(static_cast<Index>(r)) = members_.row(indices[r]);
  }
  if (!parameters_) return FunctionClass(std::move(rows));
  ParameterGrid grid{Matrix(rows.rows(), parameters_->points.cols()), parameters_->norm};
  for (std::size_t r = 0; r < indices.size(); ++r) grid.points.row(static_cast<Index>(r)) = parameters_->points.row(indices[r]);
  return FunctionClass(std::move(rows), std::move(grid));
}

EmpiricalMeasure::EmpiricalMeasure(Eigen::VectorXi counts) : counts_(std::move(counts)) {
  if ((counts_.array() < 0).any()) throw Error("counts must be nonnegative");
  n_ = counts_.sum();
}

EmpiricalMeasure::EmpiricalMeasure(const Sample& sample, Index num_states)
    : counts_(Eigen::VectorXi::Zero(num_states)) {
  for (Index x : sample.draws) {
    if (x < 0 || x >= num_states) throw Error("sample draw outside the state space");
    ++counts_(x);
  }
  n_ = sample.n();
}

Vector EmpiricalMeasure::frequencies() const {
  if (n_ == 0) throw Error("empty sample");
  return counts_.cast<double>() / static_cast<double>(n_);
}

Index argmin_lowest(const Vector& values) {
  if (values.size() == 0) throw Error("argmin over an empty set");
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i)
    if (values(i) < values(best)) best = i;
  return best;
}

Vector risks(const DiscreteDistribution& P, const FunctionClass& F) {
  detail::require_same_states(P.size(), F.num_states());
  return F.members() * P.weights();
}

Vector empirical_risks(const EmpiricalMeasure& Pn, const FunctionClass& F) {
  detail::require_same_states(Pn.size(), F.num_states());
  return F.members() * Pn.frequencies();
}

Index risk_minimizer(const DiscreteDistribution& P, const FunctionClass& F) {
  return argmin_lowest(risks(P, F));
}

Index erm(const EmpiricalMeasure& Pn, const FunctionClass& F) {
  return argmin_lowest(empirical_risks(Pn, F));
}

double excess_risk(const DiscreteDistribution& P, const FunctionClass& F, const Loss& f) {
  const Vector r = risks(P, F);
  return mean(P, f) - r.minCoeff();
}

RescaledClass rescale_to_unit(const FunctionClass& F, const DiscreteDistribution& P) {
  const Index fbar = risk_minimizer(P, F);
  const Matrix dev = F.members().rowwise() - F.members().row(fbar);
  const double M = dev.cwiseAbs().maxCoeff();
  if (M <= 1.0) return {F, 1.0};
  Matrix scaled = F.members() / M;
  if (F.parameters()) return {FunctionClass(std::move(scaled), *F.parameters()), M};
  return {FunctionClass(std::move(scaled)), M};
}

ClassProfile profile(const DiscreteDistribution& P, const FunctionClass& F, const Loss& reference) {
  detail::require_same_states(P.size(), reference.size());
  ClassProfile out;
  out.risk = risks(P, F);
  out.minimizer = argmin_lowest(out.risk);
  out.reference = reference;
  out.reference_risk = mean(P, reference);
  out.excess = out.risk.array() - out.reference_risk;
  out.sigma.resize(F.size());
  out.sup_dev.resize(F.size());
  for (Index i = 0; i < F.size(); ++i) {
    const Loss d = F.member(i) - reference;
    out.sigma(i) = stddev(P, d);
    out.sup_dev(i) = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  }
  return out;
}

ClassProfile profile(const DiscreteDistribution& P, const FunctionClass& F) {
  const Index fbar = risk_minimizer(P, F);
  ClassProfile out = profile(P, F, Loss(F.member(fbar)));
  out.excess(fbar) = 0.0;
  return out;
}

}  // namespace exrisk
