#ifndef EXRISK_MEASURES_HPP
#define EXRISK_MEASURES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace exrisk {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A loss function tabulated over the states of a distribution.
using Loss = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite sample space with probability weights. Immutable.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<std::string> states, Vector weights);

  static DiscreteDistribution uniform(Index num_states);
  static DiscreteDistribution point_mass(Index num_states, Index at);

  Index size() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  const std::vector<std::string>& states() const { return states_; }
  /// Running sum of the weights; the last entry is exactly 1.
  const Vector& cumulative() const { return cumulative_; }

  Index index_of(std::string_view state) const;

 private:
  std::vector<std::string> states_;
  Vector weights_;
  Vector cumulative_;
};

enum class ClassKind { finite, convex_parametric };

/// Norm used to measure parameter distances in a convex-parametric class.
enum class Norm { abs, l1, l2, linf };

std::string_view to_string(Norm norm);
double norm_of(Norm norm, const Vector& theta);
Norm norm_from_string(std::string_view name);

/// Finite grid over a convex parameter set; row i parametrizes member i.
struct ParameterGrid {
  Matrix points;
  Norm norm = Norm::abs;

  double distance(Index i, Index j) const;
  double norm_of(const Vector& theta) const;
};

/// Enumerable family of losses; member i is row i of `members()`.
class FunctionClass {
 public:
  explicit FunctionClass(Matrix members);
  /// Convex-parametric class materialized on a parameter grid. The loss map
  /// must be midpoint convex on the grid for every state.
  FunctionClass(Matrix members, ParameterGrid parameters);

  Index size() const { return members_.rows(); }
  Index num_states() const { return members_.cols(); }
  ClassKind kind() const { return parameters_ ? ClassKind::convex_parametric : ClassKind::finite; }

  const Matrix& members() const { return members_; }
  auto member(Index i) const { return members_.row(i).transpose(); }
  const std::optional<ParameterGrid>& parameters() const { return parameters_; }

  /// Sub-class keeping the listed members, in order.
  FunctionClass subset(std::span<const Index> indices) const;

 private:
  Matrix members_;
  std::optional<ParameterGrid> parameters_;
};

/// i.i.d. draws, stored as state indices.
struct Sample {
  std::vector<Index> draws;
  std::uint64_t seed = 0;

  Index n() const { return static_cast<Index>(draws.size()); }
};

/// Counts per state; represents P_n.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(Eigen::VectorXi counts);
  EmpiricalMeasure(const Sample& sample, Index num_states);

  Index n() const { return n_; }
  Index size() const { return counts_.size(); }
  const Eigen::VectorXi& counts() const { return counts_; }
  /// counts / n; throws on an empty sample.
  Vector frequencies() const;

 private:
  Eigen::VectorXi counts_;
  Index n_ = 0;
};

namespace detail {
inline void require_same_states(Index expected, Index actual) {
  if (expected != actual) throw Error("state-space mismatch");
}
}  // namespace detail

/// P f.
template <typename Derived>
double mean(const DiscreteDistribution& P, const Eigen::MatrixBase<Derived>& f) {
  detail::require_same_states(P.size(), f.size());
  return P.weights().dot(f);
}

/// P_n f.
template <typename Derived>
double empirical_mean(const EmpiricalMeasure& Pn, const Eigen::MatrixBase<Derived>& f) {
  detail::require_same_states(Pn.size(), f.size());
  if (Pn.n() == 0) throw Error("empty sample");
  return Pn.counts().template cast<double>().dot(f) / static_cast<double>(Pn.n());
}

/// P f^2 - (P f)^2, evaluated in centered form so constant shifts cancel exactly.
template <typename Derived>
double variance(const DiscreteDistribution& P, const Eigen::MatrixBase<Derived>& f) {
  const double m = mean(P, f);
  return P.weights().dot((f.array() - m).square().matrix());
}

template <typename Derived>
double stddev(const DiscreteDistribution& P, const Eigen::MatrixBase<Derived>& f) {
  return std::sqrt(variance(P, f));
}

template <typename A, typename B>
double sup_norm_dev(const Eigen::MatrixBase<A>& f, const Eigen::MatrixBase<B>& g) {
  detail::require_same_states(f.size(), g.size());
  if (f.size() == 0) return 0.0;
  return (f - g).cwiseAbs().maxCoeff();
}

/// Index of the smallest entry; ties go to the lowest index.
Index argmin_lowest(const Vector& values);

/// P f for every member.
Vector risks(const DiscreteDistribution& P, const FunctionClass& F);
/// P_n f for every member.
Vector empirical_risks(const EmpiricalMeasure& Pn, const FunctionClass& F);

/// f-bar: exact minimizer of P f over the class.
Index risk_minimizer(const DiscreteDistribution& P, const FunctionClass& F);
/// f-hat: minimizer of P_n f over the class.
Index erm(const EmpiricalMeasure& Pn, const FunctionClass& F);

/// P f - min_{g in F} P g.
double excess_risk(const DiscreteDistribution& P, const FunctionClass& F, const Loss& f);

struct RescaledClass {
  FunctionClass cls;
  double scale = 1.0;  // M; original members are cls.members() * scale
};

/// Divides every member by M = max_f |f - f-bar|_inf when M > 1, so that
/// |f - f-bar| <= 1 holds on the returned class.
RescaledClass rescale_to_unit(const FunctionClass& F, const DiscreteDistribution& P);

/// Exact distribution-dependent quantities of a class relative to a reference
/// loss (the class minimizer unless given).
struct ClassProfile {
  Vector risk;        // P f
  Index minimizer;    // f-bar
  Loss reference;     // loss the deviations are taken against
  double reference_risk;
  Vector excess;      // P f - P reference
  Vector sigma;       // sigma(f - reference)
  Vector sup_dev;     // |f - reference|_inf
};

ClassProfile profile(const DiscreteDistribution& P, const FunctionClass& F);
ClassProfile profile(const DiscreteDistribution& P, const FunctionClass& F, const Loss& reference);

}  // namespace exrisk

#endif  // EXRISK_MEASURES_HPP
