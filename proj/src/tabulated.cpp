#include "exrisk/tabulated.hpp"

#include <algorithm>
#include <vector>

namespace exrisk {

std::string_view to_string(Extrapolation e) {
  switch (e) {
    case Extrapolation::clamp: return "clamp";
    case Extrapolation::linear: return "linear";
    case Extrapolation::infinite: return "infinite";
  }
  return "clamp";
}

Extrapolation extrapolation_from_string(std::string_view name) {
  if (name == "clamp") return Extrapolation::clamp;
  if (name == "linear") return Extrapolation::linear;
  if (name == "infinite") return Extrapolation::infinite;
  throw Error("unknown extrapolation '" + std::string(name) + "'");
}

TabulatedFunction::TabulatedFunction(Vector grid, Vector values, Extrapolation extrapolation)
    : grid_(std::move(grid)), values_(std::move(values)), extrapolation_(extrapolation) {
  if (grid_.size() != values_.size()) throw Error("grid and values differ in length");
  if (grid_.size() == 0) throw Error("tabulation needs at least one point");
  if (grid_.size() == 1 && extrapolation_ != Extrapolation::infinite)
    throw Error("single-point tabulation must use infinite extrapolation");
  if (!grid_.allFinite() || !values_.allFinite()) throw Error("tabulation must be finite on its grid");
  for (Index i = 1; i < grid_.size(); ++i)
    if (!(grid_(i) > grid_(i - 1))) throw Error("grid must be strictly increasing");
}

double TabulatedFunction::operator()(double x) const {
  const Index m = grid_.size();
  if (x < grid_(0) || x > grid_(m - 1)) {
    const bool left = x < grid_(0);
    switch (extrapolation_) {
      case Extrapolation::infinite: return kInfinity;
      case Extrapolation::clamp: return left ? values_(0) : values_(m - 1);
      case Extrapolation::linear: {
        const Index a = left ? 0 : m - 2;
        const double slope = (values_(a + 1) - values_(a)) / (grid_(a + 1) - grid_(a));
        return left ? values_(0) + slope * (x - grid_(0)) : values_(m - 1) + slope * (x - grid_(m - 1));
      }
    }
  }
  if (m == 1) return values_(0);
  const auto* begin = grid_.data();
  const auto* it = std::upper_bound(begin, begin + m, x);
  Index hi = std::min<Index>(static_cast<Index>(it - begin), m - 1);
  Index lo = hi - 1;
  if (x == grid_(hi)) return values_(hi);
  const double w = (x - grid_(lo)) / (grid_(hi) - grid_(lo));
  return values_(lo) + w * (values_(hi) - values_(lo));
}

Vector TabulatedFunction::operator()(const Vector& xs) const {
  Vector out(xs.size());
  for (Index i = 0; i < xs.size(); ++i) out(i) = (*this)(xs(i));
  return out;
}

double TabulatedFunction::step_up(double x) const {
  const auto* begin = grid_.data();
  const auto* it = std::lower_bound(begin, begin + grid_.size(), x);
  if (it == begin + grid_.size()) return values_(grid_.size() - 1);
  return values_(it - begin);
}

Vector TabulatedFunction::slopes() const {
  const Index m = grid_.size();
  if (m < 2) return Vector();
  return (values_.tail(m - 1) - values_.head(m - 1)).cwiseQuotient(grid_.tail(m - 1) - grid_.head(m - 1));
}

Vector geometric_grid(double lo, double hi, Index points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) throw Error("geometric grid needs 0 < lo < hi and >= 2 points");
  Vector g(points);
  const double ratio = std::log(hi / lo) / static_cast<double>(points - 1);
  for (Index i = 0; i < points; ++i) g(i) = lo * std::exp(ratio * static_cast<double>(i));
  g(0) = lo;
  g(points - 1) = hi;
  return g;
}

Vector linear_grid(double lo, double hi, Index points) {
  if (!(hi > lo) || points < 2) throw Error("linear grid needs lo < hi and >= 2 points");
  return Vector::LinSpaced(points, lo, hi);
}

Vector merge_grid(const Vector& grid, const Vector& extra) {
  std::vector<double> all(grid.data(), grid.data() + grid.size());
  all.insert(all.end(), extra.data(), extra.data() + extra.size());
  std::sort(all.begin(), all.end());
  std::vector<double> kept;
  for (double x : all) {
    if (!kept.empty() && x - kept.back() <= 1e-14 * std::max(1.0, std::abs(x))) continue;
    kept.push_back(x);
  }
  return Eigen::Map<Vector>(kept.data(), static_cast<Index>(kept.size()));
}

}  // namespace exrisk
