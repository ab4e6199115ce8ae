#ifndef EXRISK_TABULATED_HPP
#define EXRISK_TABULATED_HPP

#include "exrisk/measures.hpp"

#include <limits>
#include <string_view>

namespace exrisk {

/// What a tabulation does outside its grid.
///  clamp    - holds the end value
///  linear   - continues the end segment
///  infinite - is +inf (the function is only defined on the grid's hull)
enum class Extrapolation { clamp, linear, infinite };

std::string_view to_string(Extrapolation e);
Extrapolation extrapolation_from_string(std::string_view name);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Piecewise-linear function on a strictly increasing grid.
///
/// A single-point grid is a degenerate domain and is only allowed with
/// infinite extrapolation.
class TabulatedFunction {
 public:
  TabulatedFunction(Vector grid, Vector values, Extrapolation extrapolation);

  double operator()(double x) const;
  Vector operator()(const Vector& xs) const;

  /// Value at the smallest grid point >= x (end value beyond the grid). For a
  /// nondecreasing tabulation of a nondecreasing function this never
  /// undershoots the function at x.
  double step_up(double x) const;

  const Vector& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  Extrapolation extrapolation() const { return extrapolation_; }
  Index size() const { return grid_.size(); }

  /// Slopes of the linear pieces (size() - 1 entries).
  Vector slopes() const;

 private:
  Vector grid_;
  Vector values_;
  Extrapolation extrapolation_;
};

Vector geometric_grid(double lo, double hi, Index points);
Vector linear_grid(double lo, double hi, Index points);

/// Sorted union of a grid and extra abscissae, with near-duplicates dropped.
Vector merge_grid(const Vector& grid, const Vector& extra);

}  // namespace exrisk

#endif  // EXRISK_TABULATED_HPP
