#ifndef EXRISK_MARGIN_HPP
#define EXRISK_MARGIN_HPP

#include "exrisk/measures.hpp"
#include "exrisk/tabulated.hpp"

namespace exrisk {

/// Ramp added to psi so that it is strictly increasing and invertible.
inline constexpr double kPsiRamp = 1e-9;
/// Convexity slack accepted by legendre_conjugate.
inline constexpr double kConvexityTolerance = 1e-8;

/// D(delta) = max { sigma(f - fbar) : f in F, excess(f) <= delta } on the
/// given positive grid. fbar always qualifies, so D >= 0.
TabulatedFunction margin_radius(const DiscreteDistribution& P, const FunctionClass& F,
                                const Vector& delta_grid);

/// Greatest convex nondecreasing minorant through the origin of a scatter of
/// (sigma, excess) points. Tabulated on its hull vertices; +inf beyond the
/// largest sigma, where the class has no members.
TabulatedFunction convex_minorant(const Vector& sigma, const Vector& excess);

/// Margin envelope phi with P(f - reference) >= phi(sigma(f - reference)) for
/// every member. The reference must minimize P over the class (f_* for the
/// umbrella class, fbar_k for a model); by default it is the class minimizer.
TabulatedFunction margin_envelope(const DiscreteDistribution& P, const FunctionClass& F);
TabulatedFunction margin_envelope(const DiscreteDistribution& P, const FunctionClass& F,
                                  const Loss& reference);

/// H(v) = sup_{u >= 0} [u v - G(u)] for a convex nondecreasing tabulation G
/// with G(0) = 0, evaluated exactly for the piecewise-linear G.
///
/// When G continues past its grid with a finite end slope s, H is +inf for
/// v > s; the returned grid stops at s and is tagged infinite. When G is only
/// defined on its grid (infinite tag) H is finite everywhere and grows
/// linearly with slope max(u) once v passes the largest slope of G.
TabulatedFunction legendre_conjugate(const TabulatedFunction& G, const Vector& v_grid);

/// Concave, strictly increasing upper bound of W on its (positive) grid, with
/// psi(delta) / delta nonincreasing.
TabulatedFunction build_psi(const TabulatedFunction& W);

/// psi^{-1} with the origin prepended, so that it is defined on [0, inf). Taken
/// as the lower convex hull of the inverse points.
TabulatedFunction psi_inverse(const TabulatedFunction& psi);

/// (8/5) EZ(sigma) + sigma sqrt(2t/n) at one point.
inline double w_t_value(double ez, double sigma, double t, Index n) {
  return 1.6 * ez + sigma * std::sqrt(2.0 * t / static_cast<double>(n));
}

/// W_t over the sigma grid of an EZ tabulation.
TabulatedFunction w_t(const TabulatedFunction& EZ, double t, Index n);

}  // namespace exrisk

#endif  // EXRISK_MARGIN_HPP
