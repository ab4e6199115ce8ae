#include "exrisk/margin.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace exrisk {

namespace {

struct Point {
  double x;
  double y;
};

// Cross product sign of (b - a) x (c - a).
double cross(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Points must be sorted by x with distinct x.
std::vector<Point> lower_hull(const std::vector<Point>& pts) {
  std::vector<Point> hull;
  for (const Point& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

std::vector<Point> upper_hull(const std::vector<Point>& pts) {
  std::vector<Point> hull;
  for (const Point& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

// Least concave majorant of {(0,0)} and the grid points, evaluated on the grid.
Vector concave_majorant_through_origin(const Vector& grid, const Vector& values) {
  std::vector<Point> pts{{0.0, 0.0}};
  for (Index i = 0; i < grid.size(); ++i) pts.push_back({grid(i), values(i)});
  const std::vector<Point> hull = upper_hull(pts);

  Vector out(grid.size());
  std::size_t seg = 0;
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i);
    while (seg + 1 < hull.size() - 1 && hull[seg + 1].x < x) ++seg;
    const Point& a = hull[seg];
    const Point& b = hull[std::min(seg + 1, hull.size() - 1)];
    if (x >= b.x) {
      out(i) = b.y;
    } else {
      const double w = (x - a.x) / (b.x - a.x);
      out(i) = a.y + w * (b.y - a.y);
    }
    // The hull passes through every vertex, so never report less than the input.
    out(i) = std::max(out(i), values(i));
  }
  return out;
}

}  // namespace

TabulatedFunction margin_radius(const DiscreteDistribution& P, const FunctionClass& F,
                                const Vector& delta_grid) {
  if (delta_grid.size() == 0) throw Error("empty delta grid");
  const ClassProfile prof = profile(P, F);
  Vector D = Vector::Zero(delta_grid.size());
  for (Index j = 0; j < delta_grid.size(); ++j) {
    for (Index i = 0; i < F.size(); ++i)
      if (prof.excess(i) <= delta_grid(j)) D(j) = std::max(D(j), prof.sigma(i));
  }
  if (delta_grid.size() == 1) return {delta_grid, D, Extrapolation::infinite};
  return {delta_grid, D, Extrapolation::clamp};
}

TabulatedFunction convex_minorant(const Vector& sigma, const Vector& excess) {
  if (sigma.size() != excess.size()) throw Error("scatter coordinates differ in length");
  std::vector<Point> pts{{0.0, 0.0}};
  for (Index i = 0; i < sigma.size(); ++i) {
    if (excess(i) < -1e-12) throw Error("envelope reference is not a risk minimizer");
    pts.push_back({sigma(i), std::max(0.0, excess(i))});
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  // One point per distinct sigma: the smallest excess in that bin.
  std::vector<Point> binned;
  for (const Point& p : pts) {
    if (!binned.empty() && p.x - binned.back().x <= 1e-12) continue;
    binned.push_back(p);
  }
  binned.front() = {0.0, 0.0};

  const std::vector<Point> hull = lower_hull(binned);
  Vector grid(static_cast<Index>(hull.size()));
  Vector values(static_cast<Index>(hull.size()));
  for (std::size_t i = 0; i < hull.size(); ++i) {
    grid(static_cast<Index>(i)) = hull[i].x;
    values(static_cast<Index>(i)) = hull[i].y;
  }
  return {grid, values, Extrapolation::infinite};
}

TabulatedFunction margin_envelope(const DiscreteDistribution& P, const FunctionClass& F,
                                  const Loss& reference) {
  const ClassProfile prof = profile(P, F, reference);
  return convex_minorant(prof.sigma, prof.excess);
}

TabulatedFunction margin_envelope(const DiscreteDistribution& P, const FunctionClass& F) {
  const Index fbar = risk_minimizer(P, F);
  return margin_envelope(P, F, Loss(F.member(fbar)));
}

TabulatedFunction legendre_conjugate(const TabulatedFunction& G, const Vector& v_grid) {
  const Vector& u = G.grid();
  const Vector& g = G.values();
  if (u(0) != 0.0 || std::abs(g(0)) > 1e-12) throw Error("conjugate requires G(0) = 0 at u = 0");
  if (v_grid.size() == 0 || (v_grid.array() < 0.0).any()) throw Error("v grid must be nonnegative");

  const Vector slope = G.slopes();
  for (Index i = 0; i < slope.size(); ++i) {
    const double prev = i == 0 ? 0.0 : slope(i - 1);
    if (slope(i) < prev - kConvexityTolerance * std::max(1.0, std::abs(prev)))
      throw Error("conjugate requires convexity");
  }

  const double max_slope = slope.size() ? slope(slope.size() - 1) : 0.0;
  double end_slope = kInfinity;
  switch (G.extrapolation()) {
    case Extrapolation::infinite: break;
    case Extrapolation::linear: end_slope = max_slope; break;
    case Extrapolation::clamp:
      if (max_slope > kConvexityTolerance) throw Error("conjugate requires convexity");
      end_slope = 0.0;
      break;
  }

  // Grid of v: inputs up to the end slope, plus the kink where H turns linear.
  Vector extra;
  if (std::isfinite(end_slope)) {
    extra = Vector::Constant(1, end_slope);
  } else if (slope.size()) {
    extra = Vector::Constant(1, max_slope);
  }
  Vector v = merge_grid(v_grid, extra);
  const double v_top = std::isfinite(end_slope) ? std::min(end_slope, v_grid.maxCoeff()) : v_grid.maxCoeff();
  std::vector<double> kept;
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) >= v_grid.minCoeff() && v(i) <= v_top) kept.push_back(v(i));
  v = Eigen::Map<Vector>(kept.data(), static_cast<Index>(kept.size()));

  Vector H(v.size());
  for (Index j = 0; j < v.size(); ++j) H(j) = (u * v(j) - g).maxCoeff();

  Extrapolation tag = Extrapolation::infinite;
  if (!std::isfinite(end_slope) && slope.size() && v.size() >= 2 && v(v.size() - 2) >= max_slope)
    tag = Extrapolation::linear;
  if (!std::isfinite(end_slope) && !slope.size() && v.size() >= 2) tag = Extrapolation::clamp;
  return {v, H, tag};
}

TabulatedFunction build_psi(const TabulatedFunction& W) {
  const Vector& grid = W.grid();
  const Vector& w = W.values();
  if (grid.size() < 2 || grid(0) <= 0.0) throw Error("psi needs a positive grid with at least two points");
  if ((w.array() < 0.0).any()) throw Error("negative W values");

  Vector psi = concave_majorant_through_origin(grid, w);
  for (Index i = 1; i < psi.size(); ++i) psi(i) = std::max(psi(i), psi(i - 1));

  // psi(delta)/delta nonincreasing, raising values only; then re-majorize.
  for (int pass = 0; pass < 4; ++pass) {
    bool changed = false;
    double ratio = psi(psi.size() - 1) / grid(psi.size() - 1);
    for (Index i = psi.size() - 2; i >= 0; --i) {
      ratio = std::max(ratio, psi(i) / grid(i));
      if (psi(i) < ratio * grid(i)) {
        psi(i) = ratio * grid(i);
        changed = true;
      }
    }
    if (!changed) break;
    psi = concave_majorant_through_origin(grid, psi);
    for (Index i = 1; i < psi.size(); ++i) psi(i) = std::max(psi(i), psi(i - 1));
  }

  psi += kPsiRamp * grid;
  return {grid, psi, Extrapolation::linear};
}

TabulatedFunction psi_inverse(const TabulatedFunction& psi) {
  // Lower hull of the swapped points: exact for a concave psi, and below the
  // inverse where rounding makes nearly flat pieces wobble.
  std::vector<Point> pts{{0.0, 0.0}};
  for (Index i = 0; i < psi.size(); ++i) {
    const Point p{psi.values()(i), psi.grid()(i)};
    if (p.x <= pts.back().x) continue;
    pts.push_back(p);
  }
  const std::vector<Point> hull = lower_hull(pts);
  Vector u(static_cast<Index>(hull.size()));
  Vector delta(u.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    u(static_cast<Index>(i)) = hull[i].x;
    delta(static_cast<Index>(i)) = hull[i].y;
  }
  return {u, delta, Extrapolation::linear};
}

TabulatedFunction w_t(const TabulatedFunction& EZ, double t, Index n) {
  if (t < 0.0 || n < 1) throw Error("W_t needs t >= 0 and n >= 1");
  Vector w(EZ.size());
  for (Index i = 0; i < EZ.size(); ++i) w(i) = w_t_value(EZ.values()(i), EZ.grid()(i), t, n);
  return {EZ.grid(), w, EZ.extrapolation()};
}

}  // namespace exrisk
