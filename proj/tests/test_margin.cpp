#include "exrisk/margin.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace exrisk;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

FunctionClass two_point() {
  Matrix m(2, 2);
  m << 0.0, 0.0, 0.4, 0.0;
  return FunctionClass(m);
}

// sup_u [u v - G(u)] over a dense sweep of [0, u_max].
double brute_conjugate(const TabulatedFunction& G, double v, double u_max, Index steps) {
  double best = -kInfinity;
  for (Index i = 0; i <= steps; ++i) {
    const double u = u_max * static_cast<double>(i) / static_cast<double>(steps);
    best = std::max(best, u * v - G(u));
  }
  return best;
}

// Lower envelope of every chord between two points straddling x.
double brute_lower_hull(const std::vector<std::pair<double, double>>& pts, double x) {
  double best = kInfinity;
  for (const auto& [xa, ya] : pts)
    for (const auto& [xb, yb] : pts) {
      if (xa > x || xb < x) continue;
      const double y = xb == xa ? std::min(ya, yb) : ya + (yb - ya) * (x - xa) / (xb - xa);
      best = std::min(best, y);
    }
  return best;
}

double brute_upper_hull(const std::vector<std::pair<double, double>>& pts, double x) {
  double best = -kInfinity;
  for (const auto& [xa, ya] : pts)
    for (const auto& [xb, yb] : pts) {
      if (xa > x || xb < x) continue;
      const double y = xb == xa ? std::max(ya, yb) : ya + (yb - ya) * (x - xa) / (xb - xa);
      best = std::max(best, y);
    }
  return best;
}

TabulatedFunction random_convex(std::mt19937_64& rng, Extrapolation tag) {
  std::uniform_real_distribution<double> step(0.05, 0.5);
  std::uniform_real_distribution<double> rise(0.0, 1.0);
  const Index m = 6 + static_cast<Index>(rng() % 10);
  Vector u(m), g(m);
  u(0) = 0.0;
  g(0) = 0.0;
  double slope = rise(rng);
  for (Index i = 1; i < m; ++i) {
    u(i) = u(i - 1) + step(rng);
    g(i) = g(i - 1) + slope * (u(i) - u(i - 1));
    slope += rise(rng);
  }
  return {u, g, tag};
}

}  // namespace

TEST(MarginRadius, TwoPoint) {
  const auto U = DiscreteDistribution::uniform(2);
  const TabulatedFunction D = margin_radius(U, two_point(), vec({0.1, 0.2, 0.5}));
  EXPECT_EQ(D.values()(0), 0.0);
  EXPECT_NEAR(D.values()(1), 0.2, 1e-15);
  EXPECT_NEAR(D.values()(2), 0.2, 1e-15);
}

TEST(MarginRadius, Singleton) {
  Matrix one(1, 2);
  one << 0.3, 0.7;
  const TabulatedFunction D = margin_radius(DiscreteDistribution::uniform(2), FunctionClass(one),
                                            geometric_grid(1e-3, 1.0, 10));
  EXPECT_EQ(D.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(MarginRadius, NondecreasingAndSaturates) {
  const auto P = DiscreteDistribution::uniform(5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(12, 5);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = unif(rng);
  const FunctionClass F(m);
  const ClassProfile prof = profile(P, F);
  const Vector grid = geometric_grid(1e-4, prof.excess.maxCoeff(), 64);
  const TabulatedFunction D = margin_radius(P, F, grid);
  for (Index i = 1; i < D.size(); ++i) EXPECT_GE(D.values()(i), D.values()(i - 1));
  EXPECT_EQ(D.values()(D.size() - 1), prof.sigma.maxCoeff());
}

TEST(Envelope, TwoPointIsIdentity) {
  const TabulatedFunction phi = margin_envelope(DiscreteDistribution::uniform(2), two_point());
  EXPECT_EQ(phi(0.0), 0.0);
  EXPECT_NEAR(phi(0.1), 0.1, 1e-12);
  EXPECT_NEAR(phi(0.2), 0.2, 1e-12);
}

TEST(Envelope, SingletonAndFlat) {
  Matrix one(1, 2);
  one << 0.3, 0.7;
  const TabulatedFunction phi = margin_envelope(DiscreteDistribution::uniform(2), FunctionClass(one));
  EXPECT_EQ(phi.size(), 1);
  EXPECT_EQ(phi(0.0), 0.0);

  Matrix flat(2, 2);
  flat << 1.0, 0.0, 0.0, 1.0;
  const TabulatedFunction psi = margin_envelope(DiscreteDistribution::uniform(2), FunctionClass(flat));
  EXPECT_EQ(psi.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Envelope, MatchesBruteForceHull) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const Index k = 15;
    Vector sigma(k), excess(k);
    for (Index i = 0; i < k; ++i) {
      sigma(i) = unif(rng);
      excess(i) = unif(rng) * sigma(i);
    }
    const TabulatedFunction phi = convex_minorant(sigma, excess);
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
    for (Index i = 0; i < k; ++i) pts.emplace_back(sigma(i), excess(i));
    for (Index i = 0; i < k; ++i) {
      EXPECT_LE(phi(sigma(i)), excess(i) + 1e-12);
      EXPECT_NEAR(phi(sigma(i)), brute_lower_hull(pts, sigma(i)), 1e-12);
    }
    const Vector s = phi.slopes();
    for (Index i = 0; i < s.size(); ++i) EXPECT_GE(s(i), -1e-12);
    for (Index i = 1; i < s.size(); ++i) EXPECT_GE(s(i), s(i - 1) - 1e-12);
  }
}

TEST(Envelope, RejectsNonMinimizerReference) {
  const auto U = DiscreteDistribution::uniform(2);
  EXPECT_THROW(margin_envelope(U, two_point(), vec({0.4, 0.0})), Error);
}

TEST(Conjugate, Quadratic) {
  const double h = 0.01;
  const Vector u = linear_grid(0.0, 2.0, 201);
  const TabulatedFunction G(u, u.array().square().matrix(), Extrapolation::infinite);
  const TabulatedFunction H = legendre_conjugate(G, linear_grid(0.0, 4.0, 81));
  for (Index j = 0; j < H.size(); ++j) {
    const double v = H.grid()(j);
    EXPECT_NEAR(H.values()(j), v * v / 4.0, h * h) << "v = " << v;
  }
}

TEST(Conjugate, SelfConjugate) {
  const double h = 0.01;
  const Vector u = linear_grid(0.0, 4.0, 401);
  const TabulatedFunction G(u, (0.5 * u.array().square()).matrix(), Extrapolation::infinite);
  const TabulatedFunction H = legendre_conjugate(G, linear_grid(0.0, 4.0, 41));
  for (Index j = 0; j < H.size(); ++j) {
    const double v = H.grid()(j);
    EXPECT_NEAR(H.values()(j), v * v / 2.0, h * h) << "v = " << v;
  }
}

TEST(Conjugate, Linear) {
  const TabulatedFunction G(vec({0.0, 1.0}), vec({0.0, 1.0}), Extrapolation::linear);
  const TabulatedFunction H = legendre_conjugate(G, linear_grid(0.0, 2.0, 9));
  EXPECT_EQ(H.extrapolation(), Extrapolation::infinite);
  EXPECT_EQ(H(0.5), 0.0);
  EXPECT_EQ(H(1.0), 0.0);
  EXPECT_EQ(H(1.5), kInfinity);
}

TEST(Conjugate, MatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 10; ++rep) {
    const TabulatedFunction G = random_convex(rng, Extrapolation::infinite);
    const double u_max = G.grid().maxCoeff();
    const double max_slope = G.slopes().maxCoeff();
    const Index steps = 20000;
    const double step = u_max / static_cast<double>(steps);
    const TabulatedFunction H = legendre_conjugate(G, linear_grid(0.0, 1.5 * max_slope, 60));
    for (Index j = 0; j < H.size(); ++j) {
      const double v = H.grid()(j);
      const double brute = brute_conjugate(G, v, u_max, steps);
      EXPECT_GE(H.values()(j), brute - 1e-12);
      EXPECT_LE(H.values()(j) - brute, 2.0 * step * std::max(max_slope, v));
    }
  }
}

TEST(Conjugate, LinearTailStopsAtEndSlope) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    const TabulatedFunction G = random_convex(rng, Extrapolation::linear);
    const double end_slope = G.slopes()(G.size() - 2);
    const TabulatedFunction H = legendre_conjugate(G, linear_grid(0.0, 2.0 * end_slope, 40));
    EXPECT_EQ(H.extrapolation(), Extrapolation::infinite);
    EXPECT_LE(H.grid().maxCoeff(), end_slope);
    EXPECT_EQ(H(1.5 * end_slope), kInfinity);
    const double u_far = 3.0 * G.grid().maxCoeff();
    for (Index j = 0; j < H.size(); ++j)
      EXPECT_NEAR(H.values()(j), brute_conjugate(G, H.grid()(j), u_far, 30000),
                  2.0 * u_far / 30000.0 * end_slope + 1e-12);
  }
}

TEST(Conjugate, FenchelYoung) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    const TabulatedFunction G = random_convex(rng, Extrapolation::infinite);
    const TabulatedFunction H = legendre_conjugate(G, linear_grid(0.0, 2.0 * G.slopes().maxCoeff(), 50));
    for (Index i = 0; i < G.size(); ++i)
      for (Index j = 0; j < H.size(); ++j)
        EXPECT_GE(G.values()(i) + H.values()(j), G.grid()(i) * H.grid()(j) - 1e-12);
  }
}

TEST(Conjugate, BoundedDomainGrowsLinearly) {
  const TabulatedFunction G(vec({0.0, 1.0}), vec({0.0, 0.5}), Extrapolation::infinite);
  const TabulatedFunction H = legendre_conjugate(G, vec({0.0, 2.0}));
  EXPECT_EQ(H.extrapolation(), Extrapolation::linear);
  EXPECT_DOUBLE_EQ(H(4.0), 3.5);
  EXPECT_DOUBLE_EQ(H(0.25), 0.0);
}

TEST(Conjugate, SinglePointIsZero) {
  const TabulatedFunction G(Vector::Zero(1), Vector::Zero(1), Extrapolation::infinite);
  const TabulatedFunction H = legendre_conjugate(G, linear_grid(0.0, 3.0, 4));
  EXPECT_EQ(H.values().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(H(10.0), 0.0);
}

TEST(Conjugate, RequiresConvexity) {
  const TabulatedFunction concave(vec({0.0, 1.0, 2.0}), vec({0.0, 1.0, 1.5}), Extrapolation::infinite);
  EXPECT_THROW(legendre_conjugate(concave, vec({0.0, 1.0})), Error);
  const TabulatedFunction offset(vec({0.0, 1.0}), vec({0.5, 1.0}), Extrapolation::infinite);
  EXPECT_THROW(legendre_conjugate(offset, vec({0.0, 1.0})), Error);
}

TEST(Psi, ConstantW) {
  const Vector grid = geometric_grid(1e-3, 1.0, 20);
  const TabulatedFunction psi = build_psi(TabulatedFunction(grid, Vector::Constant(20, 0.3), Extrapolation::clamp));
  for (Index i = 0; i < grid.size(); ++i) EXPECT_NEAR(psi.values()(i), 0.3 + kPsiRamp * grid(i), 1e-15);
}

TEST(Psi, FixedPointUpToRamp) {
  const Vector grid = geometric_grid(1e-3, 1.0, 30);
  const Vector w = grid.array().sqrt().matrix();
  const TabulatedFunction psi = build_psi(TabulatedFunction(grid, w, Extrapolation::clamp));
  for (Index i = 0; i < grid.size(); ++i) EXPECT_NEAR(psi.values()(i), w(i) + kPsiRamp * grid(i), 1e-14);
}

TEST(Psi, TwoLinearPieces) {
  const Vector grid = linear_grid(0.01, 1.0, 100);
  const Vector w = (0.5 + 0.1 * grid.array()).max(2.0 * grid.array() - 0.6).matrix();
  const TabulatedFunction psi = build_psi(TabulatedFunction(grid, w, Extrapolation::clamp));
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  for (Index i = 0; i < grid.size(); ++i) pts.emplace_back(grid(i), w(i));
  for (Index i = 0; i < grid.size(); ++i) {
    EXPECT_GE(psi.values()(i), w(i));
    EXPECT_NEAR(psi.values()(i), brute_upper_hull(pts, grid(i)) + kPsiRamp * grid(i), 1e-12);
  }
}

TEST(Psi, PropertiesOnRandomW) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Vector grid = geometric_grid(1e-4, 1.0, 128);
  for (int rep = 0; rep < 10; ++rep) {
    Vector w(grid.size());
    for (Index i = 0; i < w.size(); ++i) w(i) = unif(rng) * (1.0 + grid(i));
    const TabulatedFunction psi = build_psi(TabulatedFunction(grid, w, Extrapolation::clamp));
    const Vector& p = psi.values();
    for (Index i = 0; i < grid.size(); ++i) EXPECT_GE(p(i), w(i));
    for (Index i = 1; i < grid.size(); ++i) {
      EXPECT_GT(p(i), p(i - 1));
      EXPECT_LE(p(i) / grid(i), p(i - 1) / grid(i - 1) * (1.0 + 1e-12));
    }
    const Vector s = psi.slopes();
    for (Index i = 1; i < s.size(); ++i) EXPECT_LE(s(i), s(i - 1) * (1.0 + 1e-6) + 1e-12);
  }
}

TEST(PsiInverse, ConvexAndBelowInverse) {
  const Vector grid = geometric_grid(1e-4, 1.0, 64);
  const TabulatedFunction psi = build_psi(TabulatedFunction(grid, grid.array().sqrt().matrix(), Extrapolation::clamp));
  const TabulatedFunction G = psi_inverse(psi);
  EXPECT_EQ(G.grid()(0), 0.0);
  EXPECT_EQ(G.values()(0), 0.0);
  for (Index i = 0; i < grid.size(); ++i) EXPECT_LE(G(psi.values()(i)), grid(i) * (1.0 + 1e-12));
  EXPECT_NO_THROW(legendre_conjugate(G, linear_grid(0.0, 8.0, 33)));
}

TEST(W, Examples) {
  EXPECT_NEAR(w_t_value(0.1, 0.2, 2.0, 100), 0.20, 1e-15);
  EXPECT_EQ(w_t_value(0.0, 0.3, 0.0, 100), 0.0);
  EXPECT_DOUBLE_EQ(w_t_value(0.05, 0.0, 2.0, 100), 0.08);
}
