#include "exrisk/tabulated.hpp"

#include <gtest/gtest.h>

using namespace exrisk;

namespace {

TabulatedFunction sample(Extrapolation e) {
  Vector g(3), v(3);
  g << 0.0, 1.0, 3.0;
  v << 0.0, 2.0, 3.0;
  return {g, v, e};
}

}  // namespace

TEST(Tabulated, InterpolatesInside) {
  const auto f = sample(Extrapolation::clamp);
  EXPECT_DOUBLE_EQ(f(0.5), 1.0);
  EXPECT_DOUBLE_EQ(f(2.0), 2.5);
  EXPECT_EQ(f(3.0), 3.0);
  EXPECT_EQ(f(0.0), 0.0);
}

TEST(Tabulated, ExtrapolationTags) {
  EXPECT_EQ(sample(Extrapolation::clamp)(5.0), 3.0);
  EXPECT_DOUBLE_EQ(sample(Extrapolation::linear)(5.0), 4.0);
  EXPECT_EQ(sample(Extrapolation::infinite)(5.0), kInfinity);
  EXPECT_EQ(sample(Extrapolation::clamp)(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(sample(Extrapolation::linear)(-1.0), -2.0);
  EXPECT_EQ(sample(Extrapolation::infinite)(-1.0), kInfinity);
}

TEST(Tabulated, StepUp) {
  const auto f = sample(Extrapolation::clamp);
  EXPECT_EQ(f.step_up(0.5), 2.0);
  EXPECT_EQ(f.step_up(1.0), 2.0);
  EXPECT_EQ(f.step_up(10.0), 3.0);
}

TEST(Tabulated, Validation) {
  Vector g(2), v(2);
  g << 1.0, 1.0;
  v << 0.0, 0.0;
  EXPECT_THROW(TabulatedFunction(g, v, Extrapolation::clamp), Error);
  EXPECT_THROW(TabulatedFunction(Vector::Zero(2), Vector::Zero(3), Extrapolation::clamp), Error);
  EXPECT_THROW(TabulatedFunction(Vector::Zero(1), Vector::Zero(1), Extrapolation::clamp), Error);
  EXPECT_NO_THROW(TabulatedFunction(Vector::Zero(1), Vector::Zero(1), Extrapolation::infinite));
}

TEST(Tabulated, SinglePointDomain) {
  const TabulatedFunction f(Vector::Zero(1), Vector::Zero(1), Extrapolation::infinite);
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_EQ(f(1e-9), kInfinity);
}

TEST(Tabulated, Slopes) {
  const Vector s = sample(Extrapolation::clamp).slopes();
  ASSERT_EQ(s.size(), 2);
  EXPECT_DOUBLE_EQ(s(0), 2.0);
  EXPECT_DOUBLE_EQ(s(1), 0.5);
}

TEST(Grids, GeometricAndLinear) {
  const Vector g = geometric_grid(1e-4, 1.0, 5);
  EXPECT_EQ(g(0), 1e-4);
  EXPECT_EQ(g(4), 1.0);
  EXPECT_NEAR(g(2), 1e-2, 1e-15);
  const Vector l = linear_grid(0.0, 2.0, 5);
  EXPECT_EQ(l(4), 2.0);
  EXPECT_DOUBLE_EQ(l(1), 0.5);
}

TEST(Grids, Merge) {
  Vector extra(3);
  extra << 0.25, 0.5 * (1.0 + 1e-16), 3.0;
  const Vector m = merge_grid(linear_grid(0.0, 1.0, 3), extra);
  ASSERT_EQ(m.size(), 5);
  EXPECT_EQ(m(1), 0.25);
  EXPECT_EQ(m(4), 3.0);
}

TEST(Extrapolation, Names) {
  for (auto e : {Extrapolation::clamp, Extrapolation::linear, Extrapolation::infinite})
    EXPECT_EQ(extrapolation_from_string(to_string(e)), e);
  EXPECT_THROW(extrapolation_from_string("cubic"), Error);
}
