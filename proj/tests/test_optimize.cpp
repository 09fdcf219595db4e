#include <cmath>

#include <gtest/gtest.h>

#include "odmr/optimize.hpp"

namespace odmr {
namespace {

TEST(NelderMead, Quadratic) {
  auto f = [](std::span<const double> x) {
    return (x[0] - 1.5) * (x[0] - 1.5) + 4 * (x[1] + 0.5) * (x[1] + 0.5) + 2.0;
  };
  const std::vector<double> steps{0.5, 0.5};
  const auto r = nelder_mead(f, {0.0, 0.0}, steps, {1000, 1e-8});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.5, 1e-6);
  EXPECT_NEAR(r.x[1], -0.5, 1e-6);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const std::vector<double> steps{0.5, 0.5};
  const auto r = nelder_mead(f, {-1.2, 1.0}, steps, {5000, 1e-9});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMead, BudgetExhaustedReportsBest) {
  int calls = 0;
  auto f = [&](std::span<const double> x) {
    ++calls;
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  };
  const std::vector<double> steps{1, 1, 1};
  const auto r = nelder_mead(f, {5, 5, 5}, steps, {3, 1e-12});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_EQ(r.evaluations, calls);
  EXPECT_LT(r.value, 75.0);
  EXPECT_DOUBLE_EQ(r.value, f(r.x));
}

TEST(NelderMead, ZeroDimensions) {
  int calls = 0;
  auto f = [&](std::span<const double>) {
    ++calls;
    return 3.25;
  };
  const auto r = nelder_mead(f, {}, {}, {});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.evaluations, 1);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(r.value, 3.25);
}

}  // namespace
}  // namespace odmr
