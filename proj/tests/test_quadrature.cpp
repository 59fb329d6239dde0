#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>

#include "prym/quadrature.hpp"

using namespace prym;

TEST(GaussLegendre, TwoPointRule) {
  auto& r = gauss_legendre<double>(2);
  ASSERT_EQ(r.nodes.size(), 2u);
  EXPECT_NEAR(std::abs(r.nodes[0]), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.nodes[0], -r.nodes[1], 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
}

TEST(GaussLegendre, WeightsSumAndPolynomialExactness) {
  for (int n : {5, 16, 64, 256}) {
    auto& r = gauss_legendre<double>(n);
    EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 2.0, 1e-13) << n;
    // x^{2n-2} integrates to 2/(2n-1)
    double s = 0;
    int d = std::min(2 * n - 2, 40);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
    EXPECT_NEAR(s, 2.0 / (d + 1), 1e-13) << n;
  }
}

// int_{-1}^1 (1-x)^a (1+x)^b x^0 dx = 2^{a+b+1} B(a+1, b+1)
TEST(GaussJacobi, MomentsAgainstBetaFunction) {
  for (double a : {-0.75, -0.25, 0.0}) {
    for (double b : {-0.75, -0.5, 0.0}) {
      auto& r = gauss_jacobi<double>(24, a, b);
      double w = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
      double ref = std::pow(2.0, a + b + 1) * boost::math::beta(a + 1, b + 1);
      EXPECT_NEAR(w, ref, 1e-12 * ref) << a << " " << b;
      // first moment: int (1-x)^a(1+x)^b (1+x) = 2^{a+b+2} B(a+1, b+2)
      double m1 = 0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) m1 += r.weights[i] * (1 + r.nodes[i]);
      double ref1 = std::pow(2.0, a + b + 2) * boost::math::beta(a + 1, b + 2);
      EXPECT_NEAR(m1, ref1, 1e-12 * ref1);
    }
  }
}

// int (1-x)^a (1+x)^b e^x dx = e^{-1} sum_k 2^{a+b+k+1} B(a+1, b+k+1) / k!
TEST(GaussJacobi, ExponentialAgainstSeriesOracle) {
  const double a = -0.75, b = -0.25;
  long double ref = 0, fact = 1;
  for (int k = 0; k < 60; ++k) {
    if (k) fact *= k;
    ref += std::pow(2.0L, a + b + k + 1) * boost::math::beta<long double>(a + 1, b + k + 1) / fact;
  }
  ref *= std::exp(-1.0L);
  auto f = [&](int n) {
    auto& r = gauss_jacobi<double>(n, a, b);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::exp(r.nodes[i]);
    return std::abs(s - double(ref)) / double(ref);
  };
  EXPECT_GT(f(2), f(4));
  EXPECT_GT(f(4), 1e3 * f(8));
  for (int n : {8, 64, 1024}) EXPECT_LT(f(n), 1e-14) << n;
}

TEST(GaussJacobi, LongDoubleAgreesWithDouble) {
  auto& rd = gauss_jacobi<double>(32, -0.75, -0.75);
  auto& rl = gauss_jacobi<long double>(32, -0.75L, -0.75L);
  for (std::size_t i = 0; i < rd.nodes.size(); ++i) {
    EXPECT_NEAR(rd.nodes[i], double(rl.nodes[i]), 1e-14);
    EXPECT_NEAR(rd.weights[i], double(rl.weights[i]), 1e-13);
  }
}
