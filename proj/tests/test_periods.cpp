#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "prym/periods.hpp"

using namespace prym;

namespace {

// Independent evaluation of alpha_j (j = 1..7) by tanh-sinh in long double.
std::complex<long double> alpha_oracle(const BranchConfig<double>& cfg, int j, int k) {
  const int e = k < 5 ? 3 : 1;
  const long double a = cfg.x[j - 1], b = cfg.x[j];
  auto f = [&](long double z, long double zc) {
    long double r = 1;
    for (int m = 0; m < 8; ++m) {
      long double d = std::abs(z - (long double)cfg.x[m]);
      if ((m == j - 1 && z < (a + b) / 2) || (m == j && z >= (a + b) / 2)) d = std::abs(zc);
      r *= d;
    }
    long double v = std::pow(r, -e / 4.0L);
    return k < 5 ? v * std::pow(z, k) : v;
  };
  boost::math::quadrature::tanh_sinh<long double> ts;
  long double mag = ts.integrate(f, a, b);
  long double ang = -std::numbers::pi_v<long double> * e * (8 - j) / 4;
  return std::polar(mag, ang);
}

const BranchConfig<double> kStd = BranchConfig<double>::standard();

}  // namespace

TEST(Alpha, FiniteIntervalsMatchTanhSinh) {
  std::vector<BranchConfig<double>> cfgs = {kStd, random_configs<double>(7, 1)[0]};
  for (auto& cfg : cfgs)
    for (int j = 1; j <= 7; ++j)
      for (int k = 0; k < 6; ++k) {
        auto v = alpha_integral(cfg, j, k).value;
        auto o = alpha_oracle(cfg, j, k);
        std::complex<double> od(double(o.real()), double(o.imag()));
        EXPECT_LT(std::abs(v - od) / std::abs(od), 1e-11) << j << " " << k;
      }
}

TEST(Alpha, InfiniteIntervalTwoMethodsAgree) {
  for (auto& cfg : {kStd, random_configs<double>(11, 1)[0]})
    for (int k = 0; k < 6; ++k) {
      auto a = alpha_integral(cfg, 8, k).value;
      auto b = alpha8_rays(cfg, k, 256);
      EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-8) << k;
    }
}

TEST(Alpha, RefinementConverges) {
  QuadOptions<double> o;
  o.nodes = 16;
  for (int j : {1, 4, 8}) {
    auto v = alpha_integral(kStd, j, 2, o);
    EXPECT_TRUE(v.converged);
    EXPECT_LT(v.error, 1e-12 * std::max(1.0, std::abs(v.value)));
    EXPECT_GT(v.nodes, 16);
  }
  o.refine = false;
  EXPECT_EQ(alpha_integral(kStd, 3, 0, o).nodes, 16);
}

TEST(PeriodMatrix, RelationsAndGates) {
  auto pm = period_matrix(kStd);
  EXPECT_TRUE(pm.converged);
  auto [r1, r2] = boundary_residuals(pm);
  EXPECT_LT(r1, 1e-10);
  EXPECT_LT(r2, 1e-10);
  auto nt = normalized_tau(pm, basis_sigma1(), "Sigma_1");
  EXPECT_LT(nt.symmetry, 1e-10);
  EXPECT_GT(nt.min_imag_eig, 0);
  EXPECT_LT(rho_relation_residual(nt.tau), 1e-10);
  EXPECT_NEAR(std::abs(det_minus_U_tau_plus_I(nt.tau) + 8.0), 0, 1e-9);
}

TEST(PeriodMatrix, TauIsAffineInvariant) {
  auto t0 = normalized_tau(period_matrix(kStd), basis_sigma1(), "a").tau;
  auto t1 = normalized_tau(period_matrix(kStd.affine(0.7, -3.1)), basis_sigma1(), "b").tau;
  EXPECT_LT((t0 - t1).norm() / t0.norm(), 1e-10);
}

TEST(PeriodMatrix, BallPointNegativeOnRandomConfigs) {
  for (auto& cfg : random_configs<double>(20240917, 20)) {
    auto pm = period_matrix(cfg);
    EXPECT_LT(ball_point(pm).norm, 0);
    auto nt = normalized_tau(pm, basis_sigma1(), "r", false);
    EXPECT_GT(nt.min_imag_eig, 0);
  }
}

TEST(PeriodMatrix, LongDoubleAgrees) {
  auto td = normalized_tau(period_matrix(kStd), basis_sigma1(), "d").tau;
  auto tl = normalized_tau(period_matrix(BranchConfig<long double>::standard()), basis_sigma1(), "l").tau;
  double diff = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      diff = std::max(diff, std::abs(td(i, j) - std::complex<double>(double(tl(i, j).real()), double(tl(i, j).imag()))));
  EXPECT_LT(diff, 1e-11);
}

TEST(Branch, PhasesMatchAnalyticContinuation) {
  auto bc = branch_continuation_check(kStd);
  EXPECT_LT(bc.max_phase_error, 1e-9);
  EXPECT_LT(bc.closure_error, 1e-9);
}

TEST(Config, InvalidInputsThrow) {
  EXPECT_THROW(BranchConfig<double>::from({1, 2, 3, 4, 5, 6, 7}), std::invalid_argument);
  EXPECT_THROW(BranchConfig<double>::from({1, 3, 2, 4, 5, 6, 7, 8}), std::invalid_argument);
  EXPECT_THROW(BranchConfig<double>::from({1, 1, 2, 4, 5, 6, 7, 8}), std::invalid_argument);
  EXPECT_THROW(BranchConfig<double>::from({1, 2, 3, 4, 5, 6, 7, std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
}

TEST(Config, RandomConfigsAreSeededAndSeparated) {
  auto a = random_configs<double>(5, 4), b = random_configs<double>(5, 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_GE(a[i].min_gap(), 0.3);
  }
}
