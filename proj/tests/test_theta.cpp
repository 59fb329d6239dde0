#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <random>

#include "prym/theta.hpp"

using namespace prym;
using C = std::complex<double>;
using CM = CMat<double>;
using CV = CVec<double>;

namespace {

const CM& std_tau() {
  static const CM t = normalized_tau(period_matrix(BranchConfig<double>::standard()), basis_sigma1(), "Sigma_1").tau;
  return t;
}

// 1-D theta with characteristic (a, b) by direct summation
C theta1(C t, double a, double b, C z) {
  C s = 0;
  for (int n = -40; n <= 40; ++n) {
    double v = n + a;
    s += std::exp(C(0, 2 * std::numbers::pi) * (0.5 * v * v * t + v * (z + b)));
  }
  return s;
}

Characteristic half_char(int bits) {
  Characteristic m;
  for (int i = 0; i < 12; ++i) m.m[i] = Rat((bits >> i) & 1) / 2;
  return m;
}

CV probe(double s) {
  CV z(6);
  for (int i = 0; i < 6; ++i) z(i) = C(s * (0.3 - 0.1 * i), s * 0.05 * (i + 1));
  return z;
}

}  // namespace

TEST(ThetaOracle, ScalarIdentityTau) {
  CM tau = CM::Identity(6, 6) * C(0, 1);
  double t3 = std::pow(std::numbers::pi, 0.25) / boost::math::tgamma(0.75);
  auto v = theta_constant(Characteristic(), tau);
  EXPECT_NEAR(std::abs(v.value - std::pow(t3, 6)), 0, 1e-12);
}

TEST(ThetaOracle, DiagonalTauFactorizes) {
  CM tau = CM::Zero(6, 6);
  for (int i = 0; i < 6; ++i) tau(i, i) = C(0.1 * i - 0.2, 0.6 + 0.3 * i);
  Characteristic m;
  for (int i = 0; i < 6; ++i) m.m[i] = Rat(i % 3, 3), m.m[6 + i] = Rat(1, 2 + i % 2);
  CV z = probe(1.0);
  C ref = 1;
  for (int i = 0; i < 6; ++i) ref *= theta1(tau(i, i), m.m[i].get_d(), m.m[6 + i].get_d(), z(i));
  auto v = theta(m, tau, z);
  EXPECT_LT(std::abs(v.value - ref), 1e-11 * std::max(1.0, std::abs(ref)));
}

TEST(ThetaEnumeration, MatchesBruteForceBox) {
  ThetaEvaluator<double> ev(std_tau());
  RMat<double> Y = std_tau().imag();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 3; ++t) {
    std::array<double, 6> c;
    for (auto& x : c) x = u(rng);
    double r2 = 1.5;
    long brute = 0;
    const int B = 4;
    std::array<int, 6> xi;
    std::function<void(int)> rec = [&](int i) {
      if (i == 6) {
        double q = 0;
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b) q += (xi[a] - c[a]) * Y(a, b) * (xi[b] - c[b]);
        brute += q <= r2;
        return;
      }
      for (xi[i] = -B; xi[i] <= B; ++xi[i]) rec(i + 1);
    };
    rec(0);
    EXPECT_EQ(ev.count_points(c, r2), brute);
  }
}

TEST(ThetaEnumeration, TailBoundIsSound) {
  ThetaOptions<double> loose, tight;
  loose.tol = 1e-5;
  tight.tol = 1e-15;
  Characteristic m = half_char(0b000011000101);
  CV z = probe(0.5);
  auto a = theta(m, std_tau(), z, loose), b = theta(m, std_tau(), z, tight);
  EXPECT_LE(std::abs(a.value - b.value), a.tail_bound + b.tail_bound);
  EXPECT_LT(a.terms, b.terms);
}

TEST(ThetaEnumeration, ThreadCountDoesNotChangeTheSum) {
  ThetaOptions<double> one, four;
  one.threads = 1;
  four.threads = 4;
  Characteristic m = half_char(0b101010010101);
  auto a = theta(m, std_tau(), probe(1.0), one), b = theta(m, std_tau(), probe(1.0), four);
  EXPECT_EQ(a.value, b.value);
}

TEST(ThetaIdentities, QuasiPeriodicity) {
  ThetaEvaluator<double> ev(std_tau());
  Characteristic m;
  for (int i = 0; i < 6; ++i) m.m[i] = Rat(i, 7), m.m[6 + i] = Rat(1, 5);
  CV z = probe(1.0);
  C th = ev(m, z).value;
  for (int j = 0; j < 6; ++j) {
    CV z1 = z;
    z1(j) += 1;
    EXPECT_LT(std::abs(ev(m, z1).value - e_rat<double>(m.m[j]) * th), 1e-10 * std::abs(th));
    CV z2 = z + std_tau().row(j);
    C f = e_cx<double>(-0.5 * std_tau()(j, j) - z(j)) * e_rat<double>(-m.m[6 + j]);
    EXPECT_LT(std::abs(ev(m, z2).value - f * th), 1e-9 * std::abs(f * th));
  }
}

TEST(ThetaIdentities, IntegerCharacteristicShift) {
  ThetaEvaluator<double> ev(std_tau());
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    Characteristic m = half_char(int(rng() % 4096)), n;
    for (int i = 0; i < 12; ++i) n.m[i] = int(rng() % 5) - 2;
    Rat ph = 0;
    for (int i = 0; i < 6; ++i) ph += m.m[i] * n.m[6 + i];
    C a = ev(m + n, probe(0.7)).value, b = ev(m, probe(0.7)).value;
    EXPECT_LT(std::abs(a - e_rat<double>(ph) * b), 1e-10 * std::max(1.0, std::abs(b)));
  }
}

TEST(ThetaIdentities, OddConstantsVanish) {
  ThetaEvaluator<double> ev(std_tau());
  int odd = 0;
  for (int bits = 0; bits < 4096; bits += 37) {
    Characteristic m = half_char(bits);
    double v = std::abs(ev(m).value);
    if (m.parity()) {
      ++odd;
      EXPECT_LT(v, 1e-12);
    }
  }
  EXPECT_GT(odd, 10);
}

TEST(ThetaIdentities, ShiftByU) {
  CM tu = std_tau() + U_complex<double>();
  ThetaEvaluator<double> ev(std_tau()), evu(tu);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 8; ++t) {
    Characteristic m = half_char(int(rng() % 4096));
    auto s = tau_shift_U(m);
    C a = evu(m, probe(0.4)).value, b = e_rat<double>(s.phase) * ev(s.m, probe(0.4)).value;
    EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a))) << m.str();
  }
}

TEST(Characteristics, TransformRequiresSymplectic) {
  Characteristic m = half_char(0b110);
  EXPECT_EQ(transform_characteristic(QMatrix::identity(12), m), m);
  EXPECT_THROW(transform_characteristic(QMatrix::identity(12) * Rat(2), m), std::invalid_argument);
  EXPECT_TRUE(is_symplectic(sigma_U()));
}

TEST(Characteristics, ParityAndReduction) {
  EXPECT_EQ(Characteristic::half_mu({1, 0, 0, 0, 0, 0}).parity(), 1);
  EXPECT_EQ(Characteristic().parity(), 0);
  Characteristic m = half_char(0b1);
  Characteristic n = m;
  n.m[0] += 3;
  EXPECT_TRUE(m.congruent(n));
  EXPECT_EQ(n.reduced(), m);
}

TEST(CConstants, NormalizationAndRatios) {
  QMatrix Z(1, 6);
  C c00 = c_constant(Z, Z, std_tau());
  EXPECT_LT(std::abs(c00 - 1.0), 1e-9);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 6; ++t) {
    QMatrix a(1, 6), b(1, 6);
    for (int i = 0; i < 6; ++i) a[i] = Rat(int(rng() % 2), 2), b[i] = Rat(int(rng() % 2), 2);
    C c = c_constant(a, b, std_tau());
    EXPECT_LT(std::abs(c / c00 - e_rat<double>(c_ratio_exponent(a, b))), 1e-8);
  }
}

TEST(Quadratic, RelationsHoldOnStandardTau) {
  ThetaEvaluator<double> ev(std_tau());
  ThetaConstantCache<double> th(ev);
  auto v1s = admissible_v1();
  ASSERT_FALSE(v1s.empty());
  for (std::size_t i = 0; i < v1s.size(); i += 3) {
    auto r1 = quadratic_item1(v1s[i], th);
    EXPECT_LT(r1.residual(), 1e-9 * std::max(1.0, std::abs(r1.rhs)));
    auto r2 = quadratic_item2(v1s[i], th, false), r3 = quadratic_item2(v1s[i], th, true);
    EXPECT_LT(r2.residual(), 1e-9 * std::max(1.0, std::abs(r2.rhs)));
    EXPECT_LT(r3.residual(), 1e-9 * std::max(1.0, std::abs(r3.rhs)));
  }
}
