#include <gtest/gtest.h>

#include <set>

#include "prym/forms.hpp"
#include "prym/verify.hpp"

using namespace prym;
using C = std::complex<double>;

namespace {

const BranchConfig<double> kStd = BranchConfig<double>::standard();

const PeriodMatrix<double>& std_pm() {
  static const auto pm = period_matrix(kStd);
  return pm;
}
const CMat<double>& std_tau() {
  static const auto t = normalized_tau(std_pm(), basis_sigma1(), "Sigma_1").tau;
  return t;
}

}  // namespace

TEST(MuTable, DistinctAndEvenSet) {
  std::set<Characteristic> seen;
  for (int j = 1; j <= 8; ++j) {
    auto m = mu_characteristic(j);
    seen.insert(m.reduced());
  }
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(ev_indices(), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_NE(ev_indices(), ev_indices_reference());
}

TEST(Polynomials, HandValues) {
  EXPECT_EQ(polynomial_P(identity_partition(), kStd), 1.0);
  auto r = Partition2222::parse("16.25.34.78");
  EXPECT_EQ(polynomial_P(r, kStd), 15.0);
  EXPECT_EQ(polynomial_P_signed(Partition2222::parse("12.35.46.78"), kStd), -1.0 * (-1) * (-2) * (-2) * (-1));
  EXPECT_EQ(P_map(kStd).size(), 105u);
}

TEST(CrossRatio, IdentityOnStandardConfig) {
  ThetaEvaluator<double> ev(std_tau());
  auto c = cross_ratio_check(kStd, theta_quadruple(ev));
  EXPECT_LT(c.residual, 1e-9);
  EXPECT_LT(c.product, 1e-9);
  EXPECT_LT(c.auxiliary, 1e-9);
  // (1-5)(2-6) / ((1-2)(5-6)) = 16
  EXPECT_DOUBLE_EQ(cross_ratio_rhs(kStd), 16.0);
}

TEST(CrossRatio, RhsIsAffineInvariant) {
  auto cfg = random_configs<double>(17, 1)[0];
  EXPECT_NEAR(cross_ratio_rhs(cfg), cross_ratio_rhs(cfg.affine(2.5, -7.0)), 1e-12 * std::abs(cross_ratio_rhs(cfg)));
}

TEST(Vanishing, PatternAtTorsionPoints) {
  ThetaEvaluator<double> ev(std_tau());
  auto t = normalized_vanishing_table(ev);
  auto ord = vanishing_orders();
  for (int k = 0; k < 4; ++k) {
    double mean = t.row(k).mean();
    for (int j = 0; j < 8; ++j) {
      if (ord[j]) EXPECT_LT(t(k, j) / mean, 1e-6) << k << " " << j;
      else EXPECT_GT(t(k, j) / mean, 1e-3) << k << " " << j;
    }
  }
}

TEST(TauSharp, DirectAgreesWithFractionalLinear) {
  for (auto& c : {coset_of(Partition2222::parse("16.25.34.78")), coset_of(Partition2222::parse("13.24.57.68"))}) {
    auto ts = tau_sharp(std_pm(), std_tau(), c.G);
    EXPECT_LT(ts.agreement, 1e-10);
  }
}

TEST(TSquared, IndependentOfCosetRepresentative) {
  const auto& c = coset_of(Partition2222::parse("14.23.58.67"));
  auto a = T_squared(std_pm(), std_tau(), c.G);
  auto b = T_squared(std_pm(), std_tau(), reflection(1) * c.G);
  EXPECT_LT(std::abs(a.value / b.value - 1.0), 1e-9);
}

TEST(TSquared, RatioForSixInversionPartition) {
  auto t1 = T_squared(std_pm(), std_tau(), QMatrix::identity(12));
  auto tr = T_squared(std_pm(), std_tau(), coset_of(Partition2222::parse("16.25.34.78")).G);
  EXPECT_LT(std::abs(tr.value / t1.value - 15.0), 1e-8);
}

TEST(MainTheorem, AllPartitionsOnStandardConfig) {
  auto rep = theta_map(kStd, std_pm());
  ASSERT_EQ(rep.entries.size(), 105u);
  EXPECT_EQ(rep.reference, "12.34.56.78");
  EXPECT_LT(rep.max_residual, 1e-8);
  EXPECT_GT(rep.max_unsigned_residual, 1.0);
  EXPECT_GT(rep.negative_signs, 0);
  EXPECT_LT(rep.max_tau_agreement, 1e-9);
}

TEST(Trace, RepresentativesAndInvertibility) {
  EXPECT_EQ(trace_representatives(basis_sigma1()).size(), 8u);
  auto t = trace_matrix<double>(QMatrix::identity(12));
  EXPECT_EQ(t.columns.size(), 8u);
  EXPECT_GT(std::abs(t.D.determinant()), 1e-6);
}

TEST(Trace, IdentityTransformIsScalar) {
  auto D = transform_matrix_D<double>(QMatrix::identity(12));
  EXPECT_LT(projective_distance(D, CMat<double>(CMat<double>::Identity(8, 8))), 1e-12);
}

TEST(Trace, ReflectionM25MatchesReferenceMatrix) {
  EXPECT_TRUE(in_delta_stabilizer(reflection_M25()));
  EXPECT_FALSE(in_delta_stabilizer(reflection(2)));
  auto D = transform_matrix_D_ev<double>(reflection_M25());
  EXPECT_LT(projective_distance(D, reference_D_M25<double>()), 1e-12);
  EXPECT_THROW(transform_matrix_D_ev<double>(reflection(2)), std::invalid_argument);
}
