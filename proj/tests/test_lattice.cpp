#include <gtest/gtest.h>

#include <random>
#include <set>

#include "prym/lattice.hpp"

using namespace prym;

TEST(Intersection, DeterminantAndSymmetry) {
  QMatrix M = intersection_matrix();
  EXPECT_EQ(M.det(), 64);
  EXPECT_EQ(M.transpose(), -M);
}

TEST(Rho, SquareIsMinusOneAndIsometry) {
  QMatrix R = rho_matrix();
  EXPECT_EQ(R * R, -QMatrix::identity(12));
  EXPECT_TRUE(preserves_pairing(R));
  EXPECT_EQ(rho_apply(A(3)), B(3));
}

TEST(Sigma1, GramAndRho) {
  QMatrix S = basis_sigma1();
  EXPECT_EQ(S.det() * S.det(), 64);  // index 8 in H
  EXPECT_EQ(gram_half(S), symplectic_form({-1, -1, -1, -1, -1, -1}));
  EXPECT_EQ(rho_on_basis(S), rho_block(U_matrix()));
  EXPECT_TRUE(check_good(S).ok());
}

TEST(Sigma, TypeTwoTwoTwoOneOneOne) {
  QMatrix G = gram_full(basis_sigma());
  QMatrix E = symplectic_form({2, 2, 2, 1, 1, 1});
  EXPECT_EQ(G, E);
  EXPECT_EQ(basis_sigma().det() * basis_sigma().det(), 1);
}

TEST(SigmaB, UnimodularRhoStableAndEqualToL1) {
  QMatrix SB = basis_sigmaB();
  EXPECT_EQ(gram_half(SB), good_gram());
  EXPECT_TRUE(basis_change(SB, basis_sigma1()).is_integral());
  EXPECT_TRUE(basis_change(basis_sigma1(), SB).is_integral());
  EXPECT_TRUE((one_minus_rho_H() * SB.inverse()).is_integral());
}

TEST(SigmaB, FirstBlockDoublingIsNotPrincipal) {
  QMatrix SP = basis_sigmaB_first_doubled();
  EXPECT_NE(gram_half(SP), good_gram());
}

TEST(Boundary, A7A8Relations) {
  QMatrix s = A8();
  for (int j = 1; j <= 6; ++j) s = s + A(j);
  s = s + A7();
  EXPECT_EQ(s, QMatrix(1, 12));
  // sum_{j<=7} (1 + rho + ... + rho^{j-1}) A_j = 0
  std::vector<QMatrix> Aj;
  for (int j = 1; j <= 6; ++j) Aj.push_back(A(j));
  Aj.push_back(A7());
  QMatrix t(1, 12);
  for (int j = 0; j < 7; ++j) {
    QMatrix v = Aj[j], acc(1, 12);
    for (int m = 0; m <= j; ++m) acc = acc + v, v = rho_apply(v);
    t = t + acc;
  }
  EXPECT_EQ(t, QMatrix(1, 12));
}

TEST(Reflections, UnitaryAndTranspositionImages) {
  for (int p = 1; p <= 7; ++p) {
    const QMatrix& G = reflection(p);
    EXPECT_TRUE(in_unitary_group(G)) << p;
    EXPECT_EQ(perm_image(G), transposition(p - 1, p)) << p;
    // root goes to -rho(root)
    QMatrix r = reflection_root(p);
    EXPECT_EQ(r * G, -rho_apply(r));
  }
  EXPECT_TRUE(in_unitary_group(reflection_M25()));
  EXPECT_EQ(perm_image(reflection_M25()), transposition(1, 4));
}

TEST(Reflections, RandomWordsStayInGroup) {
  std::mt19937 rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<int> w;
    for (int k = 0; k < 6; ++k) w.push_back(1 + int(rng() % 7));
    QMatrix G = word_element(w);
    EXPECT_TRUE(in_unitary_group(G));
    Perm expect = identity_perm();
    for (int p : w) expect = expect * transposition(p - 1, p);
    EXPECT_EQ(perm_image(G), expect);
  }
}

TEST(Cosets, TableIsComplete) {
  const auto& reps = coset_representatives();
  ASSERT_EQ(reps.size(), 105u);
  std::set<Partition2222> seen;
  for (auto& c : reps) {
    seen.insert(c.partition);
    EXPECT_EQ(identity_partition().act(c.perm), c.partition);
    EXPECT_TRUE(check_good(basis_sigma1() * c.G).ok()) << c.partition.str();
  }
  EXPECT_EQ(seen.size(), 105u);
  auto e = even_representative(coset_of(Partition2222::parse("12.35.46.78")));
  EXPECT_EQ(e.word.size() % 2, 0u);
  EXPECT_EQ(identity_partition().act(e.perm), Partition2222::parse("12.35.46.78"));
}

TEST(Translation, DeltaMembershipAndClass) {
  std::set<F2Class> c0;
  for (auto& c : coset_representatives()) {
    QMatrix sigma = basis_change(basis_sigma1() * c.G, basis_sigmaB());
    EXPECT_TRUE(is_symplectic(sigma));
    QMatrix d = translation_vector(sigma);
    EXPECT_TRUE(delta_membership(d)) << c.partition.str();
    c0.insert(half_delta_class(d) + F2Class::from_coords(orthogonal_image(c.G).apply(Delta_bar().coords())));
  }
  EXPECT_EQ(c0.size(), 1u);
}

TEST(Translation, IdentityHasZeroDeltaOnSigma1) {
  QMatrix d = translation_vector(QMatrix::identity(12));
  EXPECT_EQ(d, QMatrix(1, 12));
}

TEST(Torsion, PointsAreHalfPeriods) {
  for (int k = 1; k <= 8; ++k) {
    QMatrix t = torsion_point(k) * Rat(2);
    EXPECT_TRUE(t.is_integral());
  }
  EXPECT_EQ(torsion_point(1), QMatrix(1, 12));
}
