#include <gtest/gtest.h>

#include <random>
#include <set>

#include "prym/f2geom.hpp"

using namespace prym;

namespace {

Perm random_perm(std::mt19937& rng) {
  Perm p = identity_perm();
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST(Partitions, Counts) {
  EXPECT_EQ(enumerate_partitions2222().size(), 105u);
  EXPECT_EQ(enumerate_partitions44().size(), 35u);
}

TEST(Partitions, StringRoundTrip) {
  for (auto& r : enumerate_partitions2222()) EXPECT_EQ(Partition2222::parse(r.str()), r);
  EXPECT_EQ(identity_partition().str(), "12.34.56.78");
  EXPECT_THROW(Partition2222::parse("12.34.56.77"), std::invalid_argument);
}

TEST(Partitions, PairingSignByHand) {
  EXPECT_EQ(Partition2222::parse("12.34.56.78").pairing_sign(), 1);
  EXPECT_EQ(Partition2222::parse("13.24.57.68").pairing_sign(), 1);   // two adjacent swaps
  EXPECT_EQ(Partition2222::parse("12.35.46.78").pairing_sign(), -1);  // one inversion
  EXPECT_EQ(Partition2222::parse("16.25.34.78").pairing_sign(), 1);   // six inversions
}

TEST(Partitions, OrbitOfIdentityIsEverything) {
  std::set<Partition2222> orbit;
  for (auto& p : all_perms()) orbit.insert(identity_partition().act(p));
  EXPECT_EQ(orbit.size(), 105u);
}

TEST(Perm, ComposeIsRightAction) {
  std::mt19937 rng(1);
  for (int t = 0; t < 200; ++t) {
    Perm s = random_perm(rng), u = random_perm(rng);
    Perm su = s * u;
    for (int j = 0; j < 8; ++j) EXPECT_EQ(su[j], u[s[j]]);
    Perm e = s * inverse(s);
    EXPECT_EQ(e, identity_perm());
    EXPECT_EQ(perm_sign(su), perm_sign(s) * perm_sign(u));
  }
}

TEST(F2, QuadraticFormValues) {
  EXPECT_EQ(quadratic_form(F2Class::from_points({0, 1})), 1);
  EXPECT_EQ(quadratic_form(F2Class::from_points({0, 1, 2, 3})), 0);
  EXPECT_EQ(quadratic_form(F2Class()), 0);
  // complement gives the same class
  EXPECT_EQ(F2Class::from_points({0, 1, 2, 3}), F2Class::from_points({4, 5, 6, 7}));
  EXPECT_THROW(F2Class(0b1), std::invalid_argument);
}

TEST(F2, CoordinatesRoundTrip) {
  for (int c = 0; c < 64; ++c) EXPECT_EQ(F2Class::from_coords(static_cast<std::uint8_t>(c)).coords(), c);
}

TEST(F2, SingularVectorsAreSplits) {
  std::set<F2Class> splits, singular;
  for (auto& s : enumerate_partitions44()) splits.insert(s.to_class());
  for (int c = 1; c < 64; ++c) {
    auto v = F2Class::from_coords(static_cast<std::uint8_t>(c));
    if (quadratic_form(v) == 0) singular.insert(v);
  }
  EXPECT_EQ(splits, singular);
}

TEST(Orthogonal, HomomorphismAndQPreservation) {
  std::mt19937 rng(2);
  for (int t = 0; t < 300; ++t) {
    Perm s = random_perm(rng), u = random_perm(rng);
    auto ms = perm_to_orthogonal(s), mu = perm_to_orthogonal(u);
    EXPECT_EQ(perm_to_orthogonal(s * u), ms * mu);
    EXPECT_TRUE(ms.preserves_q());
    EXPECT_EQ(orthogonal_to_perm(ms), s);
  }
  EXPECT_EQ(perm_to_orthogonal(identity_perm()), OrthogonalMap::identity());
}

TEST(Orthogonal, ActionMatchesClassAction) {
  std::mt19937 rng(3);
  for (int t = 0; t < 100; ++t) {
    Perm s = random_perm(rng);
    auto m = perm_to_orthogonal(s);
    for (int c = 0; c < 64; ++c) {
      auto v = F2Class::from_coords(static_cast<std::uint8_t>(c));
      EXPECT_EQ(m.apply(v.coords()), v.act(s).coords());
    }
  }
}

TEST(Subspace, PartitionSpaceIsTotallyIsotropic) {
  for (auto& r : enumerate_partitions2222()) {
    auto sp = span(partition_subspace(r));
    EXPECT_EQ(sp.size(), 8u);
    // q is not identically 0 on V_I but the polar form vanishes
    for (auto& a : sp)
      for (auto& b : sp) EXPECT_EQ(quadratic_form(a + b) ^ quadratic_form(a) ^ quadratic_form(b), 0);
  }
}
