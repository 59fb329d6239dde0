#pragma once

#include <array>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "f2geom.hpp"
#include "qmatrix.hpp"

// Exact arithmetic on H = H_1(C,Z)^- in the basis (A_1..A_6, B_1..B_6).
// Lattice vectors are 1x12 rows; a group element G acts by v -> v * G, so the
// rows of G are the images of A_1..B_6 and a product G1 * G2 applies G1 first.

namespace prym {

inline QMatrix unit(int i) {
  QMatrix v(1, 12);
  v[i] = 1;
  return v;
}
inline QMatrix A(int j) { return unit(j - 1); }
inline QMatrix B(int j) { return unit(5 + j); }

inline QMatrix P_matrix() {
  QMatrix P(6, 6);
  for (int i = 0; i < 5; ++i) P(i, i + 1) = 1, P(i + 1, i) = -1;
  return P;
}

inline QMatrix Q_matrix() {
  QMatrix Q(6, 6);
  for (int i = 0; i < 6; ++i) Q(i, i) = 2;
  for (int i = 0; i < 5; ++i) Q(i, i + 1) = -1, Q(i + 1, i) = -1;
  return Q;
}

// Intersection form (,) on (A, B).
inline QMatrix intersection_matrix() {
  QMatrix M(12, 12), P = P_matrix(), Q = Q_matrix();
  M.set_block(0, 0, P);
  M.set_block(0, 6, Q);
  M.set_block(6, 0, -Q);
  M.set_block(6, 6, P);
  return M;
}

// <,> = (,)/2
inline QMatrix half_pairing_matrix() { return intersection_matrix() * Rat(1, 2); }

inline Rat full_pairing(const QMatrix& x, const QMatrix& y) {
  return (x * intersection_matrix() * y.transpose())(0, 0);
}
inline Rat pairing(const QMatrix& x, const QMatrix& y) {
  return (x * half_pairing_matrix() * y.transpose())(0, 0);
}

// rho(A_j) = B_j, rho(B_j) = -A_j.
inline QMatrix rho_matrix() {
  QMatrix R(12, 12);
  for (int j = 0; j < 6; ++j) R(j, 6 + j) = 1, R(6 + j, j) = -1;
  return R;
}
inline QMatrix rho_apply(const QMatrix& x) { return x * rho_matrix(); }

// h(x,y) = <x, rho y> - <x,y> i, returned as (real, imaginary).
struct GaussRat {
  Rat re, im;
  bool operator==(const GaussRat&) const = default;
};
inline GaussRat hermitian_form(const QMatrix& x, const QMatrix& y) {
  return {pairing(x, rho_apply(y)), -pairing(x, y)};
}

inline QMatrix U_matrix() {
  return {{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 0, -1, 0, 0},
          {0, 0, -1, 0, 0, 0}, {0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 1}};
}
inline QMatrix U0_vector() { return {{1, 1, 0, 0, 1, 1}}; }

// (0 -U; U 0)
inline QMatrix rho_block(const QMatrix& U) {
  QMatrix T(12, 12);
  T.set_block(0, 6, -U);
  T.set_block(6, 0, U);
  return T;
}

// (0 e; -e 0) for a diagonal e.
inline QMatrix symplectic_form(const std::array<long, 6>& e) {
  QMatrix J(12, 12);
  for (int i = 0; i < 6; ++i) J(i, 6 + i) = e[i], J(6 + i, i) = -e[i];
  return J;
}
inline QMatrix standard_J() { return symplectic_form({1, 1, 1, 1, 1, 1}); }

inline QMatrix gram_half(const QMatrix& basis) {
  return basis * half_pairing_matrix() * basis.transpose();
}
inline QMatrix gram_full(const QMatrix& basis) {
  return basis * intersection_matrix() * basis.transpose();
}

// Matrix T with rho(basis) = T * basis.
inline QMatrix rho_on_basis(const QMatrix& basis) {
  return basis * rho_matrix() * basis.inverse();
}

inline QMatrix basis_sigma1() {
  std::vector<QMatrix> v = {
      A(1),
      A(1) + A(2) + B(2),
      A(1) + A(2) + B(2) + B(3),
      A(1) + A(2) - A(4) + B(2) + B(3) + B(4),
      A(1) + A(2) + A(5) + B(2) + B(3),
      A(1) + A(2) + A(5) + A(6) + B(2) + B(3) + B(6),
      -B(1),
      A(2) - B(1) - B(2),
      -A(2) - A(3) - A(4) + B(1) + B(2) - B(4),
      -A(2) - A(3) + B(1) + B(2),
      A(2) + A(3) - B(1) - B(2) - B(5),
      A(2) + A(3) + A(6) - B(1) - B(2) - B(5) - B(6),
  };
  return QMatrix::vstack(v);
}

// alpha'_1..6, beta'_1..6: a Z-basis of H of type diag(2,2,2,1,1,1).
inline QMatrix basis_sigma() {
  auto s = [](long k, const QMatrix& v) { return v * Rat(k); };
  std::vector<QMatrix> v = {
      s(2, A(1)) + s(2, A(3)) + A(4) + B(4),
      s(2, A(1)) + A(2) + s(2, A(5)) + s(2, A(6)) + B(2) - s(2, B(4)) - s(2, B(5)),
      A(1) + s(2, A(2)) + A(3) + A(5) + s(2, A(6)) - B(1) + B(3) - B(5),
      A(1),
      A(1) + A(3),
      -A(1) - A(3) + B(5),
      s(2, A(1)) + s(2, A(3)) + A(5) + s(2, A(6)) - B(5),
      -A(1) - s(2, A(2)) - s(2, A(5)) - s(2, A(6)) + B(1) + s(2, B(4)) + s(2, B(5)),
      A(4) - A(6) + B(4) + s(2, B(5)) + B(6),
      A(2),
      A(4),
      A(6),
  };
  return QMatrix::vstack(v);
}

// Sigma_B: alpha'_j, and beta'_j scaled by -1 (j = 1,2,3) or -2 (j = 4,5,6).
// This is the scaling that makes <,> unimodular with the orientation of Sigma_1.
inline QMatrix basis_sigmaB() {
  QMatrix S = basis_sigma();
  for (int j = 0; j < 6; ++j) {
    Rat k = j < 3 ? -1 : -2;
    S.set_row(6 + j, S.row_at(6 + j) * k);
  }
  return S;
}

// The alternative scaling with beta'_1..3 doubled; not principal.
inline QMatrix basis_sigmaB_first_doubled() {
  QMatrix S = basis_sigma();
  for (int j = 0; j < 3; ++j) S.set_row(6 + j, S.row_at(6 + j) * Rat(2));
  return S;
}

// Gram of every good basis under <,>.
inline QMatrix good_gram() { return symplectic_form({-1, -1, -1, -1, -1, -1}); }

// Membership (H-coefficient) diagonal of Sigma_B: (r,s)(alpha,beta) lies in H iff
// r in Z^6 and s in Z^3 + (1/2)Z^3.
inline std::array<long, 6> sigmaB_e() { return {1, 1, 1, 2, 2, 2}; }

inline bool in_lattice(const QMatrix& basis, const QMatrix& v) {
  return (v * basis.inverse()).is_integral();
}

// Rows spanning (1 - rho) H.
inline QMatrix one_minus_rho_H() { return QMatrix::identity(12) - rho_matrix(); }

// ---- group elements ----------------------------------------------------

inline bool preserves_pairing(const QMatrix& G) {
  auto J = half_pairing_matrix();
  return G * J * G.transpose() == J;
}
inline bool commutes_with_rho(const QMatrix& G) {
  auto R = rho_matrix();
  return G * R == R * G;
}
inline bool in_unitary_group(const QMatrix& G) {
  return G.is_integral() && preserves_pairing(G) && commutes_with_rho(G);
}

// Complex reflection with root r and eigenvalue -rho: r -> -rho(r), identity on
// the vectors v with <v,r> = <v,rho r> = 0. Built by solving a linear system.
inline QMatrix reflection_for_root(const QMatrix& r) {
  QMatrix rr = rho_apply(r);
  QMatrix J = half_pairing_matrix();
  QMatrix cons(12, 2);
  QMatrix c1 = J * r.transpose(), c2 = J * rr.transpose();
  for (int i = 0; i < 12; ++i) cons(i, 0) = c1(i, 0), cons(i, 1) = c2(i, 0);
  QMatrix ker = cons.left_kernel();
  if (ker.rows() != 10) throw std::domain_error("reflection: degenerate root");
  QMatrix basis = QMatrix::vstack({r, rr, ker});
  QMatrix images = QMatrix::vstack({-rr, r, ker});
  QMatrix G = basis.inverse() * images;
  if (!G.is_integral()) throw std::domain_error("reflection: not integral");
  return G;
}

// A_7 = rho(A1 + A2 + B2 + B3 + A5 + A6 + B6), from the two boundary relations.
inline QMatrix A7() { return rho_apply(A(1) + A(2) + B(2) + B(3) + A(5) + A(6) + B(6)); }
inline QMatrix A8() {
  QMatrix s = A7();
  for (int j = 1; j <= 6; ++j) s = s + A(j);
  return -s;
}

inline QMatrix reflection_root(int p) {
  if (p < 1 || p > 7) throw std::out_of_range("reflection: p must be 1..7");
  return p == 7 ? A7() : A(p);
}

// M_{p,p+1}
inline const QMatrix& reflection(int p) {
  static const std::array<QMatrix, 7> table = [] {
    std::array<QMatrix, 7> t;
    for (int q = 1; q <= 7; ++q) t[q - 1] = reflection_for_root(reflection_root(q));
    return t;
  }();
  if (p < 1 || p > 7) throw std::out_of_range("reflection: p must be 1..7");
  return table[p - 1];
}

// An element of the Delta-stabilizer mapping to the transposition (2,5).
inline QMatrix reflection_M25() { return reflection_for_root(A(2) + A(3) + A(4)); }

inline QMatrix word_element(const std::vector<int>& word) {
  QMatrix G = QMatrix::identity(12);
  for (int p : word) G = G * reflection(p);
  return G;
}

// ---- marking mod 2: H / (1-rho)H -> V, A_j, B_j -> class(e_j + e_{j+1}) ----

inline F2Class mark_mod2(const QMatrix& v) {
  std::uint8_t c = 0;
  for (int j = 0; j < 6; ++j) {
    Rat s = v[j] + v[6 + j];
    if (s.get_den() != 1) throw std::domain_error("mark_mod2: non-integral vector");
    if (mpz_odd_p(s.get_num_mpz_t())) c |= static_cast<std::uint8_t>(1u << j);
  }
  return F2Class::from_coords(c);
}

inline OrthogonalMap orthogonal_image(const QMatrix& G) {
  OrthogonalMap m;
  for (int j = 0; j < 6; ++j) m.rows[j] = mark_mod2(A(j + 1) * G).coords();
  return m;
}

inline Perm perm_image(const QMatrix& G) { return orthogonal_to_perm(orthogonal_image(G)); }

// ---- good bases Sigma_g = g(Sigma_1) -------------------------------------

struct GoodnessReport {
  bool gram_ok = false;
  bool rho_ok = false;
  bool contains_one_minus_rho = false;
  bool ok() const { return gram_ok && rho_ok && contains_one_minus_rho; }
};

inline GoodnessReport check_good(const QMatrix& basis, const QMatrix& U = U_matrix()) {
  GoodnessReport r;
  r.gram_ok = gram_half(basis) == good_gram();
  r.rho_ok = rho_on_basis(basis) == rho_block(U);
  r.contains_one_minus_rho = (one_minus_rho_H() * basis.inverse()).is_integral();
  return r;
}

inline QMatrix lattice_Lg(const QMatrix& G) {
  QMatrix S = basis_sigma1() * G;
  if (!check_good(S).ok()) throw std::domain_error("lattice_Lg: Sigma_g is not a good basis");
  return S;
}

// sigma with from = sigma * to.
inline QMatrix basis_change(const QMatrix& from, const QMatrix& to) { return from * to.inverse(); }

struct Blocks {
  QMatrix A, B, C, D;
};
inline Blocks blocks(const QMatrix& s) {
  return {s.block(0, 0, 6, 6), s.block(0, 6, 6, 6), s.block(6, 0, 6, 6), s.block(6, 6, 6, 6)};
}

inline bool is_symplectic(const QMatrix& s) {
  auto J = standard_J();
  return s * J * s.transpose() == J;
}

// delta' = (C^t A)_0, delta'' = (e D^t B e)_0 e^{-1} with the Sigma_B diagonal e.
inline QMatrix translation_vector(const QMatrix& sigma) {
  auto [Am, Bm, Cm, Dm] = blocks(sigma);
  auto e = sigmaB_e();
  QMatrix d(1, 12);
  QMatrix ctA = Cm.transpose() * Am, dtB = Dm.transpose() * Bm;
  for (int i = 0; i < 6; ++i) {
    d[i] = ctA(i, i);
    d[6 + i] = Rat(e[i]) * dtB(i, i);
  }
  return d;
}

inline bool delta_membership(const QMatrix& d) {
  auto e = sigmaB_e();
  if (!d.is_integral()) return false;
  // delta' is even on the doubled slots of Sigma_B
  for (int i = 0; i < 6; ++i)
    if (e[i] == 2 && !mpz_even_p(d[i].get_num_mpz_t())) return false;
  return true;
}

// Class of (1/2) delta (alpha,beta) in (1-rho)^{-1}H / H, transported to V by (1 - rho).
inline F2Class half_delta_class(const QMatrix& d) {
  QMatrix v = d * Rat(1, 2) * basis_sigmaB();
  return mark_mod2(v * one_minus_rho_H());
}

inline F2Class Delta_bar() { return F2Class(0b00110011); }

// ---- coset table R ------------------------------------------------------

struct CosetRep {
  Partition2222 partition;
  std::vector<int> word;
  QMatrix G;
  Perm perm;
};

inline std::string word_str(const std::vector<int>& w) {
  std::string s;
  for (int p : w) s += std::to_string(p);
  return s.empty() ? "e" : s;
}

// Shortest words in M_{1,2}..M_{7,8} reaching each partition r1 * pi(g),
// lexicographic among shortest. Computed once.
inline const std::vector<CosetRep>& coset_representatives() {
  static const std::vector<CosetRep> table = [] {
    std::map<Partition2222, std::vector<int>> words;
    std::queue<Partition2222> q;
    auto r1 = identity_partition();
    words[r1] = {};
    q.push(r1);
    while (!q.empty()) {
      auto r = q.front();
      q.pop();
      for (int p = 1; p <= 7; ++p) {
        auto s = r.act(transposition(p - 1, p));
        if (words.count(s)) continue;
        auto w = words[r];
        w.push_back(p);
        words[s] = w;
        q.push(s);
      }
    }
    std::vector<CosetRep> out;
    for (auto& [part, w] : words) {
      QMatrix G = word_element(w);
      out.push_back({part, w, G, perm_image(G)});
    }
    return out;
  }();
  return table;
}

inline const CosetRep& coset_of(const Partition2222& r) {
  for (auto& c : coset_representatives())
    if (c.partition == r) return c;
  throw std::out_of_range("coset_of: unknown partition");
}

// Same coset, even permutation image: prefix M_{1,2} to odd words.
inline CosetRep even_representative(const CosetRep& c) {
  if (c.word.size() % 2 == 0) return c;
  CosetRep e = c;
  e.word.insert(e.word.begin(), 1);
  e.G = reflection(1) * c.G;
  e.perm = transposition(0, 1) * c.perm;
  return e;
}

// ---- torsion points ------------------------------------------------------

inline std::array<int, 6> xi_vector(int k) {
  if (k < 1 || k > 8) throw std::out_of_range("torsion_point: k must be 1..8");
  static const std::array<std::array<int, 6>, 4> xs = {
      {{0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0}, {1, 1, 1, 1, 0, 0}, {1, 1, 1, 1, 1, 1}}};
  return xs[(k - 1) / 2];
}

// (1/2)(xi, xi U)
inline QMatrix torsion_point(int k) {
  auto x = xi_vector(k);
  QMatrix v(1, 6);
  for (int i = 0; i < 6; ++i) v[i] = x[i];
  QMatrix vu = v * U_matrix();
  QMatrix out(1, 12);
  for (int i = 0; i < 6; ++i) out[i] = v[i] * Rat(1, 2), out[6 + i] = vu[i] * Rat(1, 2);
  return out;
}

}  // namespace prym
