#pragma once
// Theta constants on the good bases, the cross-ratio identity, the 105 squared
// forms T_r^2 against the partition polynomials P_r, and the base-change
// matrices D^{(g,B)} assembled from Sigma-trace coefficients.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "f2geom.hpp"
#include "lattice.hpp"
#include "periods.hpp"
#include "theta.hpp"

namespace prym {

// ---- mu table ------------------------------------------------------------

inline const std::array<std::array<int, 6>, 8>& mu_table() {
  static const std::array<std::array<int, 6>, 8> mu = {{
      {0, 0, 0, 0, 0, 0},
      {0, 0, 1, 1, 1, 1},
      {1, 1, 0, 0, 1, 1},
      {1, 1, 1, 1, 0, 0},
      {1, 1, 1, 1, 1, 1},
      {1, 1, 0, 0, 0, 0},
      {0, 0, 1, 1, 0, 0},
      {0, 0, 0, 0, 1, 1},
  }};
  return mu;
}

// m_j = (1/2)(mu_j, mu_j U), j = 1..8
inline Characteristic mu_characteristic(int j) { return Characteristic::half_mu(mu_table().at(j - 1)); }

// {j : mu_j U mu_j^t in 4Z}
inline std::vector<int> ev_indices() {
  std::vector<int> out;
  for (int j = 1; j <= 8; ++j) {
    QMatrix v(1, 6);
    for (int i = 0; i < 6; ++i) v[i] = mu_table()[j - 1][i];
    Rat q = (v * U_matrix() * v.transpose())(0, 0);
    if (mpz_divisible_ui_p(q.get_num_mpz_t(), 4)) out.push_back(j);
  }
  return out;
}
inline std::vector<int> ev_indices_reference() { return {1, 4, 6, 7}; }
// Row/column order of the displayed 4x4 matrix, in mu indices.
inline std::array<int, 4> ev_display_order() { return {1, 4, 3, 2}; }

// ---- theta quadruple and the cross ratio ----------------------------------

template <class Real>
using Quad = std::array<Cx<Real>, 4>;

template <class Real>
Quad<Real> theta_quadruple(const ThetaEvaluator<Real>& ev) {
  Quad<Real> t;
  for (int k = 0; k < 4; ++k) t[k] = ev(mu_characteristic(k + 1)).value;
  return t;
}

template <class Real>
Real cross_ratio_rhs(const BranchConfig<Real>& cfg) {
  const auto& x = cfg.x;
  return (x[0] - x[4]) * (x[1] - x[5]) / ((x[0] - x[1]) * (x[4] - x[5]));
}

template <class Real>
Cx<Real> cross_ratio_lhs(const Quad<Real>& t) {
  const Cx<Real> i(0, 1);
  return std::pow(t[1] + i * t[2], 2) * std::pow(t[0] - i * t[3], 2) / (Real(4) * t[0] * t[0] * t[2] * t[2]);
}

template <class Real>
struct CrossRatioReport {
  Quad<Real> theta;
  Cx<Real> lhs;
  Real rhs = 0;
  Real residual = 0;   // relative
  Real product = 0;    // |t1 t3 - t2 t4| / |t1 t3|
  Real auxiliary = 0;  // |(t2 - i t3)(t1 + i t4) - (t2 + i t3)(t1 - i t4)| / |t1 t3|
};

template <class Real>
CrossRatioReport<Real> cross_ratio_check(const BranchConfig<Real>& cfg, const Quad<Real>& t) {
  const Cx<Real> i(0, 1);
  CrossRatioReport<Real> r;
  r.theta = t;
  if (std::abs(t[0]) == 0 || std::abs(t[2]) == 0) throw std::domain_error("cross ratio: vanishing theta constant");
  r.lhs = cross_ratio_lhs(t);
  r.rhs = cross_ratio_rhs(cfg);
  r.residual = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
  Real s = std::abs(t[0] * t[2]);
  r.product = std::abs(t[0] * t[2] - t[1] * t[3]) / s;
  r.auxiliary = std::abs((t[1] - i * t[2]) * (t[0] + i * t[3]) - (t[1] + i * t[2]) * (t[0] - i * t[3])) / s;
  return r;
}

// |theta_{m_k}(tau, iota(p_j))|, k = 1..4 (rows), j = 1..8 (columns)
template <class Real>
RMat<Real> vanishing_table(const ThetaEvaluator<Real>& ev) {
  RMat<Real> out(4, 8);
  for (int j = 1; j <= 8; ++j) {
    CVec<Real> z = abel_point<Real>(ev.tau(), torsion_point(j));
    for (int k = 1; k <= 4; ++k) out(k - 1, j - 1) = std::abs(ev(mu_characteristic(k), z).value);
  }
  return out;
}
inline std::array<int, 8> vanishing_orders() { return {0, 0, 2, 2, 0, 0, 2, 2}; }

// ---- partition polynomials ----------------------------------------------

// prod (x_a - x_b) over the pairs {a < b} of r
template <class Real>
Real polynomial_P(const Partition2222& r, const BranchConfig<Real>& cfg) {
  Real p = 1;
  for (auto& q : r.pairs) p *= cfg.x[q[0]] - cfg.x[q[1]];
  return p;
}

// The Pfaffian-signed version: sign of the pairing permutation times polynomial_P.
template <class Real>
Real polynomial_P_signed(const Partition2222& r, const BranchConfig<Real>& cfg) {
  return r.pairing_sign() * polynomial_P(r, cfg);
}

template <class Real>
std::map<Partition2222, Real> P_map(const BranchConfig<Real>& cfg) {
  std::map<Partition2222, Real> out;
  for (auto& r : enumerate_partitions2222()) out[r] = polynomial_P(r, cfg);
  return out;
}

// ---- squared forms -------------------------------------------------------

template <class Real>
struct TauSharp {
  CMat<Real> direct;  // normalized periods on Sigma_g
  CMat<Real> moebius; // (alpha tau_1 + beta)(gamma tau_1 + delta)^{-1}
  Cx<Real> det_K;     // det(gamma tau_1 + delta)
  Real agreement = 0; // max |direct - moebius|
};

// sigma_g sigma_1^{-1} with Sigma_g = (sigma_g sigma_1^{-1}) Sigma_1
inline QMatrix relative_sigma(const QMatrix& G) {
  QMatrix S1 = basis_sigma1();
  return basis_change(S1 * G, S1);
}

template <class Real>
TauSharp<Real> tau_sharp(const PeriodMatrix<Real>& pm, const CMat<Real>& tau1, const QMatrix& G) {
  TauSharp<Real> t;
  t.direct = normalized_tau(pm, basis_sigma1() * G, "Sigma_g").tau;
  auto [A, B, C, D] = blocks(relative_sigma(G));
  CMat<Real> K = to_complex<Real>(C) * tau1 + to_complex<Real>(D);
  t.det_K = K.determinant();
  t.moebius = (to_complex<Real>(A) * tau1 + to_complex<Real>(B)) * K.inverse();
  t.agreement = (t.direct - t.moebius).cwiseAbs().maxCoeff();
  return t;
}

template <class Real>
struct TSquared {
  Cx<Real> value;     // det(gamma tau_1 + delta)^{-2} theta_{m_1}(tau#)^2 theta_{m_3}(tau#)^2
  Real agreement = 0; // tau# path agreement
  Real min_imag_eig = 0;
  long terms = 0;
};

template <class Real>
TSquared<Real> T_squared(const PeriodMatrix<Real>& pm, const CMat<Real>& tau1, const QMatrix& G,
                         const ThetaOptions<Real>& opt = {}) {
  auto ts = tau_sharp(pm, tau1, G);
  ThetaEvaluator<Real> ev(ts.direct, opt);
  auto a = ev(mu_characteristic(1)), b = ev(mu_characteristic(3));
  TSquared<Real> r;
  Cx<Real> t = a.value * b.value / ts.det_K;
  r.value = t * t;
  r.agreement = ts.agreement;
  r.min_imag_eig = ev.min_eigenvalue();
  r.terms = a.terms + b.terms;
  return r;
}

template <class Real>
struct FormEntry {
  Partition2222 r;
  std::string word;
  int sign = 1;          // pairing sign of r
  Real P_ratio = 0;      // P_r / P_1 (sorted pairs)
  Cx<Real> T_ratio;      // T_r^2 / T_1^2
  Real residual = 0;     // |T_ratio - sign P_ratio|
  Real unsigned_residual = 0;  // |T_ratio - P_ratio|
  Real tau_agreement = 0;
};

template <class Real>
struct ThetaMapReport {
  std::vector<FormEntry<Real>> entries;
  Real max_residual = 0;
  Real max_unsigned_residual = 0;
  Real max_tau_agreement = 0;
  int negative_signs = 0;
  std::string reference;  // partition used for normalization
};

// All 105 T_r^2 against P_r. Normalized by r_1 unless T_1^2 is negligible.
template <class Real>
ThetaMapReport<Real> theta_map(const BranchConfig<Real>& cfg, const PeriodMatrix<Real>& pm, const ThetaOptions<Real>& opt = {}) {
  auto tau1 = normalized_tau(pm, basis_sigma1(), "Sigma_1").tau;
  const auto& reps = coset_representatives();
  std::vector<TSquared<Real>> T(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) T[i] = T_squared(pm, tau1, reps[i].G, opt);
  std::size_t ref = 0;
  Real tmax = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].partition == identity_partition()) ref = i;
    tmax = std::max(tmax, std::abs(T[i].value));
  }
  if (std::abs(T[ref].value) < Real(1e-8) * tmax)
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (std::abs(T[i].value) == tmax) ref = i;
  ThetaMapReport<Real> rep;
  const auto& rr = reps[ref].partition;
  rep.reference = rr.str();
  Real Pref = polynomial_P_signed(rr, cfg);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    FormEntry<Real> e;
    e.r = reps[i].partition;
    e.word = word_str(reps[i].word);
    e.sign = e.r.pairing_sign() * rr.pairing_sign();
    e.P_ratio = polynomial_P(e.r, cfg) / polynomial_P(rr, cfg);
    e.T_ratio = T[i].value / T[ref].value;
    e.residual = std::abs(e.T_ratio - Real(e.sign) * e.P_ratio);
    e.unsigned_residual = std::abs(e.T_ratio - e.P_ratio);
    e.tau_agreement = T[i].agreement;
    (void)Pref;
    rep.max_residual = std::max(rep.max_residual, e.residual);
    rep.max_unsigned_residual = std::max(rep.max_unsigned_residual, e.unsigned_residual);
    rep.max_tau_agreement = std::max(rep.max_tau_agreement, e.tau_agreement);
    rep.negative_signs += e.sign < 0;
    rep.entries.push_back(e);
  }
  return rep;
}

// ---- Sigma-trace and D matrices -------------------------------------------

// Hermite normal form (upper triangular, positive diagonal) of an integral square matrix of full rank.
inline std::vector<std::vector<mpz_class>> hermite_form(const QMatrix& W) {
  int n = W.rows(), m = W.cols();
  if (!W.is_integral()) throw std::domain_error("hermite_form: matrix is not integral");
  std::vector<std::vector<mpz_class>> A(n, std::vector<mpz_class>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) A[i][j] = W(i, j).get_num();
  int row = 0;
  for (int col = 0; col < m && row < n; ++col) {
    for (;;) {
      int piv = -1;
      for (int i = row; i < n; ++i)
        if (A[i][col] != 0 && (piv < 0 || abs(A[i][col]) < abs(A[piv][col]))) piv = i;
      if (piv < 0) break;
      std::swap(A[row], A[piv]);
      bool done = true;
      for (int i = row + 1; i < n; ++i) {
        if (A[i][col] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), A[i][col].get_mpz_t(), A[row][col].get_mpz_t());
        for (int j = 0; j < m; ++j) A[i][j] -= q * A[row][j];
        if (A[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (A[row][col] == 0) continue;
    if (A[row][col] < 0)
      for (auto& v : A[row]) v = -v;
    ++row;
  }
  return A;
}

// Z^12 / {(c,d) : (c,d) Sigma_L in (1-rho)H}, as a list of representatives.
inline std::vector<QMatrix> trace_representatives(const QMatrix& SL) {
  QMatrix W = one_minus_rho_H() * SL.inverse();
  auto H = hermite_form(W);
  std::vector<long> diag(12);
  for (int i = 0; i < 12; ++i) {
    if (H[i][i] <= 0) throw std::domain_error("trace_representatives: (1-rho)H is not of full rank in L");
    diag[i] = H[i][i].get_si();
  }
  std::vector<QMatrix> out{QMatrix(1, 12)};
  for (int i = 0; i < 12; ++i) {
    std::vector<QMatrix> next;
    for (auto& v : out)
      for (long a = 0; a < diag[i]; ++a) {
        QMatrix w = v;
        w[i] = a;
        next.push_back(w);
      }
    out = std::move(next);
  }
  return out;
}

inline QMatrix nu_vector(int j) { return mu_characteristic(j).row(); }

inline Characteristic reduce_characteristic(const QMatrix& m) { return Characteristic::from_row(m).reduced(); }

// Exponent of the Sigma-trace coefficient for the row characteristic n = (p0,q0) and
// representative (p,q): with (P,Q) = (p,q) + n and (R,S) = (P,Q) sigma,
//   p0.q0 + p.q0 - P.Q/2 - R.S/2 - m_g''.R + m.k''
// where m_g + (R,S) = m + k, m the reduced representative, k integral.
struct TraceTerm {
  Rat exponent;
  Characteristic target;  // m, reduced
};

inline TraceTerm sigma_trace_term(const QMatrix& sigma, const QMatrix& mg, const QMatrix& n, const QMatrix& pq) {
  Rat h(1, 2);
  QMatrix P = pq + n;
  QMatrix RS = P * sigma;
  auto part = [](const QMatrix& v, int off) {
    QMatrix r(1, 6);
    for (int i = 0; i < 6; ++i) r[i] = v[off + i];
    return r;
  };
  QMatrix p0 = part(n, 0), q0 = part(n, 6), p = part(pq, 0), R = part(RS, 0), S = part(RS, 6);
  Rat ex = dot(p0, q0) + dot(p, q0) - h * dot(part(P, 0), part(P, 6)) - h * dot(R, S) - dot(part(mg, 6), R);
  QMatrix mt = mg + RS;
  Characteristic m = reduce_characteristic(mt);
  QMatrix k = mt - m.row();
  ex += dot(m.prime(), part(k, 6));
  return {frac_part(ex), m};
}

template <class Real>
Cx<Real> sigma_trace_coeff(const QMatrix& sigma, const QMatrix& mg, const QMatrix& n, const QMatrix& pq) {
  return e_rat<Real>(sigma_trace_term(sigma, mg, n, pq).exponent);
}

template <class Real>
struct TraceMatrix {
  QMatrix sigma;      // Sigma_L Sigma_B^{-1}
  QMatrix delta;      // translation vector
  QMatrix m0;         // B-side base characteristic
  QMatrix mg;         // chosen m_g
  QMatrix n0;         // (m0 + delta/2) sigma^{-1}
  std::vector<Characteristic> columns;  // reduced B-side characteristics, in column order
  std::vector<QMatrix> reps;
  CMat<Real> D;       // rows n0 + nu_j (j = 1..8)
};

// D^{(g,B)}: rows are the characteristics n0 + nu_j on Sigma_g, columns the eight
// B-side characteristics m0 + (0^9, eps/2).
template <class Real>
TraceMatrix<Real> trace_matrix(const QMatrix& G, const std::optional<QMatrix>& base = std::nullopt) {
  TraceMatrix<Real> t;
  QMatrix SL = basis_sigma1() * G;
  t.sigma = basis_change(SL, basis_sigmaB());
  QMatrix sigi = t.sigma.inverse();
  t.delta = translation_vector(t.sigma);
  QMatrix hd = t.delta * Rat(1, 2);
  t.reps = trace_representatives(SL);
  t.m0 = base ? *base : -hd;
  auto eps_shift = [](int eps) {
    QMatrix v(1, 12);
    for (int b = 0; b < 3; ++b) v[9 + b] = Rat((eps >> (2 - b)) & 1) / 2;
    return v;
  };
  std::map<Characteristic, int> col;
  for (int eps = 0; eps < 8; ++eps) {
    Characteristic c = reduce_characteristic(t.m0 + eps_shift(eps));
    t.columns.push_back(c);
    col[c] = eps;
  }
  if (col.size() != 8) throw std::logic_error("trace_matrix: B-side characteristics collide");
  t.n0 = (t.m0 + hd) * sigi;

  auto row = [&](const QMatrix& mg, const QMatrix& n) {
    std::vector<Cx<Real>> d(8, Cx<Real>(0));
    for (auto& pq : t.reps) {
      auto term = sigma_trace_term(t.sigma, mg, n, pq);
      auto it = col.find(term.target);
      if (it == col.end()) throw std::logic_error("trace_matrix: target outside the B-side coset");
      d[it->second] += e_rat<Real>(term.exponent);
    }
    return d;
  };
  // m_g: first candidate -delta/2 + (0^9, eps/2) with a nonzero row at n = 0
  bool found = false;
  for (int eps = 0; eps < 8 && !found; ++eps) {
    QMatrix cand = -hd + eps_shift(eps);
    auto d = row(cand, QMatrix(1, 12));
    for (auto& v : d)
      if (std::abs(v) > Real(1e-9)) found = true;
    if (found) t.mg = cand;
  }
  if (!found) throw std::runtime_error("trace_matrix: every m_g candidate has vanishing trace");
  t.D = CMat<Real>::Zero(8, 8);
  for (int j = 1; j <= 8; ++j) {
    auto d = row(t.mg, t.n0 + nu_vector(j));
    for (int i = 0; i < 8; ++i) t.D(j - 1, i) = d[i];
  }
  return t;
}

// D^{(g)} = D^{(g,B)} (D^{(1,B)})^{-1} with both on the same B-side coset, rows
// relabeled so that row k belongs to nu_k: if n0 + nu_j = nu_k + kappa, row k is
// e(-nu_k'.kappa'') times row j.
template <class Real>
CMat<Real> transform_matrix_D(const QMatrix& G) {
  auto t1 = trace_matrix<Real>(QMatrix::identity(12));
  auto tg = trace_matrix<Real>(G, t1.m0);
  CMat<Real> Dg = tg.D * t1.D.inverse();
  std::map<Characteristic, int> idx;
  for (int k = 1; k <= 8; ++k) idx[reduce_characteristic(nu_vector(k))] = k - 1;
  CMat<Real> Dn = CMat<Real>::Zero(8, 8);
  for (int j = 1; j <= 8; ++j) {
    QMatrix t = tg.n0 + nu_vector(j);
    auto it = idx.find(reduce_characteristic(t));
    if (it == idx.end()) throw std::logic_error("transform_matrix_D: row characteristic outside the nu table");
    int k = it->second;
    QMatrix kap = t - nu_vector(k + 1);
    Rat ph = 0;
    for (int i = 0; i < 6; ++i) ph -= nu_vector(k + 1)[i] * kap[6 + i];
    Dn.row(k) = e_rat<Real>(ph) * Dg.row(j - 1);
  }
  return Dn;
}

inline bool in_delta_stabilizer(const QMatrix& G) {
  Perm p = perm_image(G);
  auto side = [&](int a) { return (a == 0 || a == 1 || a == 4 || a == 5) ? 0 : 1; };
  int s0 = side(p[0]);
  for (int a = 0; a < 8; ++a)
    if ((side(p[a]) ^ side(a)) != (s0 ^ side(0))) return false;
  return true;
}

template <class Real>
CMat<Real> transform_matrix_D_ev(const QMatrix& G) {
  if (!in_delta_stabilizer(G)) throw std::invalid_argument("transform_matrix_D_ev: g is not in the stabilizer");
  CMat<Real> D = transform_matrix_D<Real>(G);
  auto ord = ev_display_order();
  CMat<Real> out(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out(a, b) = D(ord[a] - 1, ord[b] - 1);
  return out;
}

template <class Real>
CMat<Real> reference_D_M25() {
  Cx<Real> a(Real(0.5), Real(-0.5)), b(Real(-0.5), Real(-0.5));
  CMat<Real> m = CMat<Real>::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = a;
  m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = b;
  return m;
}

// Entrywise distance after scaling `m` to match `ref` at the largest entry of ref.
template <class Real>
Real projective_distance(const CMat<Real>& m, const CMat<Real>& ref) {
  Eigen::Index bi = 0, bj = 0;
  ref.cwiseAbs().maxCoeff(&bi, &bj);
  if (std::abs(m(bi, bj)) == 0) return std::numeric_limits<Real>::infinity();
  CMat<Real> s = m * (ref(bi, bj) / m(bi, bj));
  return (s - ref).cwiseAbs().maxCoeff();
}

}  // namespace prym
