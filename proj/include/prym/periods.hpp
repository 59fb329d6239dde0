#pragma once
// Periods of the six anti-invariant differentials
//   phi_k = z^k dz / w^3 (k = 0..4),  phi_5 = dz / w,   w^4 = prod (z - x_j)
// over alpha_1..alpha_8 and the cycles A_j = (1 - rho^2) alpha_j, B_j = rho A_j.
//
// On (x_j, x_{j+1}) the sheet U_0 has w = |w| e^{i pi (8-j)/4}; alpha_8 runs from x_8
// through infinity to x_1 with w > 0. These phases are cross-checked by
// continuing w numerically along a path above the real axis.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "quadrature.hpp"

namespace prym {

template <class Real>
using Cx = std::complex<Real>;
template <class Real>
using CMat = Eigen::Matrix<Cx<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVec = Eigen::Matrix<Cx<Real>, 1, Eigen::Dynamic>;
template <class Real>
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
struct BranchConfig {
  std::array<Real, 8> x{};

  BranchConfig() = default;
  explicit BranchConfig(const std::array<Real, 8>& v) : x(v) { validate(); }
  static BranchConfig from(const std::vector<double>& v) {
    if (v.size() != 8) throw std::invalid_argument("need exactly 8 branch points, got " + std::to_string(v.size()));
    std::array<Real, 8> a;
    for (int i = 0; i < 8; ++i) a[i] = static_cast<Real>(v[i]);
    return BranchConfig(a);
  }
  static BranchConfig standard() { return BranchConfig({1, 2, 3, 4, 5, 6, 7, 8}); }

  void validate() const {
    for (int i = 0; i < 8; ++i)
      if (!std::isfinite(static_cast<double>(x[i]))) throw std::invalid_argument("branch points must be finite");
    for (int i = 0; i + 1 < 8; ++i)
      if (!(x[i] < x[i + 1])) throw std::invalid_argument("branch points must be strictly increasing");
  }
  Real min_gap() const {
    Real g = x[1] - x[0];
    for (int i = 1; i + 1 < 8; ++i) g = std::min(g, x[i + 1] - x[i]);
    return g;
  }
  BranchConfig affine(Real a, Real b) const {
    std::array<Real, 8> y;
    for (int i = 0; i < 8; ++i) y[i] = a * x[i] + b;
    if (a < 0) std::reverse(y.begin(), y.end());
    return BranchConfig(y);
  }
};

// Seeded random chamber: 8 sorted uniforms on [0, 10] with pairwise gaps >= 0.3.
template <class Real>
std::vector<BranchConfig<Real>> random_configs(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<BranchConfig<Real>> out;
  while (static_cast<int>(out.size()) < count) {
    std::vector<double> v(8);
    for (auto& t : v) t = u(rng);
    std::sort(v.begin(), v.end());
    bool ok = true;
    for (int i = 0; i + 1 < 8; ++i) ok = ok && v[i + 1] - v[i] >= 0.3;
    if (ok) out.push_back(BranchConfig<Real>::from(v));
  }
  return out;
}

template <class Real>
struct QuadOptions {
  int nodes = 64;
  int max_nodes = 1024;
  Real tol = Real(1e-12);
  bool refine = true;  // compare against a doubled rule
};

template <class Real>
struct QuadValue {
  Cx<Real> value;
  Real error = 0;
  int nodes = 0;
  bool converged = true;
};

// eta_k exponent: w^{-3} for k < 5, w^{-1} for k = 5
inline int w_power(int k) { return k < 5 ? 3 : 1; }

namespace detail {

template <class Real>
Cx<Real> alpha_finite_raw(const BranchConfig<Real>& cfg, int j, int k, int n) {
  // j is 0-based: interval (x_j, x_{j+1}), j = 0..6
  const int e = w_power(k);
  const Real ex = -Real(e) / 4;
  const auto& rule = gauss_jacobi<Real>(n, ex, ex);
  Real lo = cfg.x[j], hi = cfg.x[j + 1], h = (hi - lo) / 2, c = (hi + lo) / 2;
  Real sum = 0;
  for (int i = 0; i < n; ++i) {
    Real z = c + h * rule.nodes[i];
    Real logR = 0;
    for (int m = 0; m < 8; ++m)
      if (m != j && m != j + 1) logR += std::log(std::abs(z - cfg.x[m]));
    Real f = std::exp(ex * logR);
    if (k < 5) f *= std::pow(z, k);
    sum += rule.weights[i] * f;
  }
  // |w|^4 = h^2 (1-t^2) R
  Real scale = h * std::pow(h * h, ex);
  // arg w = pi (8 - (j+1)) / 4, so w^{-e} carries e^{-i pi e (7-j)/4}
  Real ang = -std::numbers::pi_v<Real> * e * (7 - j) / 4;
  return std::polar(sum * scale, ang);
}

// alpha_8 with u = 1/(z - c), c the midpoint of (x_4, x_5); then w = W / u^2 with
// W^4 = prod (1 + (c - x_j) u) and z^k dz / w^3 = -(cu+1)^k u^{4-k} du / W^3.
template <class Real>
Cx<Real> alpha8_inversion_raw(const BranchConfig<Real>& cfg, int k, int n) {
  const int e = w_power(k);
  const Real ex = -Real(e) / 4;
  const auto& rule = gauss_jacobi<Real>(n, ex, ex);
  const auto& x = cfg.x;
  Real c = (x[3] + x[4]) / 2;
  Real u8 = 1 / (x[7] - c), u1 = 1 / (x[0] - c);
  Real hc = (u8 - u1) / 2, cc = (u8 + u1) / 2;
  Real sum = 0;
  for (int i = 0; i < n; ++i) {
    Real u = cc + hc * rule.nodes[i];
    Real logR = 0;
    for (int m = 1; m < 7; ++m) logR += std::log(1 + (c - x[m]) * u);
    Real g = std::exp(ex * logR);
    if (k < 5) g *= std::pow(c * u + 1, k) * std::pow(u, 4 - k);
    else g *= 1;  // dz/w = -du / W
    sum += rule.weights[i] * g;
  }
  // (1 + (c-x_1)u)(1 + (c-x_8)u) = (c - x_1)(x_8 - c) hc^2 (1 - t^2)
  Real sing = (c - x[0]) * (x[7] - c) * hc * hc;
  return Cx<Real>(sum * hc * std::pow(sing, ex), 0);
}

// alpha_8 directly on the two rays (x_8, oo) and (-oo, x_1): a Jacobi rule on
// [x_8, x_8 + L] with the endpoint exponent, and z = x_8 + L / v on the tail.
template <class Real>
Cx<Real> alpha8_rays_raw(const BranchConfig<Real>& cfg, int k, int n) {
  const int e = w_power(k);
  const Real ex = -Real(e) / 4;
  const auto& x = cfg.x;
  const Real L = (x[7] - x[0]) / 2;
  auto integrand_abs = [&](Real z, int skip) {
    // |z^k| / |w|^e with the factor |z - x_skip| left out
    Real logR = 0;
    for (int m = 0; m < 8; ++m)
      if (m != skip) logR += std::log(std::abs(z - x[m]));
    Real f = std::exp(ex * logR);
    if (k < 5) f *= std::pow(z, k);
    return f;
  };
  Real total = 0;
  // near parts: (1 + t)^ex on [x_8, x_8 + L] and (1 - t)^ex on [x_1 - L, x_1]
  const auto& rj = gauss_jacobi<Real>(n, Real(0), ex);
  for (int i = 0; i < n; ++i) {
    Real t = rj.nodes[i];
    Real z = x[7] + L * (1 + t) / 2;  // z - x_8 = L(1+t)/2
    total += rj.weights[i] * integrand_abs(z, 7) * std::pow(L / 2, ex) * (L / 2);
  }
  const auto& rk = gauss_jacobi<Real>(n, ex, Real(0));
  for (int i = 0; i < n; ++i) {
    Real t = rk.nodes[i];
    Real z = x[0] - L * (1 - t) / 2;  // x_1 - z = L(1-t)/2
    total += rk.weights[i] * integrand_abs(z, 0) * std::pow(L / 2, ex) * (L / 2);
  }
  // tails: z = x_8 + L/v and z = x_1 - L/v, v in (0,1], dz = L dv / v^2
  const auto& gl = gauss_legendre<Real>(n);
  for (int i = 0; i < n; ++i) {
    Real v = (1 + gl.nodes[i]) / 2, wv = gl.weights[i] / 2;
    for (int side = 0; side < 2; ++side) {
      Real z = side == 0 ? x[7] + L / v : x[0] - L / v;
      // |w|^e ~ |z|^{2e}: factor v^{2e} analytically to keep the integrand smooth
      Real logR = 0;
      for (int m = 0; m < 8; ++m) logR += std::log(std::abs(z - x[m]) * v);
      Real f = std::exp(ex * logR) * std::pow(v, 2 * e - 2) * L;
      if (k < 5) f *= std::pow(z * v, k) * std::pow(v, -k);
      total += wv * f;
    }
  }
  return Cx<Real>(total, 0);
}

}  // namespace detail

// j = 1..8, k = 0..5
template <class Real>
QuadValue<Real> alpha_integral(const BranchConfig<Real>& cfg, int j, int k, const QuadOptions<Real>& opt = {}) {
  if (j < 1 || j > 8) throw std::out_of_range("alpha_integral: j must be 1..8");
  if (k < 0 || k > 5) throw std::out_of_range("alpha_integral: k must be 0..5");
  auto eval = [&](int n) {
    return j < 8 ? detail::alpha_finite_raw(cfg, j - 1, k, n) : detail::alpha8_inversion_raw(cfg, k, n);
  };
  int n = opt.nodes;
  Cx<Real> v = eval(n);
  if (!opt.refine) return {v, Real(0), n, true};
  for (;;) {
    Cx<Real> v2 = eval(2 * n);
    Real err = std::abs(v2 - v);
    Real scale = std::max(Real(1), std::abs(v2));
    if (err <= opt.tol * scale) return {v2, err, 2 * n, true};
    if (4 * n > opt.max_nodes) return {v2, err, 2 * n, false};
    v = v2, n *= 2;
  }
}

template <class Real>
Cx<Real> alpha8_rays(const BranchConfig<Real>& cfg, int k, int n = 128) {
  return detail::alpha8_rays_raw(cfg, k, n);
}

// eigenvalue of rho^* on eta_k
template <class Real>
Cx<Real> rho_eigenvalue(int k) {
  return k < 5 ? Cx<Real>(0, 1) : Cx<Real>(0, -1);
}

template <class Real>
struct PeriodMatrix {
  CMat<Real> Pi;     // 6 x 12, rows eta_0..eta_5, columns A_1..A_6, B_1..B_6
  CMat<Real> alpha;  // 8 x 6, alpha_j integrals
  Real error = 0;    // max quadrature error estimate
  int max_nodes = 0;
  bool converged = true;

  Cx<Real> A_period(int j, int k) const { return Real(2) * alpha(j - 1, k); }
};

template <class Real>
PeriodMatrix<Real> period_matrix(const BranchConfig<Real>& cfg, const QuadOptions<Real>& opt = {}) {
  PeriodMatrix<Real> pm;
  pm.alpha = CMat<Real>::Zero(8, 6);
  std::vector<std::future<std::array<QuadValue<Real>, 6>>> jobs;
  for (int j = 1; j <= 8; ++j)
    jobs.push_back(std::async(std::launch::async, [&cfg, &opt, j] {
      std::array<QuadValue<Real>, 6> r;
      for (int k = 0; k < 6; ++k) r[k] = alpha_integral(cfg, j, k, opt);
      return r;
    }));
  for (int j = 0; j < 8; ++j) {
    auto r = jobs[j].get();
    for (int k = 0; k < 6; ++k) {
      pm.alpha(j, k) = r[k].value;
      pm.error = std::max(pm.error, r[k].error);
      pm.max_nodes = std::max(pm.max_nodes, r[k].nodes);
      pm.converged = pm.converged && r[k].converged;
    }
  }
  pm.Pi = CMat<Real>::Zero(6, 12);
  for (int k = 0; k < 6; ++k)
    for (int j = 0; j < 6; ++j) {
      // (1 - lambda^2) alpha with lambda^2 = -1
      Cx<Real> a = Real(2) * pm.alpha(j, k);
      pm.Pi(k, j) = a;
      pm.Pi(k, 6 + j) = rho_eigenvalue<Real>(k) * a;
    }
  return pm;
}

// sum_j A_j = 0 and sum_{j<=7} (1 + lambda + ... + lambda^{j-1}) A_j = 0, per differential
template <class Real>
std::pair<Real, Real> boundary_residuals(const PeriodMatrix<Real>& pm) {
  Real r1 = 0, r2 = 0;
  for (int k = 0; k < 6; ++k) {
    Cx<Real> s1 = 0, s2 = 0, lam = rho_eigenvalue<Real>(k);
    for (int j = 1; j <= 8; ++j) s1 += pm.A_period(j, k);
    for (int j = 1; j <= 7; ++j) {
      Cx<Real> geo = 0, p = 1;
      for (int m = 0; m < j; ++m) geo += p, p *= lam;
      s2 += geo * pm.A_period(j, k);
    }
    r1 = std::max(r1, std::abs(s1));
    r2 = std::max(r2, std::abs(s2));
  }
  return {r1, r2};
}

template <class Real>
CMat<Real> to_complex(const QMatrix& m) {
  CMat<Real> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = Cx<Real>(static_cast<Real>(m(i, j).get_d()), 0);
  return r;
}

template <class Real>
struct NormalizedTau {
  CMat<Real> tau;  // 6 x 6
  CMat<Real> Pb;   // b-periods, rows b_j, columns differentials
  Real symmetry = 0;        // |tau - tau^t| / |tau|
  Real min_imag_eig = 0;
  std::string label;
};

template <class Real>
Real min_sym_eigenvalue(const RMat<Real>& Y) {
  RMat<Real> S = (Y + Y.transpose()) / Real(2);
  Eigen::SelfAdjointEigenSolver<RMat<Real>> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// tau_{jk} = int_{a_j} omega_k with omega normalized by int_{b_j} omega_k = delta_{jk}.
template <class Real>
NormalizedTau<Real> normalized_tau(const PeriodMatrix<Real>& pm, const QMatrix& basis, const std::string& label = "",
                                   bool check = true) {
  CMat<Real> Pc = pm.Pi * to_complex<Real>(basis).transpose();  // 6 x 12
  CMat<Real> Pa = Pc.leftCols(6).transpose(), Pb = Pc.rightCols(6).transpose();
  NormalizedTau<Real> t;
  t.label = label;
  t.Pb = Pb;
  t.tau = Pa * Pb.inverse();
  t.symmetry = (t.tau - t.tau.transpose()).norm() / t.tau.norm();
  t.min_imag_eig = min_sym_eigenvalue<Real>(t.tau.imag());
  if (check) {
    if (!(t.symmetry < Real(1e-6))) throw std::runtime_error("normalized_tau: tau is not symmetric");
    if (!(t.min_imag_eig > 0)) throw std::runtime_error("normalized_tau: Im tau is not positive definite");
  }
  t.tau = (t.tau + t.tau.transpose()) / Real(2);
  return t;
}

template <class Real>
CMat<Real> U_complex() {
  return to_complex<Real>(U_matrix());
}

template <class Real>
Real rho_relation_residual(const CMat<Real>& tau) {
  CMat<Real> tu = tau * U_complex<Real>();
  return (tu * tu + CMat<Real>::Identity(6, 6)).norm();
}

// det(C tau + D) for (A B; C D) = (0 U; -U I)
template <class Real>
Cx<Real> det_minus_U_tau_plus_I(const CMat<Real>& tau) {
  return (CMat<Real>::Identity(6, 6) - U_complex<Real>() * tau).determinant();
}

template <class Real>
struct BallPoint {
  CVec<Real> f;  // (int_{A_j} dz/w)_j
  CVec<Real> v;  // f H^{-1}
  Real norm = 0;  // h(v,v) = f H^{-1} f^*
};

// Hermitian Gram H = (Q - iP)/2 of h on A_1..A_6
template <class Real>
CMat<Real> hermitian_gram() {
  CMat<Real> P = to_complex<Real>(P_matrix()), Q = to_complex<Real>(Q_matrix());
  return (Q - Cx<Real>(0, 1) * P) / Real(2);
}

template <class Real>
BallPoint<Real> ball_point(const PeriodMatrix<Real>& pm) {
  BallPoint<Real> b;
  b.f = pm.Pi.block(5, 0, 1, 6);
  CMat<Real> Hi = hermitian_gram<Real>().inverse();
  b.v = b.f * Hi;
  b.norm = (b.v * hermitian_gram<Real>() * b.v.adjoint())(0, 0).real();
  return b;
}

// Continue w along a path from x_1 - 1 above the cuts to x_8 + 1, then around a
// large upper half circle back to x_1 - 1, always choosing the fourth root
// nearest to the previous value. Reports the worst deviation of arg w on each
// interval from the closed-form sheet, and the closure error.
template <class Real>
struct BranchCheck {
  Real max_phase_error = 0;
  Real closure_error = 0;
};

template <class Real>
BranchCheck<Real> branch_continuation_check(const BranchConfig<Real>& cfg, int steps_per_unit = 400) {
  using C = Cx<Real>;
  const auto& x = cfg.x;
  auto w4 = [&](C z) {
    C p = 1;
    for (int m = 0; m < 8; ++m) p *= z - x[m];
    return p;
  };
  auto nearest_root = [&](C z, C prev) {
    C r = std::pow(w4(z), Real(0.25));
    C best = r;
    for (int q = 1; q < 4; ++q) {
      r *= C(0, 1);
      if (std::abs(r - prev) < std::abs(best - prev)) best = r;
    }
    return best;
  };
  const Real pi = std::numbers::pi_v<Real>;
  const Real lift = cfg.min_gap() / 4;
  C z0(x[0] - 1, 0);
  C w = std::pow(w4(z0), Real(0.25));
  w = C(std::abs(w), 0);  // w > 0 left of x_1
  const C w_start = w;
  BranchCheck<Real> out;
  auto walk = [&](C a, C b) {
    int n = std::max(8, static_cast<int>(std::abs(b - a) * steps_per_unit / std::max(Real(1e-3), lift)));
    n = std::min(n, 200000);
    for (int i = 1; i <= n; ++i) {
      C z = a + (b - a) * (Real(i) / n);
      w = nearest_root(z, w);
    }
  };
  auto check_interval = [&](int j) {
    // on (x_j, x_{j+1}) (1-based j) arg w = pi (8-j)/4
    Real expect = pi * (8 - j) / 4;
    Real d = std::remainder(std::arg(w) - expect, 2 * pi);
    out.max_phase_error = std::max(out.max_phase_error, std::abs(d));
  };
  C cur = z0;
  auto go = [&](C to) { walk(cur, to), cur = to; };
  // hop over each branch point along a small raised step
  for (int j = 0; j < 8; ++j) {
    go(C(x[j] - lift, 0));
    go(C(x[j] - lift, lift));
    go(C(x[j] + lift, lift));
    go(C(x[j] + lift, 0));
    Real right = j < 7 ? (x[j] + x[j + 1]) / 2 : x[7] + 1;
    go(C(right, 0));
    check_interval(j + 1 < 8 ? j + 1 : 8);
  }
  // large semicircle in the upper half plane back to the start
  Real c = (x[0] + x[7]) / 2, R = (x[7] - x[0]) / 2 + 1;
  go(C(c + R, 0));
  int n = 20000;
  for (int i = 1; i <= n; ++i) {
    C z = C(c, 0) + std::polar(R, pi * i / n);
    w = nearest_root(z, w);
  }
  cur = C(c - R, 0);
  go(z0);
  out.closure_error = std::abs(w - w_start) / std::abs(w_start);
  return out;
}

}  // namespace prym
