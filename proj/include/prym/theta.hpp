#pragma once
// Riemann theta functions with rational characteristics
//   theta_m(tau, z) = sum_xi e(1/2 (xi+m') tau (xi+m')^t + (z+m'') (xi+m')^t),  e(x) = exp(2 pi i x)

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <limits>
#include <map>
#include <cmath>
#include <complex>
#include <functional>
#include <future>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lattice.hpp"
#include "periods.hpp"

namespace prym {

struct Characteristic {
  std::array<Rat, 12> m{};  // (m', m'')

  Characteristic() = default;
  static Characteristic from_row(const QMatrix& v) {
    if (v.rows() != 1 || v.cols() != 12) throw std::invalid_argument("characteristic: need a 1x12 row");
    Characteristic c;
    for (int i = 0; i < 12; ++i) c.m[i] = v[i];
    return c;
  }
  static Characteristic from_parts(const QMatrix& a, const QMatrix& b) {
    Characteristic c;
    for (int i = 0; i < 6; ++i) c.m[i] = a[i], c.m[6 + i] = b[i];
    return c;
  }
  // (1/2)(mu, mu U)
  static Characteristic half_mu(const std::array<int, 6>& mu) {
    QMatrix v(1, 6);
    for (int i = 0; i < 6; ++i) v[i] = mu[i];
    return from_parts(v * Rat(1, 2), v * U_matrix() * Rat(1, 2));
  }
  QMatrix row() const {
    QMatrix v(1, 12);
    for (int i = 0; i < 12; ++i) v[i] = m[i];
    return v;
  }
  QMatrix prime() const {
    QMatrix v(1, 6);
    for (int i = 0; i < 6; ++i) v[i] = m[i];
    return v;
  }
  QMatrix dprime() const {
    QMatrix v(1, 6);
    for (int i = 0; i < 6; ++i) v[i] = m[6 + i];
    return v;
  }
  // <m>, the representative in [0,1)^12
  Characteristic reduced() const {
    Characteristic c;
    for (int i = 0; i < 12; ++i) c.m[i] = frac_part(m[i]);
    return c;
  }
  Characteristic operator+(const Characteristic& o) const {
    Characteristic c;
    for (int i = 0; i < 12; ++i) c.m[i] = m[i] + o.m[i];
    return c;
  }
  Characteristic operator-(const Characteristic& o) const {
    Characteristic c;
    for (int i = 0; i < 12; ++i) c.m[i] = m[i] - o.m[i];
    return c;
  }
  bool operator==(const Characteristic& o) const { return m == o.m; }
  bool operator<(const Characteristic& o) const { return m < o.m; }
  bool congruent(const Characteristic& o) const { return reduced() == o.reduced(); }
  // Parity of a half-integer characteristic: 4 m'.m'' mod 2.
  int parity() const {
    Rat s = 0;
    for (int i = 0; i < 6; ++i) s += m[i] * m[6 + i];
    Rat f = frac_part(s * 4 / 2);
    if (f != 0 && f != Rat(1, 2)) throw std::domain_error("parity: characteristic is not half-integral");
    return f == 0 ? 0 : 1;
  }
  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < 12; ++i) s += (i == 6 ? "; " : i ? "," : "") + m[i].get_str();
    return s + ")";
  }
};

// e(q) for rational q, reduced mod 1 exactly first.
template <class Real>
Cx<Real> e_rat(const Rat& q) {
  Rat f = frac_part(q);
  Real t = static_cast<Real>(f.get_num().get_d()) / static_cast<Real>(f.get_den().get_d());
  return std::polar(Real(1), 2 * std::numbers::pi_v<Real> * t);
}
template <class Real>
Cx<Real> e_cx(const Cx<Real>& x) {
  return std::exp(Cx<Real>(0, 2 * std::numbers::pi_v<Real>) * x);
}

template <class Real>
struct ThetaValue {
  Cx<Real> value;
  Real tail_bound = 0;  // rigorous bound on the omitted terms
  long terms = 0;
};

template <class Real>
struct ThetaOptions {
  Real tol = Real(1e-12);
  long max_points = 400'000'000;
  int threads = 0;  // 0: hardware concurrency
};

// Reusable data for one tau: Cholesky factor of Im tau and its smallest eigenvalue.
template <class Real>
class ThetaEvaluator {
 public:
  static constexpr int g = 6;
  using CM = CMat<Real>;
  using CV = CVec<Real>;
  using RM = RMat<Real>;

  explicit ThetaEvaluator(const CM& tau, ThetaOptions<Real> opt = {}) : tau_(tau), opt_(opt) {
    if (tau.rows() != g || tau.cols() != g) throw std::invalid_argument("theta: tau must be 6x6");
    Y_ = (tau.imag() + tau.imag().transpose()) / Real(2);
    lambda_ = min_sym_eigenvalue<Real>(Y_);
    if (!(lambda_ > 0)) throw std::domain_error("theta: Im tau is not positive definite");
    Eigen::LLT<RM> llt(Y_);
    R_ = llt.matrixL().transpose();  // Y = R^t R, R upper triangular
    Yinv_ = Y_.inverse();
    choose_radius();
  }

  const CM& tau() const { return tau_; }
  Real min_eigenvalue() const { return lambda_; }
  Real radius2() const { return R2_; }

  ThetaValue<Real> operator()(const Characteristic& m, const CV& z) const { return eval(m, z); }
  ThetaValue<Real> operator()(const Characteristic& m) const { return eval(m, CV::Zero(g)); }

  // Number of xi with (xi - c) Y (xi - c)^t <= r2; used by the enumeration tests.
  long count_points(const std::array<Real, g>& c, Real r2) const {
    long n = 0;
    enumerate(c, r2, [&](const std::array<long, g>&) { ++n; });
    return n;
  }

 private:
  CM tau_;
  ThetaOptions<Real> opt_;
  RM Y_, Yinv_, R_;
  Real lambda_ = 0, R2_ = 0, Kfac_ = 0, s_ = 0;

  // Outside the ellipsoid q(u) > R^2,
  //   sum e^{-pi q(u)} <= e^{-pi (1-s) R^2} sum_u e^{-pi s q(u)} <= e^{-pi (1-s) R^2} (1 + 1/sqrt(s lambda))^6.
  void choose_radius() {
    const Real pi = std::numbers::pi_v<Real>;
    Real best = std::numeric_limits<Real>::infinity();
    for (int i = 1; i < 100; ++i) {
      Real s = Real(i) / 100;
      Real logK = g * std::log1p(1 / std::sqrt(s * lambda_));
      Real r2 = (logK - std::log(opt_.tol)) / (pi * (1 - s));
      if (r2 < best) best = r2, s_ = s, Kfac_ = logK;
    }
    R2_ = std::max(best, Real(0));
  }

  template <class F>
  void enumerate(const std::array<Real, g>& c, Real r2, F&& visit, int fixed_top = INT32_MIN) const {
    std::array<long, g> xi{};
    std::array<Real, g + 1> acc{};
    auto rec = [&](auto&& self, int i) -> void {
      if (i < 0) { visit(xi); return; }
      Real off = 0;
      for (int j = i + 1; j < g; ++j) off += R_(i, j) * (Real(xi[j]) - c[j]);
      Real rem = r2 - acc[i + 1];
      if (rem < 0) return;
      Real r = std::sqrt(rem) / R_(i, i);
      Real mid = c[i] - off / R_(i, i);
      long lo = static_cast<long>(std::ceil(mid - r)), hi = static_cast<long>(std::floor(mid + r));
      if (i == g - 1 && fixed_top != INT32_MIN) {
        if (fixed_top < lo || fixed_top > hi) return;
        lo = hi = fixed_top;
      }
      for (long n = lo; n <= hi; ++n) {
        xi[i] = n;
        Real s = R_(i, i) * (Real(n) - c[i]) + off;
        acc[i] = acc[i + 1] + s * s;
        self(self, i - 1);
      }
    };
    acc[g] = 0;
    rec(rec, g - 1);
  }

  ThetaValue<Real> eval(const Characteristic& m, const CV& z) const {
    const Real pi = std::numbers::pi_v<Real>;
    // rational data on a common denominator
    long den = 1;
    for (auto& q : m.m) den = std::lcm(den, q.get_den().get_si());
    if (den > 4096) throw std::domain_error("theta: characteristic denominator too large");
    std::array<long, g> mp_num{}, mpp_num{};
    std::array<Real, g> mp{};
    for (int i = 0; i < g; ++i) {
      Rat a = m.m[i] * den, b = m.m[g + i] * den;
      mp_num[i] = a.get_num().get_si();
      mpp_num[i] = b.get_num().get_si();
      mp[i] = Real(mp_num[i]) / Real(den);
    }
    // e(m''.(xi + m')) = e((sum_i xi_i N''_i + N''.N'/den) / den) with the numerator reduced mod den
    long den2 = den * den;
    long const_num = 0;
    for (int i = 0; i < g; ++i) const_num = (const_num + (mpp_num[i] % den2) * (mp_num[i] % den2)) % den2;

    Eigen::Matrix<Real, 1, g> y = z.imag();
    Eigen::Matrix<Real, 1, g> cz = y * Yinv_;
    std::array<Real, g> center{};
    for (int i = 0; i < g; ++i) center[i] = -cz(i) - mp[i];
    Real envelope_log = pi * (cz * Y_ * cz.transpose())(0, 0);

    // split on the top coordinate so the sum order is independent of the thread count
    Real off_top = std::sqrt(R2_) / R_(g - 1, g - 1);
    long top_lo = static_cast<long>(std::ceil(center[g - 1] - off_top));
    long top_hi = static_cast<long>(std::floor(center[g - 1] + off_top));
    int nt = opt_.threads > 0 ? opt_.threads : std::max(1u, std::thread::hardware_concurrency());

    auto slab = [&](long top) {
      Cx<Real> sum = 0;
      long count = 0;
      enumerate(center, R2_, [&](const std::array<long, g>& xi) {
        Eigen::Matrix<Real, 1, g> v;
        long rat = const_num;
        for (int i = 0; i < g; ++i) {
          v(i) = Real(xi[i]) + mp[i];
          rat = (rat + ((xi[i] % den2) * ((mpp_num[i] * den) % den2)) % den2) % den2;
        }
        Cx<Real> ex = Real(0.5) * (v * tau_ * v.transpose())(0, 0) + (z * v.transpose())(0, 0);
        Real rat_t = Real(((rat % den2) + den2) % den2) / Real(den2);
        // shift the real exponent by the envelope so large Im z do not overflow
        Real re = -2 * pi * ex.imag() - envelope_log;
        Real ph = 2 * pi * (ex.real() + rat_t);
        sum += std::polar(std::exp(re), ph);
        ++count;
      }, static_cast<int>(top));
      return std::make_pair(sum, count);
    };

    long nslabs = std::max(0L, top_hi - top_lo + 1);
    std::vector<std::pair<Cx<Real>, long>> parts(nslabs);
    if (nslabs > 0) {
      std::vector<std::future<void>> jobs;
      std::atomic<long> next{0};
      auto worker = [&] {
        for (long k; (k = next.fetch_add(1)) < nslabs;) parts[k] = slab(top_lo + k);
      };
      int workers = static_cast<int>(std::min<long>(nt, nslabs));
      for (int t = 1; t < workers; ++t) jobs.push_back(std::async(std::launch::async, worker));
      worker();
      for (auto& j : jobs) j.get();
    }
    ThetaValue<Real> out;
    Cx<Real> total = 0;
    for (auto& [s, c] : parts) total += s, out.terms += c;
    if (out.terms > opt_.max_points) throw std::runtime_error("theta: enumeration budget exceeded");
    Real scale = std::exp(envelope_log);
    out.value = total * scale;
    out.tail_bound = scale * std::exp(Kfac_ - pi * (1 - s_) * R2_);
    return out;
  }
};

template <class Real>
ThetaValue<Real> theta(const Characteristic& m, const CMat<Real>& tau, const CVec<Real>& z,
                       const ThetaOptions<Real>& opt = {}) {
  return ThetaEvaluator<Real>(tau, opt)(m, z);
}

template <class Real>
ThetaValue<Real> theta_constant(const Characteristic& m, const CMat<Real>& tau, const ThetaOptions<Real>& opt = {}) {
  return ThetaEvaluator<Real>(tau, opt)(m);
}

// z = p tau + q for a real point (p, q) of R^12
template <class Real>
CVec<Real> abel_point(const CMat<Real>& tau, const QMatrix& pq) {
  CVec<Real> p(6), q(6);
  for (int i = 0; i < 6; ++i) {
    p(i) = Cx<Real>(static_cast<Real>(pq[i].get_d()), 0);
    q(i) = Cx<Real>(static_cast<Real>(pq[6 + i].get_d()), 0);
  }
  return p * tau + q;
}

// ---- tau -> tau + U ------------------------------------------------------

struct ShiftedCharacteristic {
  Characteristic m;
  Rat phase;  // theta_m(tau + U) = e(phase) theta_{new m}(tau)
};

inline ShiftedCharacteristic tau_shift_U(const Characteristic& m) {
  QMatrix a = m.prime(), b = m.dprime(), U = U_matrix(), U0 = U0_vector();
  QMatrix nb = b + a * U + U0 * Rat(1, 2);
  Rat ph = -Rat(1, 2) * (a * U * a.transpose())(0, 0) - Rat(1, 2) * dot(a, U0);
  return {Characteristic::from_parts(a, nb), frac_part(ph)};
}

// m# = m sigma^{-1} + (1/2)((C D^t)_0, (A B^t)_0)
inline Characteristic transform_characteristic(const QMatrix& sigma, const Characteristic& m) {
  if (!is_symplectic(sigma)) throw std::invalid_argument("transform_characteristic: sigma is not symplectic");
  auto [A, B, C, D] = blocks(sigma);
  QMatrix cd = C * D.transpose(), ab = A * B.transpose();
  QMatrix shift(1, 12);
  for (int i = 0; i < 6; ++i) shift[i] = cd(i, i) * Rat(1, 2), shift[6 + i] = ab(i, i) * Rat(1, 2);
  return Characteristic::from_row(m.row() * sigma.inverse() + shift);
}

inline QMatrix sigma_U() {
  QMatrix s(12, 12), U = U_matrix();
  s.set_block(0, 6, U);
  s.set_block(6, 0, -U);
  s.set_block(6, 6, QMatrix::identity(6));
  return s;
}

// Exponent of the predicted ratio c(a,b)/c(0,0).
inline Rat c_ratio_exponent(const QMatrix& a, const QMatrix& b) {
  QMatrix U = U_matrix();
  return frac_part(Rat(1, 2) * (b * U * b.transpose())(0, 0) + dot(a, b) + Rat(1, 2) * dot(b, U0_vector()));
}

// c(a,b) from
//   theta_{a,b}((tau+U)/2, z#) e(-1/2 z# C z^t) = c(a,b) sqrt(8) i theta_{-bU, aU+b+U0/2}(tau, z),
// z# = z (-U tau + I)^{-1}, C = -U. At z = 0 the exponential factor is 1; a generic z is
// used when the characteristic is odd.
template <class Real>
Cx<Real> c_constant(const QMatrix& a, const QMatrix& b, const CMat<Real>& tau, const ThetaOptions<Real>& opt = {},
                    const CVec<Real>* probe = nullptr) {
  CMat<Real> U = U_complex<Real>(), I = CMat<Real>::Identity(6, 6);
  CMat<Real> K = I - U * tau, Ki = K.inverse();
  CMat<Real> tsh = U * Ki;
  tsh = (tsh + tsh.transpose()) / Real(2);
  Characteristic lhs_m = Characteristic::from_parts(a, b);
  QMatrix Uq = U_matrix();
  Characteristic rhs_m = Characteristic::from_parts(-b * Uq, a * Uq + b + U0_vector() * Rat(1, 2));
  CVec<Real> z = CVec<Real>::Zero(6);
  if (probe) z = *probe;
  else if (lhs_m.parity() == 1)
    for (int i = 0; i < 6; ++i) z(i) = Cx<Real>(Real(0.05) * (i + 1), Real(0.03) * (6 - i));
  CVec<Real> zs = z * Ki;
  Cx<Real> fac = e_cx<Real>(Real(-0.5) * (zs * (-U) * z.transpose())(0, 0));
  Cx<Real> l = ThetaEvaluator<Real>(tsh, opt)(lhs_m, zs).value * fac;
  Cx<Real> r = ThetaEvaluator<Real>(tau, opt)(rhs_m, z).value * Cx<Real>(0, std::sqrt(Real(8)));
  if (std::abs(r) == 0) throw std::domain_error("c_constant: both sides vanish at the probe");
  return l / r;
}

// ---- quadratic relations -----------------------------------------------

inline std::vector<QMatrix> half_vectors() {
  std::vector<QMatrix> out;
  for (int b = 0; b < 64; ++b) {
    QMatrix v(1, 6);
    for (int i = 0; i < 6; ++i) v[i] = Rat((b >> i) & 1) / 2;
    out.push_back(v);
  }
  return out;
}

inline QMatrix reduce_half(const QMatrix& v) {
  QMatrix r(1, v.cols());
  for (int i = 0; i < v.cols(); ++i) r[i] = frac_part(v[i]);
  return r;
}

inline bool quadratic_admissible(const QMatrix& v1) {
  bool nonzero = false;
  for (int i = 0; i < 6; ++i) nonzero = nonzero || v1[i] != 0;
  Rat q = (v1 * U_matrix() * v1.transpose())(0, 0);
  return nonzero && q.get_den() == 1 && mpz_divisible_ui_p(q.get_num_mpz_t(), 4);
}

// Memoized theta constants at a fixed tau.
template <class Real>
class ThetaConstantCache {
 public:
  explicit ThetaConstantCache(const ThetaEvaluator<Real>& ev) : ev_(ev) {}
  Cx<Real> operator()(const Characteristic& m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    Cx<Real> v = ev_(m).value;
    memo_.emplace(m, v);
    return v;
  }
  Cx<Real> operator()(const QMatrix& a, const QMatrix& b) { return (*this)(Characteristic::from_parts(a, b)); }

 private:
  const ThetaEvaluator<Real>& ev_;
  std::map<Characteristic, Cx<Real>> memo_;
};

template <class Real>
struct TwoSided {
  Cx<Real> lhs, rhs;
  Real residual() const { return std::abs(lhs - rhs); }
};

// Both sides of the first quadratic relation for v1 in Z^6.
template <class Real>
TwoSided<Real> quadratic_item1(const QMatrix& v1, ThetaConstantCache<Real>& th) {
  QMatrix U = U_matrix(), U0 = U0_vector();
  Rat h(1, 2);
  Rat lph = -Rat(1, 4) * (v1 * U * v1.transpose())(0, 0) + Rat(3, 4) * dot(v1, U0) - Rat(3, 8) * dot(U0, U0);
  QMatrix w = (v1 - U0) * h;
  TwoSided<Real> r;
  r.lhs = Real(8) * e_rat<Real>(lph) * th(w, w * U) * th(v1 * h, v1 * U * h);
  r.rhs = 0;
  for (auto& a : half_vectors()) {
    Rat ph = (a * U * a.transpose())(0, 0) + Rat(3, 2) * dot(a, U0) - dot(v1, a);
    r.rhs += e_rat<Real>(ph) * th(a * U + U0 * h, a + U0 * h) * th(a * U, a);
  }
  return r;
}

// Both sides of the second relation for v1 in {0,1}^6; `reduced` selects the
// -8 e(v1 U0/4) form, valid when v1 U v1^t / 4 is integral.
template <class Real>
TwoSided<Real> quadratic_item2(const QMatrix& v1, ThetaConstantCache<Real>& th, bool reduced) {
  QMatrix U = U_matrix(), U0 = U0_vector();
  Rat h(1, 2);
  QMatrix b = reduce_half(v1 * h - U0 * h);
  Cx<Real> tt = th(b, b * U) * th(v1 * h, v1 * U * h);
  TwoSided<Real> r;
  if (reduced) {
    r.lhs = Real(-8) * e_rat<Real>(Rat(1, 4) * dot(v1, U0)) * tt;
  } else {
    Rat lph = -Rat(1, 4) * (v1 * U * v1.transpose())(0, 0) + Rat(3, 4) * dot(v1, U0) - Rat(3, 8) * dot(U0, U0) +
              h * dot(v1, U0);
    r.lhs = Real(8) * e_rat<Real>(lph) * tt;
  }
  r.rhs = 0;
  for (auto& a : half_vectors()) {
    QMatrix s = reduce_half(a + U0 * h);
    r.rhs += e_rat<Real>(h * dot(a, U0) + dot(v1, a)) * th(s * U, s) * th(a * U, a);
  }
  return r;
}

// e(v1 U0/4) theta_{b'', b''U} theta_{v1/2, v1 U/2} + theta_{0,0} theta_{U0/2, U0 X/2}
// with X = U (the good-basis reading) or X = I (the literal reading).
template <class Real>
Cx<Real> corollary_sum(const QMatrix& v1, ThetaConstantCache<Real>& th, bool literal_reading) {
  QMatrix U = U_matrix(), U0 = U0_vector(), Z(1, 6);
  Rat h(1, 2);
  QMatrix b = reduce_half(v1 * h - U0 * h);
  QMatrix second = literal_reading ? U0 * h : U0 * U * h;
  return e_rat<Real>(Rat(1, 4) * dot(v1, U0)) * th(b, b * U) * th(v1 * h, v1 * U * h) + th(Z, Z) * th(U0 * h, second);
}

inline std::vector<QMatrix> admissible_v1() {
  std::vector<QMatrix> out;
  for (int bits = 1; bits < 64; ++bits) {
    QMatrix v(1, 6);
    for (int i = 0; i < 6; ++i) v[i] = (bits >> i) & 1;
    if (quadratic_admissible(v)) out.push_back(v);
  }
  return out;
}

}  // namespace prym
