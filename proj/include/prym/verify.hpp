#pragma once
// Verification suites shared by the command-line tool and the acceptance run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "f2geom.hpp"
#include "forms.hpp"
#include "lattice.hpp"
#include "periods.hpp"
#include "theta.hpp"

namespace prym {

struct Check {
  std::string name;
  double value = 0;  // residual or count
  double tol = 0;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0;
  bool pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
  void add(std::string name, double value, double tol, bool pass, std::string detail = "") {
    checks.push_back({std::move(name), value, tol, pass, std::move(detail)});
  }
  // residual below tol
  void below(std::string name, double value, double tol, std::string detail = "") {
    add(std::move(name), value, tol, value < tol, std::move(detail));
  }
  void exact(std::string name, bool ok, std::string detail = "") { add(std::move(name), ok ? 0 : 1, 0, ok, std::move(detail)); }
};

template <class Real>
struct VerifyOptions {
  BranchConfig<Real> cfg = BranchConfig<Real>::standard();
  QuadOptions<Real> quad{};
  ThetaOptions<Real> theta{};
  std::uint64_t seed = 20240917;
  int random_configs = 0;  // extra seeded configurations for the period/forms suites
  bool corrupt_U = false;  // negative control for the lattice suite
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

template <class Real>
std::vector<BranchConfig<Real>> config_list(const VerifyOptions<Real>& o) {
  std::vector<BranchConfig<Real>> v{o.cfg};
  for (auto& c : random_configs<Real>(o.seed, o.random_configs)) v.push_back(c);
  return v;
}

inline std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

// ---- combinatorics ---------------------------------------------------------

// Isometries of (V, q) counted by backtracking over images of the basis.
inline long count_orthogonal_maps() {
  auto q = [](std::uint8_t c) { return quadratic_form(F2Class::from_coords(c)); };
  auto b = [&](std::uint8_t x, std::uint8_t y) { return q(x ^ y) ^ q(x) ^ q(y); };
  std::array<std::uint8_t, 6> img{};
  long count = 0;
  auto rec = [&](auto&& self, int i) -> void {
    if (i == 6) { ++count; return; }
    std::uint8_t ei = static_cast<std::uint8_t>(1u << i);
    for (int c = 1; c < 64; ++c) {
      auto v = static_cast<std::uint8_t>(c);
      if (q(v) != q(ei)) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = b(v, img[j]) == b(ei, static_cast<std::uint8_t>(1u << j));
      if (!ok) continue;
      img[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return count;
}

inline SuiteResult suite_combinatorics() {
  Stopwatch sw;
  SuiteResult r{"combinatorics", {}, 0};
  auto p2 = enumerate_partitions2222();
  auto p4 = enumerate_partitions44();
  r.add("#P(2^4)", double(p2.size()), 105, p2.size() == 105);
  r.add("#P(4^2)", double(p4.size()), 35, p4.size() == 35);
  int singular = 0;
  for (int c = 1; c < 64; ++c) singular += quadratic_form(F2Class::from_coords(static_cast<std::uint8_t>(c))) == 0;
  r.add("#{v != 0 : q(v) = 0}", singular, 35, singular == 35);
  std::set<F2Class> split_classes;
  for (auto& s : p4) split_classes.insert(s.to_class());
  r.exact("(4,4)-splits are the singular vectors", split_classes.size() == 35 &&
                                                     std::all_of(split_classes.begin(), split_classes.end(),
                                                                 [](const F2Class& v) { return quadratic_form(v) == 0; }));
  auto perms = all_perms();
  std::set<std::uint64_t> keys;
  bool qok = true;
  for (auto& p : perms) {
    auto m = perm_to_orthogonal(p);
    qok = qok && m.preserves_q();
    keys.insert(m.key());
  }
  r.exact("S8 images preserve q", qok);
  r.add("S8 -> O(V,q) injective", double(keys.size()), 40320, keys.size() == 40320);
  bool hom = true;
  for (auto& p : perms)
    for (int a = 0; a < 7 && hom; ++a) {
      Perm s = transposition(a, a + 1);
      hom = perm_to_orthogonal(p * s) == perm_to_orthogonal(p) * perm_to_orthogonal(s);
    }
  r.exact("S8 -> O(V,q) homomorphism", hom);
  long nq = count_orthogonal_maps();
  r.add("#O(V,q) (onto)", double(nq), 40320, nq == 40320);
  r.seconds = sw.seconds();
  r.add("runtime < 1 s", r.seconds, 1.0, r.seconds < 1.0);
  return r;
}

// ---- lattice ------------------------------------------------------------

inline QMatrix corrupted_U() {
  QMatrix U = U_matrix();
  U(2, 3) = 1;  // sign flip in the swapped block
  return U;
}

inline SuiteResult suite_lattice(bool corrupt_U = false) {
  Stopwatch sw;
  SuiteResult r{"lattice", {}, 0};
  QMatrix U = corrupt_U ? corrupted_U() : U_matrix();
  QMatrix S1 = basis_sigma1();
  r.add("det intersection matrix", intersection_matrix().det().get_d(), 64, intersection_matrix().det() == 64);
  r.exact("Gram(Sigma_1) = (0 -I; I 0) under <,>", gram_half(S1) == good_gram());
  r.exact("rho on Sigma_1 = (0 -U; U 0)", rho_on_basis(S1) == rho_block(U));
  r.exact("U_0 = diag(U)", [&] {
    for (int i = 0; i < 6; ++i)
      if (U(i, i) != U0_vector()[i]) return false;
    return true;
  }());
  bool refl_ok = true;
  for (int p = 1; p <= 7; ++p) refl_ok = refl_ok && in_unitary_group(reflection(p));
  refl_ok = refl_ok && in_unitary_group(reflection_M25());
  r.exact("reflections preserve <,> and rho", refl_ok);
  int good = 0, contain = 0, dmem = 0;
  std::set<F2Class> c0;
  for (auto& c : coset_representatives()) {
    QMatrix S = S1 * c.G;
    auto g = check_good(S, U);
    good += g.ok();
    contain += g.contains_one_minus_rho;
    QMatrix d = translation_vector(basis_change(S, basis_sigmaB()));
    dmem += delta_membership(d);
    F2Class dg = F2Class::from_coords(orthogonal_image(c.G).apply(Delta_bar().coords()));
    c0.insert(half_delta_class(d) + dg);
  }
  std::size_t n = coset_representatives().size();
  r.add("Sigma_g good for all g", good, double(n), good == int(n));
  r.add("(1-rho)H in L_g for all g", contain, double(n), contain == int(n));
  r.add("delta_g in Z^3+2Z^3+Z^6 for all g", dmem, double(n), dmem == int(n));
  r.add("class(delta_g/2) - Delta g constant", double(c0.size()), 1, c0.size() == 1,
        c0.size() == 1 ? "c0 rep bits " + std::to_string(c0.begin()->rep()) : "");
  r.seconds = sw.seconds();
  r.add("runtime < 10 s", r.seconds, 10.0, r.seconds < 10.0);
  return r;
}

// ---- periods ---------------------------------------------------------------

template <class Real>
void period_checks(SuiteResult& r, const BranchConfig<Real>& cfg, const QuadOptions<Real>& qo, const std::string& tag) {
  Stopwatch sw;
  auto pm = period_matrix(cfg, qo);
  r.exact(tag + " quadrature converged", pm.converged, "error " + fmt(double(pm.error)));
  auto [b1, b2] = boundary_residuals(pm);
  r.below(tag + " sum_j A_j", double(b1), 1e-8);
  r.below(tag + " sum_j (1-rho^j)/(1-rho) A_j", double(b2), 1e-8);
  auto nt = normalized_tau(pm, basis_sigma1(), "Sigma_1", false);
  r.below(tag + " |tau - tau^t| / |tau|", double(nt.symmetry), 1e-8);
  r.add(tag + " min eig Im tau > 0", double(nt.min_imag_eig), 0, nt.min_imag_eig > 0);
  r.below(tag + " |(tau U)^2 + I|", double(rho_relation_residual(nt.tau)), 1e-7);
  auto bp = ball_point(pm);
  r.add(tag + " ball norm h(v,v) < 0", double(bp.norm), 0, bp.norm < 0);
  Cx<Real> d = det_minus_U_tau_plus_I(nt.tau);
  r.below(tag + " |det(C tau + D) + 8| / 8", double(std::abs(d + Real(8)) / 8), 1e-6);
  auto sec = sw.seconds();
  r.add(tag + " runtime < 30 s", sec, 30.0, sec < 30.0);
}

template <class Real>
SuiteResult suite_periods(const std::vector<BranchConfig<Real>>& cfgs, const QuadOptions<Real>& qo) {
  Stopwatch sw;
  SuiteResult r{"periods", {}, 0};
  for (std::size_t i = 0; i < cfgs.size(); ++i) period_checks(r, cfgs[i], qo, "cfg" + std::to_string(i));
  auto bc = branch_continuation_check(cfgs[0]);
  r.below("branch phases vs continuation", double(bc.max_phase_error), 1e-9);
  r.below("branch closure", double(bc.closure_error), 1e-9);
  r.seconds = sw.seconds();
  return r;
}

// ---- theta kernel --------------------------------------------------------

inline Characteristic random_half_characteristic(std::mt19937_64& rng) {
  Characteristic m;
  for (auto& v : m.m) v = Rat(static_cast<int>(rng() % 2)) / 2;
  return m;
}

template <class Real>
Real one_dim_theta3_i() {
  // sum_n e^{-pi n^2}
  Real s = 1;
  for (int n = 1; n < 20; ++n) s += 2 * std::exp(-std::numbers::pi_v<Real> * n * n);
  return s;
}

template <class Real>
SuiteResult suite_theta_kernel(const BranchConfig<Real>& cfg, const VerifyOptions<Real>& o) {
  Stopwatch sw;
  SuiteResult r{"theta", {}, 0};
  auto pm = period_matrix(cfg, o.quad);
  auto tau = normalized_tau(pm, basis_sigma1()).tau;
  ThetaEvaluator<Real> ev(tau, o.theta);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);

  // quasi-periodicity
  Real qp = 0;
  for (int t = 0; t < 10; ++t) {
    Characteristic m = random_half_characteristic(rng);
    CVec<Real> z(6), rr(6), ss(6);
    QMatrix rq(1, 6), sq(1, 6);
    for (int i = 0; i < 6; ++i) {
      z(i) = Cx<Real>(u(rng), u(rng));
      int a = int(rng() % 3) - 1, b = int(rng() % 5) - 2;
      rq[i] = a, sq[i] = b;
      rr(i) = Real(a), ss(i) = Real(b);
    }
    Cx<Real> lhs = ev(m, z + rr * tau + ss).value;
    Cx<Real> ex = Real(-0.5) * (rr * tau * rr.transpose())(0, 0) - (rr * z.transpose())(0, 0);
    Rat rat = dot(m.prime(), sq) - dot(m.dprime(), rq);
    Cx<Real> rhs = e_cx<Real>(ex) * e_rat<Real>(rat) * ev(m, z).value;
    qp = std::max(qp, std::abs(lhs - rhs) / std::max({Real(1), std::abs(lhs), std::abs(rhs)}));
  }
  r.below("quasi-periodicity", double(qp), 1e-8);

  // tau + U
  {
    CMat<Real> tU = tau + U_complex<Real>();
    ThetaEvaluator<Real> evU(tU, o.theta);
    Real res = 0;
    for (int t = 0; t < 12; ++t) {
      Characteristic m = random_half_characteristic(rng);
      auto sh = tau_shift_U(m);
      Cx<Real> l = evU(m).value, rh = e_rat<Real>(sh.phase) * ev(sh.m).value;
      res = std::max(res, std::abs(l - rh) / std::max({Real(1), std::abs(l), std::abs(rh)}));
    }
    r.below("theta_m(tau+U) shift identity", double(res), 1e-8);
  }

  // c(a,b)
  {
    QMatrix Z(1, 6);
    Cx<Real> c00 = c_constant<Real>(Z, Z, tau, o.theta);
    r.below("|c(0,0)^2 - 1|", double(std::abs(c00 * c00 - Real(1))), 1e-6);
    Real res = 0;
    for (int t = 0; t < 50; ++t) {
      QMatrix a(1, 6), b(1, 6);
      for (int i = 0; i < 6; ++i) a[i] = Rat(int(rng() % 2)) / 2, b[i] = Rat(int(rng() % 2)) / 2;
      Cx<Real> c = c_constant<Real>(a, b, tau, o.theta);
      res = std::max(res, std::abs(c / c00 - e_rat<Real>(c_ratio_exponent(a, b))));
    }
    r.below("c(a,b)/c(0,0) phase formula (50 random)", double(res), 1e-6);
  }

  // synthetic tau = i I
  {
    CMat<Real> ti = Cx<Real>(0, 1) * CMat<Real>::Identity(6, 6);
    Cx<Real> v = ThetaEvaluator<Real>(ti, o.theta)(Characteristic()).value;
    Real oracle = std::pow(one_dim_theta3_i<Real>(), 6);
    r.below("theta(iI) vs 1-D product", double(std::abs(v - oracle) / oracle), 1e-10);
  }
  r.seconds = sw.seconds();
  return r;
}

// Entries |theta| e^{-pi Im z Y^{-1} Im z^t} remove the Gaussian envelope of the
// translated point before comparing against the mean.
template <class Real>
RMat<Real> normalized_vanishing_table(const ThetaEvaluator<Real>& ev) {
  RMat<Real> t = vanishing_table(ev);
  RMat<Real> Y = ev.tau().imag();
  RMat<Real> Yi = ((Y + Y.transpose()) / Real(2)).inverse();
  for (int j = 1; j <= 8; ++j) {
    Eigen::Matrix<Real, 1, Eigen::Dynamic> y = abel_point<Real>(ev.tau(), torsion_point(j)).imag();
    Real env = std::exp(std::numbers::pi_v<Real> * (y * Yi * y.transpose())(0, 0));
    t.col(j - 1) /= env;
  }
  return t;
}

template <class Real>
SuiteResult suite_vanishing(const BranchConfig<Real>& cfg, const VerifyOptions<Real>& o) {
  Stopwatch sw;
  SuiteResult r{"vanishing", {}, 0};
  auto pm = period_matrix(cfg, o.quad);
  auto tau = normalized_tau(pm, basis_sigma1()).tau;
  ThetaEvaluator<Real> ev(tau, o.theta);
  RMat<Real> t = normalized_vanishing_table(ev);
  auto ord = vanishing_orders();
  for (int k = 0; k < 4; ++k) {
    Real mean = t.row(k).mean();
    Real vmax = 0, nmin = std::numeric_limits<Real>::infinity();
    for (int j = 0; j < 8; ++j) (ord[j] ? vmax = std::max(vmax, t(k, j)) : nmin = std::min(nmin, t(k, j)));
    r.below("k=" + std::to_string(k + 1) + " vanishing at p3,p4,p7,p8", double(vmax / mean), 1e-6);
    r.add("k=" + std::to_string(k + 1) + " nonzero at p1,p2,p5,p6", double(nmin / mean), 1e-3, nmin / mean > Real(1e-3));
  }
  r.seconds = sw.seconds();
  return r;
}

// ---- quadratic relations ---------------------------------------------------

template <class Real>
SuiteResult suite_quadratic(const BranchConfig<Real>& cfg, const VerifyOptions<Real>& o) {
  Stopwatch sw;
  SuiteResult r{"quadratic", {}, 0};
  auto pm = period_matrix(cfg, o.quad);
  auto tau = normalized_tau(pm, basis_sigma1()).tau;
  ThetaEvaluator<Real> ev(tau, o.theta);
  ThetaConstantCache<Real> th(ev);
  std::mt19937_64 rng(o.seed + 7);
  Real r1 = 0, r2 = 0, r2r = 0;
  int nonzero1 = 0;
  for (int bits = 0; bits < 64; ++bits) {
    QMatrix v(1, 6);
    for (int i = 0; i < 6; ++i) v[i] = (bits >> i) & 1;
    for (int s = 0; s < 2; ++s) {
      QMatrix w = v;
      if (s)
        for (int i = 0; i < 6; ++i) w[i] += 2 * (int(rng() % 3) - 1);
      auto t = quadratic_item1(w, th);
      r1 = std::max(r1, t.residual());
      nonzero1 += std::abs(t.lhs) > Real(1e-3);
    }
    auto t2 = quadratic_item2(v, th, false);
    r2 = std::max(r2, t2.residual());
    if (quadratic_admissible(v) || bits == 0) r2r = std::max(r2r, quadratic_item2(v, th, true).residual());
  }
  r.below("first relation, v1 in Z^6", double(r1), 1e-6, std::to_string(nonzero1) + " nonvanishing sides");
  r.below("second relation, v1 in {0,1}^6", double(r2), 1e-6);
  r.below("second relation, reduced form", double(r2r), 1e-6);
  Real cor = 0, lit = 0;
  int count = 0;
  for (auto& v : admissible_v1()) {
    if (v == U0_vector()) continue;  // both terms coincide there
    cor = std::max(cor, std::abs(corollary_sum(v, th, false)));
    lit = std::max(lit, std::abs(corollary_sum(v, th, true)));
    ++count;
  }
  r.below("corollary residual (U0 U reading)", double(cor), 1e-6, std::to_string(count) + " admissible v1");
  r.below("corollary residual (literal reading)", double(lit), 1e-6, "U0 U = U0, readings coincide");
  r.seconds = sw.seconds();
  return r;
}

// ---- forms -----------------------------------------------------------------

template <class Real>
SuiteResult suite_cross_ratio(const std::vector<BranchConfig<Real>>& cfgs, const VerifyOptions<Real>& o) {
  Stopwatch sw;
  SuiteResult r{"cross_ratio", {}, 0};
  Real res = 0, prod = 0, aux = 0;
  for (auto& cfg : cfgs) {
    auto pm = period_matrix(cfg, o.quad);
    auto tau = normalized_tau(pm, basis_sigma1()).tau;
    ThetaEvaluator<Real> ev(tau, o.theta);
    auto c = cross_ratio_check(cfg, theta_quadruple(ev));
    res = std::max(res, c.residual);
    prod = std::max(prod, c.product);
    aux = std::max(aux, c.auxiliary);
  }
  std::string n = std::to_string(cfgs.size()) + " configs";
  r.below("cross-ratio identity (relative)", double(res), 1e-5, n);
  r.below("t1 t3 = t2 t4", double(prod), 1e-6, n);
  r.below("(t2 - i t3)(t1 + i t4) = (t2 + i t3)(t1 - i t4)", double(aux), 1e-6, n);
  r.seconds = sw.seconds();
  return r;
}

template <class Real>
SuiteResult suite_main_theorem(const std::vector<BranchConfig<Real>>& cfgs, const VerifyOptions<Real>& o,
                               std::vector<ThetaMapReport<Real>>* reports = nullptr) {
  Stopwatch sw;
  SuiteResult r{"main_theorem", {}, 0};
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    Stopwatch one;
    auto pm = period_matrix(cfgs[i], o.quad);
    auto rep = theta_map(cfgs[i], pm, o.theta);
    std::string tag = "cfg" + std::to_string(i);
    r.below(tag + " max_r |T_r^2/T_1^2 - eps_r P_r/P_1|", double(rep.max_residual), 1e-5,
            "unsigned residual " + fmt(double(rep.max_unsigned_residual)) + ", eps_r = -1 on " +
                std::to_string(rep.negative_signs) + " of 105");
    r.below(tag + " tau# direct vs fractional-linear", double(rep.max_tau_agreement), 1e-6);
    double s = one.seconds();
    r.add(tag + " runtime < 600 s", s, 600, s < 600);
    if (reports) reports->push_back(std::move(rep));
  }
  r.seconds = sw.seconds();
  return r;
}

template <class Real>
SuiteResult suite_chi_const() {
  Stopwatch sw;
  SuiteResult r{"chi_const", {}, 0};
  auto D = transform_matrix_D_ev<Real>(reflection_M25());
  r.below("D^(M25)_ev vs reference matrix (projective)", double(projective_distance(D, reference_D_M25<Real>())), 1e-5);
  auto Did = transform_matrix_D_ev<Real>(QMatrix::identity(12));
  r.below("D^(id)_ev is scalar", double(projective_distance(Did, CMat<Real>(CMat<Real>::Identity(4, 4)))), 1e-9);
  r.seconds = sw.seconds();
  return r;
}

}  // namespace prym
