#pragma once
// Gauss-Jacobi rules for  int_{-1}^{1} (1-t)^a (1+t)^b f(t) dt.
// Nodes start from the Golub-Welsch eigenvalues and are polished by Newton on
// the three-term recurrence; weights use the closed form with log-gamma.

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <vector>

namespace prym {

template <class Real>
struct QuadRule {
  std::vector<Real> nodes, weights;
};

namespace detail {

// P_n^{(a,b)}(x) and P_{n-1}^{(a,b)}(x)
template <class Real>
std::pair<Real, Real> jacobi_pair(int n, Real a, Real b, Real x) {
  Real p0 = 1, p1 = (a + 1) + (a + b + 2) * (x - 1) / 2;
  if (n == 0) return {p0, 0};
  for (int k = 2; k <= n; ++k) {
    Real s = 2 * k + a + b;
    Real c1 = 2 * k * (k + a + b) * (s - 2);
    Real c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b);
    Real c3 = 2 * (k + a - 1) * (k + b - 1) * s;
    Real p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1, p1 = p2;
  }
  return {p1, p0};
}

template <class Real>
Real jacobi_derivative(int n, Real a, Real b, Real x, Real pn, Real pn1) {
  Real s = 2 * n + a + b;
  return (n * ((a - b) - s * x) * pn + 2 * (n + a) * (n + b) * pn1) / (s * (1 - x * x));
}

}  // namespace detail

template <class Real>
QuadRule<Real> make_gauss_jacobi(int n, Real a, Real b) {
  using std::abs, std::pow, std::sqrt;
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be positive");
  if (!(a > -1 && b > -1)) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");

  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  Mat T = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    Real s = 2 * k + a + b;
    T(k, k) = (s == 0 || s + 2 == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
    if (k + 1 < n) {
      Real k1 = k + 1, s1 = 2 * k1 + a + b;
      // (k1 + a + b) / (s1 - 1) is 1 at k1 = 1; written out to avoid 0/0 when a + b = -1
      Real r = k == 0 ? Real(1) : (k1 + a + b) / (s1 - 1);
      Real v = 4 * k1 * (k1 + a) * (k1 + b) * r / (s1 * s1 * (s1 + 1));
      T(k, k + 1) = T(k + 1, k) = sqrt(v);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(T, Eigen::EigenvaluesOnly);
  QuadRule<Real> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  Real c = pow(Real(2), a + b + 1) * boost::math::tgamma_delta_ratio(n + a + 1, -a) *
           boost::math::tgamma_delta_ratio(n + b + 1, a);
  for (int i = 0; i < n; ++i) {
    Real x = es.eigenvalues()(i);
    Real dp = 1;
    for (int it = 0; it < 20; ++it) {
      auto [pn, pn1] = detail::jacobi_pair(n, a, b, x);
      dp = detail::jacobi_derivative(n, a, b, x, pn, pn1);
      Real dx = pn / dp;
      x -= dx;
      if (abs(dx) <= 4 * std::numeric_limits<Real>::epsilon() * (1 + abs(x))) break;
    }
    auto [pn, pn1] = detail::jacobi_pair(n, a, b, x);
    dp = detail::jacobi_derivative(n, a, b, x, pn, pn1);
    rule.nodes[i] = x;
    rule.weights[i] = c / ((1 - x * x) * dp * dp);
  }
  return rule;
}

// Rules are cached per (n, a, b); the cache is shared and guarded.
template <class Real>
const QuadRule<Real>& gauss_jacobi(int n, Real a, Real b) {
  static std::mutex mu;
  static std::map<std::tuple<int, long double, long double>, QuadRule<Real>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, static_cast<long double>(a), static_cast<long double>(b));
  auto it = cache.find(key);
  if (it == cache.end()) {
    QuadRule<Real> rule;
    if constexpr (std::is_same_v<Real, double>) {
      // built in extended precision; the n^2 error growth of the double build reaches 1e-12 at n = 1024
      auto wide = make_gauss_jacobi<long double>(n, a, b);
      rule.nodes.assign(wide.nodes.begin(), wide.nodes.end());
      rule.weights.assign(wide.weights.begin(), wide.weights.end());
    } else {
      rule = make_gauss_jacobi<Real>(n, a, b);
    }
    it = cache.emplace(key, std::move(rule)).first;
  }
  return it->second;
}

template <class Real>
const QuadRule<Real>& gauss_legendre(int n) {
  return gauss_jacobi<Real>(n, Real(0), Real(0));
}

}  // namespace prym
