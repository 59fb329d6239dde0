#pragma once
// The quadratic space V = (even weight vectors of F2^8) / <(1,...,1)> with
// q = half the Hamming weight mod 2, and the action of S8 on it.
//
// Points are 0-based internally and printed 1-based. Permutations act on the
// right: j.(st) = (j.s).t, stored as p[j] = j.p.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace prym {

using Perm = std::array<int, 8>;

inline Perm identity_perm() {
  Perm p;
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// first s, then t
inline Perm compose(const Perm& s, const Perm& t) {
  Perm r;
  for (int j = 0; j < 8; ++j) r[j] = t[s[j]];
  return r;
}

inline Perm operator*(const Perm& s, const Perm& t) { return compose(s, t); }

inline Perm inverse(const Perm& s) {
  Perm r;
  for (int j = 0; j < 8; ++j) r[s[j]] = j;
  return r;
}

inline Perm transposition(int a, int b) {
  Perm p = identity_perm();
  std::swap(p[a], p[b]);
  return p;
}

inline int perm_sign(const Perm& p) {
  int inv = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

inline bool is_valid_perm(const Perm& p) {
  std::array<bool, 8> seen{};
  for (int v : p) {
    if (v < 0 || v > 7 || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// Class of an even-weight vector; bit j is coordinate j.
class F2Class {
 public:
  F2Class() = default;
  explicit F2Class(std::uint8_t bits) {
    if (std::popcount(bits) % 2) throw std::invalid_argument("odd weight vector has no class in V");
    bits_ = (bits & 1u) ? static_cast<std::uint8_t>(~bits) : bits;
  }
  static F2Class from_points(std::initializer_list<int> pts) {
    std::uint8_t b = 0;
    for (int p : pts) b ^= static_cast<std::uint8_t>(1u << p);
    return F2Class(b);
  }
  // coordinates c in the basis v_i = class(e_i + e_{i+1}), i = 0..5
  static F2Class from_coords(std::uint8_t c) {
    std::uint8_t b = 0;
    for (int i = 0; i < 6; ++i)
      if (c >> i & 1u) b ^= static_cast<std::uint8_t>(3u << i);
    return F2Class(b);
  }

  std::uint8_t rep() const { return bits_; }
  std::uint8_t other_rep() const { return static_cast<std::uint8_t>(~bits_); }

  std::uint8_t coords() const {
    // prefix sums give coordinates over e_i+e_{i+1}, i = 0..6; then fold v_6 = v_0+v_2+v_4
    std::uint8_t c = 0;
    int s = 0;
    for (int i = 0; i < 7; ++i) {
      s ^= bits_ >> i & 1;
      if (s) c ^= static_cast<std::uint8_t>(1u << i);
    }
    if (c >> 6 & 1u) c ^= 0b1010101;
    return c & 0x3f;
  }

  F2Class operator+(const F2Class& o) const { return F2Class(static_cast<std::uint8_t>(bits_ ^ o.bits_)); }
  bool operator==(const F2Class& o) const { return bits_ == o.bits_; }
  bool operator<(const F2Class& o) const { return bits_ < o.bits_; }
  bool is_zero() const { return bits_ == 0; }

  F2Class act(const Perm& p) const {
    std::uint8_t b = 0;
    for (int j = 0; j < 8; ++j)
      if (bits_ >> j & 1u) b |= static_cast<std::uint8_t>(1u << p[j]);
    return F2Class(b);
  }

 private:
  std::uint8_t bits_ = 0;
};

inline int quadratic_form(std::uint8_t even_rep) { return (std::popcount(even_rep) / 2) % 2; }
inline int quadratic_form(const F2Class& v) { return quadratic_form(v.rep()); }

// 6x6 matrix over F2, row i = image of basis vector v_i, acting as v -> v M.
struct OrthogonalMap {
  std::array<std::uint8_t, 6> rows{};

  std::uint8_t apply(std::uint8_t c) const {
    std::uint8_t r = 0;
    for (int i = 0; i < 6; ++i)
      if (c >> i & 1u) r ^= rows[i];
    return r;
  }
  OrthogonalMap operator*(const OrthogonalMap& o) const {
    OrthogonalMap m;
    for (int i = 0; i < 6; ++i) m.rows[i] = o.apply(rows[i]);
    return m;
  }
  bool operator==(const OrthogonalMap& o) const { return rows == o.rows; }
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < 6; ++i) k |= static_cast<std::uint64_t>(rows[i]) << (6 * i);
    return k;
  }
  static OrthogonalMap identity() {
    OrthogonalMap m;
    for (int i = 0; i < 6; ++i) m.rows[i] = static_cast<std::uint8_t>(1u << i);
    return m;
  }
  bool preserves_q() const {
    for (std::uint8_t c = 0; c < 64; ++c)
      if (quadratic_form(F2Class::from_coords(c)) != quadratic_form(F2Class::from_coords(apply(c)))) return false;
    return true;
  }
};

inline OrthogonalMap perm_to_orthogonal(const Perm& p) {
  OrthogonalMap m;
  for (int i = 0; i < 6; ++i) m.rows[i] = F2Class::from_coords(static_cast<std::uint8_t>(1u << i)).act(p).coords();
  return m;
}

struct Partition2222 {
  std::array<std::array<int, 2>, 4> pairs{};

  static Partition2222 make(std::array<std::array<int, 2>, 4> p) {
    for (auto& q : p)
      if (q[0] > q[1]) std::swap(q[0], q[1]);
    std::sort(p.begin(), p.end());
    Partition2222 r;
    r.pairs = p;
    int seen = 0;
    for (auto& q : p)
      for (int v : q) {
        if (v < 0 || v > 7 || (seen >> v & 1)) throw std::invalid_argument("not a (2,2,2,2)-partition");
        seen |= 1 << v;
      }
    return r;
  }
  static Partition2222 identity() { return make({{{0, 1}, {2, 3}, {4, 5}, {6, 7}}}); }

  Partition2222 act(const Perm& s) const {
    auto p = pairs;
    for (auto& q : p) q = {s[q[0]], s[q[1]]};
    return make(p);
  }
  bool operator==(const Partition2222& o) const { return pairs == o.pairs; }
  bool operator<(const Partition2222& o) const { return pairs < o.pairs; }

  std::string str() const {
    std::string s;
    for (int k = 0; k < 4; ++k) {
      if (k) s += '.';
      s += std::to_string(pairs[k][0] + 1) + std::to_string(pairs[k][1] + 1);
    }
    return s;
  }
  static Partition2222 parse(const std::string& s) {
    std::array<std::array<int, 2>, 4> p{};
    if (s.size() != 11) throw std::invalid_argument("bad partition string: " + s);
    for (int k = 0; k < 4; ++k) p[k] = {s[3 * k] - '1', s[3 * k + 1] - '1'};
    return make(p);
  }

  // sign of the permutation (a1 b1 a2 b2 ...) with sorted pairs
  int pairing_sign() const {
    Perm p;
    for (int k = 0; k < 4; ++k) { p[2 * k] = pairs[k][0]; p[2 * k + 1] = pairs[k][1]; }
    return perm_sign(p);
  }
};

struct Partition44 {
  std::uint8_t half = 0;  // 4-set containing point 0

  static Partition44 make(std::uint8_t h) {
    if (std::popcount(h) != 4) throw std::invalid_argument("not a (4,4)-partition");
    Partition44 r;
    r.half = (h & 1u) ? h : static_cast<std::uint8_t>(~h);
    return r;
  }
  bool operator==(const Partition44& o) const { return half == o.half; }
  bool operator<(const Partition44& o) const { return half < o.half; }
  std::string str() const {
    std::string a, b;
    for (int j = 0; j < 8; ++j) (half >> j & 1u ? a : b) += std::to_string(j + 1);
    return a + "|" + b;
  }
  F2Class to_class() const { return F2Class(half); }
};

inline std::vector<Partition2222> enumerate_partitions2222() {
  std::vector<Partition2222> out;
  // first pair always contains the smallest free point
  std::array<std::array<int, 2>, 4> cur{};
  auto rec = [&](auto&& self, int k, int used) -> void {
    if (k == 4) { out.push_back(Partition2222::make(cur)); return; }
    int a = 0;
    while (used >> a & 1) ++a;
    for (int b = a + 1; b < 8; ++b) {
      if (used >> b & 1) continue;
      cur[k] = {a, b};
      self(self, k + 1, used | 1 << a | 1 << b);
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Partition44> enumerate_partitions44() {
  std::vector<Partition44> out;
  for (int h = 0; h < 256; ++h)
    if ((h & 1) && std::popcount(static_cast<unsigned>(h)) == 4) out.push_back(Partition44::make(static_cast<std::uint8_t>(h)));
  std::sort(out.begin(), out.end());
  return out;
}

// Basis of V_I; the fourth generator is the sum of the other three.
inline std::vector<F2Class> partition_subspace(const Partition2222& I) {
  std::vector<F2Class> b;
  for (int k = 0; k < 3; ++k) b.push_back(F2Class::from_points({I.pairs[k][0], I.pairs[k][1]}));
  return b;
}

inline std::set<F2Class> span(const std::vector<F2Class>& gens) {
  std::set<F2Class> s{F2Class()};
  for (auto& g : gens) {
    std::set<F2Class> t = s;
    for (auto& x : s) t.insert(x + g);
    s = std::move(t);
  }
  return s;
}

inline Partition2222 identity_partition() { return Partition2222::identity(); }

// All 40320 permutations in lexicographic order.
inline std::vector<Perm> all_perms() {
  std::vector<Perm> out;
  out.reserve(40320);
  Perm p = identity_perm();
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Inverse of perm_to_orthogonal, by table lookup over S8.
inline Perm orthogonal_to_perm(const OrthogonalMap& m) {
  static const std::unordered_map<std::uint64_t, Perm> table = [] {
    std::unordered_map<std::uint64_t, Perm> t;
    for (auto& p : all_perms()) t.emplace(perm_to_orthogonal(p).key(), p);
    return t;
  }();
  auto it = table.find(m.key());
  if (it == table.end()) throw std::domain_error("orthogonal_to_perm: map is not in the image of S8");
  return it->second;
}

inline std::string perm_str(const Perm& p) {
  std::string s = "[";
  for (int j = 0; j < 8; ++j) s += (j ? "," : "") + std::to_string(p[j] + 1);
  return s + "]";
}

}  // namespace prym
