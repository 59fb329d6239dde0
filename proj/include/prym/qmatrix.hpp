#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace prym {

using Rat = mpq_class;

// Dense exact rational matrix. Vectors are 1 x n rows; everything acts on the right.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    r_ = static_cast<int>(rows.size());
    c_ = r_ ? static_cast<int>(rows.begin()->size()) : 0;
    for (auto& row : rows) {
      if (static_cast<int>(row.size()) != c_) throw std::invalid_argument("QMatrix: ragged");
      for (long v : row) a_.emplace_back(v);
    }
  }

  static QMatrix identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static QMatrix row(const std::vector<Rat>& v) {
    QMatrix m(1, static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) m.a_[i] = v[i];
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  Rat& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  const Rat& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  // Entry access for row vectors.
  Rat& operator[](int j) { return a_[j]; }
  const Rat& operator[](int j) const { return a_[j]; }

  QMatrix operator*(const QMatrix& o) const {
    if (c_ != o.r_) throw std::invalid_argument("QMatrix: shape mismatch in product");
    QMatrix m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const Rat& x = (*this)(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.c_; ++j) m(i, j) += x * o(k, j);
      }
    return m;
  }
  QMatrix operator+(const QMatrix& o) const {
    check_same(o);
    QMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
    return m;
  }
  QMatrix operator-(const QMatrix& o) const {
    check_same(o);
    QMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
    return m;
  }
  QMatrix operator-() const {
    QMatrix m = *this;
    for (auto& x : m.a_) x = -x;
    return m;
  }
  QMatrix operator*(const Rat& s) const {
    QMatrix m = *this;
    for (auto& x : m.a_) x *= s;
    return m;
  }
  bool operator==(const QMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

  QMatrix transpose() const {
    QMatrix m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  QMatrix block(int i0, int j0, int nr, int nc) const {
    QMatrix m(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
    return m;
  }
  void set_block(int i0, int j0, const QMatrix& b) {
    for (int i = 0; i < b.r_; ++i)
      for (int j = 0; j < b.c_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
  }
  QMatrix row_at(int i) const { return block(i, 0, 1, c_); }
  void set_row(int i, const QMatrix& v) { set_block(i, 0, v); }

  static QMatrix vstack(const std::vector<QMatrix>& parts) {
    int rows = 0;
    for (auto& p : parts) rows += p.r_;
    QMatrix m(rows, parts.empty() ? 0 : parts[0].c_);
    int at = 0;
    for (auto& p : parts) m.set_block(at, 0, p), at += p.r_;
    return m;
  }

  bool is_integral() const {
    for (auto& x : a_)
      if (x.get_den() != 1) return false;
    return true;
  }
  bool is_zero() const {
    for (auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  Rat det() const {
    if (r_ != c_) throw std::invalid_argument("QMatrix: det of non-square");
    QMatrix m = *this;
    Rat d = 1;
    for (int col = 0; col < r_; ++col) {
      int piv = col;
      while (piv < r_ && m(piv, col) == 0) ++piv;
      if (piv == r_) return 0;
      if (piv != col) m.swap_rows(piv, col), d = -d;
      d *= m(col, col);
      for (int i = col + 1; i < r_; ++i) {
        if (m(i, col) == 0) continue;
        Rat f = m(i, col) / m(col, col);
        for (int j = col; j < c_; ++j) m(i, j) -= f * m(col, j);
      }
    }
    return d;
  }

  int rank() const {
    QMatrix m = *this;
    int rank = 0;
    for (int col = 0; col < c_ && rank < r_; ++col) {
      int piv = rank;
      while (piv < r_ && m(piv, col) == 0) ++piv;
      if (piv == r_) continue;
      m.swap_rows(piv, rank);
      for (int i = 0; i < r_; ++i) {
        if (i == rank || m(i, col) == 0) continue;
        Rat f = m(i, col) / m(rank, col);
        for (int j = col; j < c_; ++j) m(i, j) -= f * m(rank, j);
      }
      ++rank;
    }
    return rank;
  }

  QMatrix inverse() const {
    if (r_ != c_) throw std::invalid_argument("QMatrix: inverse of non-square");
    QMatrix m = *this, inv = identity(r_);
    for (int col = 0; col < r_; ++col) {
      int piv = col;
      while (piv < r_ && m(piv, col) == 0) ++piv;
      if (piv == r_) throw std::domain_error("QMatrix: singular");
      m.swap_rows(piv, col), inv.swap_rows(piv, col);
      Rat p = m(col, col);
      for (int j = 0; j < c_; ++j) m(col, j) /= p, inv(col, j) /= p;
      for (int i = 0; i < r_; ++i) {
        if (i == col || m(i, col) == 0) continue;
        Rat f = m(i, col);
        for (int j = 0; j < c_; ++j) m(i, j) -= f * m(col, j), inv(i, j) -= f * inv(col, j);
      }
    }
    return inv;
  }

  // Basis (as rows) of the left kernel {v : v * this = 0}.
  QMatrix left_kernel() const {
    QMatrix t = transpose();
    // row reduce t (c_ x r_), null space of t acting on column vectors
    int n = t.c_;
    std::vector<int> pivcol;
    int rank = 0;
    for (int col = 0; col < n && rank < t.r_; ++col) {
      int piv = rank;
      while (piv < t.r_ && t(piv, col) == 0) ++piv;
      if (piv == t.r_) continue;
      t.swap_rows(piv, rank);
      Rat p = t(rank, col);
      for (int j = 0; j < n; ++j) t(rank, j) /= p;
      for (int i = 0; i < t.r_; ++i) {
        if (i == rank || t(i, col) == 0) continue;
        Rat f = t(i, col);
        for (int j = 0; j < n; ++j) t(i, j) -= f * t(rank, j);
      }
      pivcol.push_back(col);
      ++rank;
    }
    std::vector<QMatrix> out;
    for (int free = 0; free < n; ++free) {
      if (std::find(pivcol.begin(), pivcol.end(), free) != pivcol.end()) continue;
      QMatrix v(1, n);
      v[free] = 1;
      for (int k = 0; k < rank; ++k) v[pivcol[k]] = -t(k, free);
      out.push_back(v);
    }
    if (out.empty()) return QMatrix(0, n);
    return vstack(out);
  }

  std::string str() const {
    std::ostringstream os;
    for (int i = 0; i < r_; ++i) {
      for (int j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
      os << '\n';
    }
    return os.str();
  }

  std::vector<double> to_doubles() const {
    std::vector<double> v;
    for (auto& x : a_) v.push_back(x.get_d());
    return v;
  }

 private:
  void check_same(const QMatrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("QMatrix: shape mismatch");
  }
  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }

  int r_ = 0, c_ = 0;
  std::vector<Rat> a_;
};

inline Rat frac_part(const Rat& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rat(f);
}

inline mpz_class floor_of(const Rat& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

inline Rat dot(const QMatrix& a, const QMatrix& b) {
  Rat s = 0;
  for (int j = 0; j < a.cols(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace prym
