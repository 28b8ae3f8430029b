#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "errors.hpp"

// Exact linear algebra over Z/p^E, with per-coordinate moduli p^{a_i} handled
// by scaling into the largest one.
namespace remak::zmod {

using i64 = std::int64_t;
using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

inline i64 md(i64 a, i64 m) {
  a %= m;
  return a < 0 ? a + m : a;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<__int128>(md(a, m)) * md(b, m) % m);
}

inline i64 ipow(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > INT64_MAX / b) throw resource_bound("prime power overflows 64 bits");
    r *= b;
  }
  return r;
}

// p-adic valuation of a mod p^E, capped at E
inline int val(i64 a, i64 p, int E) {
  i64 q = ipow(p, E);
  a = md(a, q);
  if (a == 0) return E;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

inline i64 inv_mod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, r = md(a, m);
  while (r) {
    i64 q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw precondition_error("not a unit");
  return md(x, m);
}

inline Mat identity(std::size_t n) {
  Mat I(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

// product with column moduli p^{e_k} for the result columns
inline Mat mul(const Mat& X, const Mat& Y, i64 p, const std::vector<int>& col_exp) {
  std::size_t n = X.size(), m = Y.empty() ? 0 : Y[0].size();
  Mat Z(n, Vec(m, 0));
  for (std::size_t k = 0; k < m; ++k) {
    i64 q = ipow(p, col_exp[k]);
    for (std::size_t i = 0; i < n; ++i) {
      i64 s = 0;
      for (std::size_t j = 0; j < Y.size(); ++j) s = md(s + mulmod(X[i][j], Y[j][k], q), q);
      Z[i][k] = s;
    }
  }
  return Z;
}

inline Vec vec_mul(const Vec& x, const Mat& Y, i64 p, const std::vector<int>& col_exp) {
  return mul(Mat{x}, Y, p, col_exp)[0];
}

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](i64 a) { return a == 0; });
}

inline bool is_zero(const Mat& m) {
  return std::all_of(m.begin(), m.end(), [](const Vec& r) { return is_zero(r); });
}

// Smith form over Z/p^E: U A V = D with D diagonal, D_kk = p^{v_k}.
struct Snf {
  Mat D, U, V, Vinv;
  std::vector<int> v;  // valuations of the pivots, v.size() = rank
};

inline Snf snf(const Mat& A, i64 p, int E, std::size_t cols = 0) {
  const i64 q = ipow(p, E);
  std::size_t m = A.size(), n = m ? A[0].size() : cols;
  Snf s;
  s.D = A;
  for (auto& r : s.D)
    for (auto& x : r) x = md(x, q);
  s.U = identity(m);
  s.V = identity(n);
  s.Vinv = identity(n);
  auto& D = s.D;
  for (std::size_t k = 0; k < std::min(m, n); ++k) {
    int best = E;
    std::size_t br = 0, bc = 0;
    for (std::size_t r = k; r < m && best > 0; ++r)
      for (std::size_t c = k; c < n; ++c) {
        if (D[r][c] == 0) continue;
        int w = val(D[r][c], p, E);
        if (w < best) {
          best = w, br = r, bc = c;
          if (w == 0) break;
        }
      }
    if (best == E) break;
    std::swap(D[k], D[br]);
    std::swap(s.U[k], s.U[br]);
    for (auto& r : D) std::swap(r[k], r[bc]);
    for (auto& r : s.V) std::swap(r[k], r[bc]);
    std::swap(s.Vinv[k], s.Vinv[bc]);
    const i64 pv = ipow(p, best);
    i64 u = inv_mod(D[k][k] / pv, q);
    for (auto& x : D[k]) x = mulmod(x, u, q);
    for (auto& x : s.U[k]) x = mulmod(x, u, q);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == k || D[r][k] == 0) continue;
      i64 f = D[r][k] / pv;
      for (std::size_t c = 0; c < n; ++c) D[r][c] = md(D[r][c] - mulmod(f, D[k][c], q), q);
      for (std::size_t c = 0; c < m; ++c) s.U[r][c] = md(s.U[r][c] - mulmod(f, s.U[k][c], q), q);
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (c == k || D[k][c] == 0) continue;
      i64 f = D[k][c] / pv;
      D[k][c] = 0;
      for (std::size_t r = 0; r < n; ++r) s.V[r][c] = md(s.V[r][c] - mulmod(f, s.V[r][k], q), q);
      for (std::size_t r = 0; r < n; ++r) s.Vinv[k][r] = md(s.Vinv[k][r] + mulmod(f, s.Vinv[c][r], q), q);
    }
    s.v.push_back(best);
  }
  return s;
}

// Echelon rows spanning the same submodule of (Z/p^E)^n.
inline Mat span_rows(Mat rows, i64 p, int E) {
  const i64 q = ipow(p, E);
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  std::size_t k = 0;
  for (; k < rows.size(); ++k) {
    int best = E;
    std::size_t br = k, bc = 0;
    for (std::size_t r = k; r < rows.size() && best > 0; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        if (rows[r][c] == 0) continue;
        int w = val(rows[r][c], p, E);
        if (w < best) {
          best = w, br = r, bc = c;
          if (w == 0) break;
        }
      }
    if (best == E) break;
    std::swap(rows[k], rows[br]);
    const i64 pv = ipow(p, best);
    i64 u = inv_mod(rows[k][bc] / pv, q);
    for (auto& x : rows[k]) x = mulmod(x, u, q);
    for (std::size_t r = k + 1; r < rows.size(); ++r) {
      if (rows[r][bc] == 0) continue;
      i64 f = rows[r][bc] / pv;
      for (std::size_t c = 0; c < n; ++c) rows[r][c] = md(rows[r][c] - mulmod(f, rows[k][c], q), q);
    }
  }
  rows.resize(k);
  return rows;
}

struct Solution {
  bool feasible = false;
  Vec particular;
  Mat homogeneous;  // generators of the solution group of the homogeneous system
};

// Unknowns x_i in Z/p^{a_i}; equations sum_i x_i C[i][j] = r_j (mod p^{b_j}).
// Requires p^{a_i} C[i][j] = 0 mod p^{b_j} so that the system is well defined.
inline Solution solve(i64 p, const std::vector<int>& a, const std::vector<int>& b, const Mat& C, const Vec& r) {
  const std::size_t n = a.size();
  std::size_t m = b.size();
  int E = 1;
  for (int x : a) E = std::max(E, x);
  for (int x : b) E = std::max(E, x);
  const i64 q = ipow(p, E);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (a[i] < b[j] && val(C[i][j], p, b[j]) < b[j] - a[i])
        throw precondition_error("linear system is not well defined on the given moduli");
  // A y = rhs over Z/p^E, rows = equations scaled by p^{E-b_j}
  Mat A(m, Vec(n, 0));
  Vec rhs(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    i64 s = ipow(p, E - b[j]);
    for (std::size_t i = 0; i < n; ++i) A[j][i] = mulmod(C[i][j], s, q);
    rhs[j] = mulmod(r.empty() ? 0 : r[j], s, q);
  }
  if (m > n + 1) {
    // only the span of the augmented rows matters
    Mat aug;
    for (std::size_t j = 0; j < m; ++j) {
      Vec row = A[j];
      row.push_back(rhs[j]);
      aug.push_back(std::move(row));
    }
    aug = span_rows(std::move(aug), p, E);
    A.clear();
    rhs.clear();
    for (auto& row : aug) {
      rhs.push_back(row.back());
      row.pop_back();
      A.push_back(std::move(row));
    }
    m = A.size();
  }
  Snf f = snf(A, p, E, n);
  Vec c(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) c[i] = md(c[i] + mulmod(f.U[i][j], rhs[j], q), q);
  Solution sol;
  std::size_t rank = f.v.size();
  Vec z(n, 0);
  for (std::size_t k = 0; k < m; ++k) {
    if (k < rank) {
      if (c[k] != 0 && val(c[k], p, E) < f.v[k]) return sol;
      z[k] = c[k] / ipow(p, f.v[k]);
    } else if (c[k] != 0) {
      return sol;
    }
  }
  auto apply_v = [&](const Vec& w) {
    Vec y(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      i64 s = 0;
      for (std::size_t k = 0; k < n; ++k) s = md(s + mulmod(f.V[i][k], w[k], q), q);
      y[i] = md(s, ipow(p, a[i]));
    }
    return y;
  };
  sol.feasible = true;
  sol.particular = apply_v(z);
  for (std::size_t k = 0; k < n; ++k) {
    Vec w(n, 0);
    if (k < rank) {
      if (f.v[k] == 0) continue;
      w[k] = ipow(p, E - f.v[k]);
    } else {
      w[k] = 1;
    }
    Vec y = apply_v(w);
    if (!is_zero(y)) sol.homogeneous.push_back(std::move(y));
  }
  return sol;
}

// Independent generators of the subgroup of (+)_j Z/p^{c_j} spanned by given
// vectors, via full-pivot elimination on the scaled copy in (Z/p^E)^n.
class LocalBasis {
 public:
  LocalBasis() = default;
  LocalBasis(i64 p, std::vector<int> col_exp, const Mat& vectors) : p_(p), col_(std::move(col_exp)) {
    E_ = 1;
    for (int c : col_) E_ = std::max(E_, c);
    q_ = ipow(p_, E_);
    Mat rows;
    for (const auto& v : vectors) {
      Vec s = scale(v);
      if (!is_zero(s)) rows.push_back(std::move(s));
    }
    const std::size_t n = col_.size();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      int best = E_;
      std::size_t br = k, bc = 0;
      for (std::size_t r = k; r < rows.size() && best > 0; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          if (rows[r][c] == 0) continue;
          int w = val(rows[r][c], p_, E_);
          if (w < best) {
            best = w, br = r, bc = c;
            if (w == 0) break;
          }
        }
      if (best == E_) {
        rows.resize(k);
        break;
      }
      std::swap(rows[k], rows[br]);
      const i64 pv = ipow(p_, best);
      i64 u = inv_mod(rows[k][bc] / pv, q_);
      for (auto& x : rows[k]) x = mulmod(x, u, q_);
      for (std::size_t r = k + 1; r < rows.size(); ++r) {
        if (rows[r][bc] == 0) continue;
        i64 f = rows[r][bc] / pv;
        for (std::size_t c = 0; c < n; ++c) rows[r][c] = md(rows[r][c] - mulmod(f, rows[k][c], q_), q_);
      }
      piv_.push_back(bc);
      pval_.push_back(best);
    }
    rows.resize(piv_.size());
    scaled_ = std::move(rows);
  }

  std::size_t size() const { return scaled_.size(); }
  int exponent(std::size_t i) const { return E_ - pval_[i]; }  // order p^exponent
  std::vector<int> exponents() const {
    std::vector<int> e;
    for (std::size_t i = 0; i < size(); ++i) e.push_back(exponent(i));
    return e;
  }
  int log_order() const {
    int s = 0;
    for (std::size_t i = 0; i < size(); ++i) s += exponent(i);
    return s;
  }

  Vec vector(std::size_t i) const { return unscale(scaled_[i]); }
  Mat vectors() const {
    Mat m;
    for (std::size_t i = 0; i < size(); ++i) m.push_back(vector(i));
    return m;
  }

  // coordinates c_i mod p^{exponent(i)}, or nullopt outside the span
  std::optional<Vec> coords(const Vec& v) const {
    Vec t = scale(v);
    Vec c(size(), 0);
    for (std::size_t i = 0; i < size(); ++i) {
      i64 x = t[piv_[i]];
      if (x == 0) continue;
      if (val(x, p_, E_) < pval_[i]) return std::nullopt;
      c[i] = x / ipow(p_, pval_[i]);
      for (std::size_t j = 0; j < t.size(); ++j) t[j] = md(t[j] - mulmod(c[i], scaled_[i][j], q_), q_);
      c[i] = md(c[i], ipow(p_, exponent(i)));
    }
    if (!is_zero(t)) return std::nullopt;
    return c;
  }

 private:
  i64 p_ = 2, q_ = 2;
  int E_ = 1;
  std::vector<int> col_;
  Mat scaled_;
  std::vector<std::size_t> piv_;
  std::vector<int> pval_;

  Vec scale(const Vec& v) const {
    Vec s(col_.size());
    for (std::size_t j = 0; j < col_.size(); ++j)
      s[j] = mulmod(md(v[j], ipow(p_, col_[j])), ipow(p_, E_ - col_[j]), q_);
    return s;
  }
  Vec unscale(const Vec& s) const {
    Vec v(col_.size());
    for (std::size_t j = 0; j < col_.size(); ++j) v[j] = s[j] / ipow(p_, E_ - col_[j]);
    return v;
  }
};

// F_p helpers on square matrices
inline Mat mod_p(const Mat& X, i64 p) {
  Mat Y = X;
  for (auto& r : Y)
    for (auto& x : r) x = md(x, p);
  return Y;
}

inline std::size_t rank_fp(Mat A, i64 p) {
  std::size_t rank = 0, n = A.empty() ? 0 : A[0].size();
  for (std::size_t c = 0; c < n && rank < A.size(); ++c) {
    std::size_t r = rank;
    while (r < A.size() && md(A[r][c], p) == 0) ++r;
    if (r == A.size()) continue;
    std::swap(A[r], A[rank]);
    i64 u = inv_mod(A[rank][c], p);
    for (auto& x : A[rank]) x = mulmod(x, u, p);
    for (std::size_t k = 0; k < A.size(); ++k) {
      if (k == rank || md(A[k][c], p) == 0) continue;
      i64 f = md(A[k][c], p);
      for (std::size_t j = 0; j < n; ++j) A[k][j] = md(A[k][j] - f * A[rank][j], p);
    }
    ++rank;
  }
  return rank;
}

inline bool invertible_fp(const Mat& X, i64 p) { return rank_fp(X, p) == X.size(); }

inline bool nilpotent_fp(const Mat& X, i64 p) {
  std::vector<int> ones(X.size(), 1);
  Mat P = mod_p(X, p);
  for (std::size_t i = 0; i < X.size() && !is_zero(P); ++i) P = mul(P, X, p, ones);
  return is_zero(P);
}

}  // namespace remak::zmod

namespace remak::zmod {

// reduced row echelon form over F_p; zero rows dropped, pivots returned
inline Mat rref_fp(Mat A, i64 p, std::vector<std::size_t>* pivots = nullptr) {
  std::size_t rank = 0, n = A.empty() ? 0 : A[0].size();
  for (auto& r : A)
    for (auto& x : r) x = md(x, p);
  std::vector<std::size_t> piv;
  for (std::size_t c = 0; c < n && rank < A.size(); ++c) {
    std::size_t r = rank;
    while (r < A.size() && A[r][c] == 0) ++r;
    if (r == A.size()) continue;
    std::swap(A[r], A[rank]);
    i64 u = inv_mod(A[rank][c], p);
    for (auto& x : A[rank]) x = mulmod(x, u, p);
    for (std::size_t k = 0; k < A.size(); ++k) {
      if (k == rank || A[k][c] == 0) continue;
      i64 f = A[k][c];
      for (std::size_t j = 0; j < n; ++j) A[k][j] = md(A[k][j] - f * A[rank][j], p);
    }
    piv.push_back(c);
    ++rank;
  }
  A.resize(rank);
  if (pivots) *pivots = piv;
  return A;
}

// row vectors x over F_p with x M = 0, as an echelon basis
inline Mat left_kernel_fp(const Mat& M, i64 p) {
  std::size_t n = M.size(), m = n ? M[0].size() : 0;
  if (n == 0) return {};
  if (m == 0) return identity(n);
  auto s = solve(p, std::vector<int>(n, 1), std::vector<int>(m, 1), M, {});
  return rref_fp(s.homogeneous, p);
}

}  // namespace remak::zmod
