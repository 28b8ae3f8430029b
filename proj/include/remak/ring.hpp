#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "zmod.hpp"

namespace remak {

using zmod::i64;
using zmod::Mat;
using zmod::Vec;

// Commutative unital ring, additively (+)_i Z/p^{a_i} b_i with a_i <= e,
// multiplication by structure constants b_x b_y = sum_z lambda_xy^z b_z.
class FiniteCommRing {
 public:
  FiniteCommRing() = default;

  // Unchecked constructor; use ring_from_structure_constants for input data.
  FiniteCommRing(i64 p, std::vector<int> ord_exp, std::vector<i64> lambda, Vec one)
      : p_(p), ord_(std::move(ord_exp)), lam_(std::move(lambda)), one_(std::move(one)) {
    e_ = 0;
    for (int a : ord_) e_ = std::max(e_, a);
    for (int a : ord_) mod_.push_back(zmod::ipow(p_, a));
    for (std::size_t x = 0; x < n(); ++x)
      for (std::size_t y = 0; y < n(); ++y)
        for (std::size_t z = 0; z < n(); ++z) lam_[idx(x, y, z)] = zmod::md(lam_[idx(x, y, z)], mod_[z]);
    one_ = reduce(one_);
  }

  i64 p() const { return p_; }
  int e() const { return e_; }
  std::size_t n() const { return ord_.size(); }
  const std::vector<int>& order_exponents() const { return ord_; }
  i64 lambda(std::size_t x, std::size_t y, std::size_t z) const { return lam_[idx(x, y, z)]; }

  Vec zero() const { return Vec(n(), 0); }
  const Vec& one() const { return one_; }
  Vec basis(std::size_t i) const {
    Vec v = zero();
    v[i] = 1;
    return reduce(v);
  }

  Vec reduce(Vec a) const {
    for (std::size_t i = 0; i < n(); ++i) a[i] = zmod::md(a[i], mod_[i]);
    return a;
  }
  Vec add(const Vec& a, const Vec& b) const {
    Vec c(n());
    for (std::size_t i = 0; i < n(); ++i) c[i] = zmod::md(a[i] + b[i], mod_[i]);
    return c;
  }
  Vec sub(const Vec& a, const Vec& b) const {
    Vec c(n());
    for (std::size_t i = 0; i < n(); ++i) c[i] = zmod::md(a[i] - b[i], mod_[i]);
    return c;
  }
  Vec scale(i64 k, const Vec& a) const {
    Vec c(n());
    for (std::size_t i = 0; i < n(); ++i) c[i] = zmod::mulmod(k, a[i], mod_[i]);
    return c;
  }
  Vec mul(const Vec& a, const Vec& b) const {
    Vec c(n(), 0);
    for (std::size_t x = 0; x < n(); ++x) {
      if (a[x] == 0) continue;
      for (std::size_t y = 0; y < n(); ++y) {
        if (b[y] == 0) continue;
        for (std::size_t z = 0; z < n(); ++z) {
          i64 l = lam_[idx(x, y, z)];
          if (l == 0) continue;
          c[z] = zmod::md(c[z] + zmod::mulmod(zmod::mulmod(a[x], b[y], mod_[z]), l, mod_[z]), mod_[z]);
        }
      }
    }
    return c;
  }
  Vec pow(Vec a, std::uint64_t k) const {
    Vec r = one_;
    while (k) {
      if (k & 1) r = mul(r, a);
      k >>= 1;
      if (k) a = mul(a, a);
    }
    return r;
  }
  bool is_zero(const Vec& a) const { return zmod::is_zero(reduce(a)); }
  bool equal(const Vec& a, const Vec& b) const { return reduce(a) == reduce(b); }
  bool is_idempotent(const Vec& a) const { return equal(mul(a, a), a); }

  // composition length bound: every nilpotent x has x^(length) = 0
  int length() const {
    int s = 0;
    for (int a : ord_) s += a;
    return s;
  }

  // reduction mod p as an F_p-algebra on the same basis
  FiniteCommRing mod_p() const { return FiniteCommRing(p_, std::vector<int>(n(), 1), lam_, one_); }

 private:
  i64 p_ = 2;
  int e_ = 1;
  std::vector<int> ord_;
  std::vector<i64> mod_;
  std::vector<i64> lam_;
  Vec one_;

  std::size_t idx(std::size_t x, std::size_t y, std::size_t z) const { return (x * n() + y) * n() + z; }
};

// Validated construction. constants[x][y][z] = lambda_xy^z; ord_exp defaults
// to e for every basis element.
inline FiniteCommRing ring_from_structure_constants(i64 p, int e, std::size_t n, const std::vector<Mat>& constants,
                                                   const Vec& one, std::vector<int> ord_exp = {}) {
  if (p < 2) throw invalid_input("ring: characteristic prime must be at least 2");
  for (i64 d = 2; d * d <= p; ++d)
    if (p % d == 0) throw invalid_input("ring: p must be prime");
  if (e < 1) throw invalid_input("ring: exponent must be positive");
  if (ord_exp.empty()) ord_exp.assign(n, e);
  if (ord_exp.size() != n || one.size() != n) throw invalid_input("ring: shape mismatch");
  for (int a : ord_exp)
    if (a < 1 || a > e) throw invalid_input("ring: basis orders must divide p^e");
  if (constants.size() != n) throw invalid_input("ring: constants must be n x n x n");
  std::vector<i64> lam(n * n * n);
  for (std::size_t x = 0; x < n; ++x) {
    if (constants[x].size() != n) throw invalid_input("ring: constants must be n x n x n");
    for (std::size_t y = 0; y < n; ++y) {
      if (constants[x][y].size() != n) throw invalid_input("ring: constants must be n x n x n");
      for (std::size_t z = 0; z < n; ++z) lam[(x * n + y) * n + z] = constants[x][y][z];
    }
  }
  auto triple = [](std::size_t x, std::size_t y, std::size_t z) {
    return "(" + std::to_string(x + 1) + "," + std::to_string(y + 1) + "," + std::to_string(z + 1) + ")";
  };
  // additive orders must be respected: p^{a_x} b_x b_y = 0
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        int lo = std::min(ord_exp[x], ord_exp[y]);
        if (lo < ord_exp[z] && zmod::val(lam[(x * n + y) * n + z], p, ord_exp[z]) < ord_exp[z] - lo)
          throw invalid_input("ring: constants ignore additive orders at " + triple(x, y, z));
      }
  FiniteCommRing R(p, ord_exp, lam, one);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (!R.equal(R.mul(R.basis(x), R.basis(y)), R.mul(R.basis(y), R.basis(x))))
        throw invalid_input("ring: not commutative at basis pair (" + std::to_string(x + 1) + "," + std::to_string(y + 1) + ")");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        auto l = R.mul(R.mul(R.basis(x), R.basis(y)), R.basis(z));
        auto r = R.mul(R.basis(x), R.mul(R.basis(y), R.basis(z)));
        if (!R.equal(l, r)) throw invalid_input("ring: not associative at basis triple " + triple(x, y, z));
      }
  for (std::size_t x = 0; x < n; ++x)
    if (!R.equal(R.mul(R.one(), R.basis(x)), R.basis(x)))
      throw invalid_input("ring: the given one is not an identity (fails on basis element " + std::to_string(x + 1) + ")");
  return R;
}

// Smallest k with x^k = 0, or 0 when x is not nilpotent.
inline int nilpotency_index(const FiniteCommRing& R, const Vec& x) {
  Vec a = R.reduce(x);
  Vec pw = a;
  for (int k = 1; k <= R.length() + 1; ++k) {
    if (R.is_zero(pw)) return k;
    pw = R.mul(pw, a);
  }
  return 0;
}

// e^ = sum_{i<m} C(2m-1,i) e^{2m-1-i} (1-e)^i where (e^2-e)^m = 0.
inline Vec lift_idempotent(const FiniteCommRing& R, const Vec& e) {
  Vec a = R.sub(R.mul(e, e), e);
  int m = nilpotency_index(R, a);
  if (m == 0) throw precondition_error("lift_idempotent: e^2 - e is not nilpotent");
  const int N = 2 * m - 1;
  const i64 q = zmod::ipow(R.p(), R.e());
  Vec row{1};  // binomials of N mod p^e, via Pascal's rule
  for (int k = 1; k <= N; ++k) {
    Vec next(k + 1, 1);
    for (int i = 1; i < k; ++i) next[i] = zmod::md(row[i - 1] + row[i], q);
    row.swap(next);
  }
  Vec f = R.sub(R.one(), e);
  Vec out = R.zero();
  for (int i = 0; i < m; ++i) {
    Vec t = R.mul(R.pow(e, static_cast<std::uint64_t>(N - i)), R.pow(f, static_cast<std::uint64_t>(i)));
    out = R.add(out, R.scale(row[i], t));
  }
  return out;
}

namespace detail {

// matrix of x -> x^p on an F_p-algebra
inline Mat frobenius_matrix(const FiniteCommRing& Rb) {
  Mat F;
  for (std::size_t i = 0; i < Rb.n(); ++i) F.push_back(Rb.pow(Rb.basis(i), static_cast<std::uint64_t>(Rb.p())));
  return F;
}

}  // namespace detail

// The unique frame of a commutative ring: primitive idempotents of the
// semisimple quotient found through the Frobenius-fixed subalgebra, then
// lifted one by one inside the complement of those already lifted.
inline std::vector<Vec> frame(const FiniteCommRing& R) {
  const i64 p = R.p();
  const std::size_t n = R.n();
  if (n == 0 || R.is_zero(R.one())) return {};
  FiniteCommRing Rb = R.mod_p();
  std::vector<int> ones(n, 1);
  // nilradical of R/pR = kernel of a high Frobenius power
  Mat F = detail::frobenius_matrix(Rb);
  Mat Fk = F;
  for (std::size_t i = 1; i < n; ++i) Fk = zmod::mul(Fk, F, p, ones);
  std::vector<std::size_t> jpiv;
  Mat J = zmod::rref_fp(zmod::left_kernel_fp(Fk, p), p, &jpiv);
  auto reduce_j = [&](Vec v) {
    v = Rb.reduce(v);
    for (std::size_t r = 0; r < J.size(); ++r) {
      i64 f = v[jpiv[r]];
      if (!f) continue;
      for (std::size_t c = 0; c < n; ++c) v[c] = zmod::md(v[c] - f * J[r][c], p);
    }
    return v;
  };
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (std::find(jpiv.begin(), jpiv.end(), c) == jpiv.end()) free_cols.push_back(c);
  // Frobenius minus identity on S = (R/pR)/J, in free coordinates
  Mat G;
  for (std::size_t c : free_cols) {
    Vec v = reduce_j(Rb.pow(Rb.basis(c), static_cast<std::uint64_t>(p)));
    Vec row;
    for (std::size_t d : free_cols) row.push_back(zmod::md(v[d] - (d == c ? 1 : 0), p));
    G.push_back(row);
  }
  Mat B = zmod::left_kernel_fp(G, p);
  auto embed = [&](const Vec& s) {
    Vec v(n, 0);
    for (std::size_t i = 0; i < free_cols.size(); ++i) v[free_cols[i]] = s[i];
    return v;
  };
  auto smul = [&](const Vec& a, const Vec& b) { return reduce_j(Rb.mul(a, b)); };
  std::vector<Vec> eps{reduce_j(Rb.one())};
  for (const auto& ys : B) {
    Vec y = embed(ys);
    std::vector<Vec> next;
    for (const auto& e : eps) {
      Vec ey = smul(e, y);
      for (i64 l = 0; l < p; ++l) {
        Vec t = reduce_j(Rb.sub(ey, Rb.scale(l, e)));
        Vec pw = e;
        for (i64 k = 0; k < p - 1; ++k) pw = smul(pw, t);
        Vec d = reduce_j(Rb.sub(e, pw));
        if (!zmod::is_zero(d)) next.push_back(d);
      }
    }
    eps.swap(next);
  }
  std::sort(eps.begin(), eps.end());
  std::vector<Vec> out;
  Vec rest = R.one();
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (i + 1 == eps.size()) {
      out.push_back(rest);
      break;
    }
    Vec e = lift_idempotent(R, R.mul(rest, R.reduce(eps[i])));
    out.push_back(e);
    rest = R.sub(rest, e);
  }
  std::sort(out.begin(), out.end(), std::greater<>());  // leading coordinates first
  return out;
}

// F_p[t]/(m(t)) for a monic m given by coefficients m_0..m_d (m_d = 1)
inline FiniteCommRing polynomial_quotient(i64 p, const Vec& m) {
  const std::size_t d = m.size() - 1;
  std::vector<i64> lam(d * d * d, 0);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      Vec prod(2 * d, 0);
      prod[x + y] = 1;
      for (std::size_t k = 2 * d - 1; k >= d; --k) {
        i64 c = zmod::md(prod[k], p);
        if (c) {
          for (std::size_t j = 0; j <= d; ++j) prod[k - d + j] = zmod::md(prod[k - d + j] - c * m[j], p);
        }
        if (k == d) break;
      }
      for (std::size_t z = 0; z < d; ++z) lam[(x * d + y) * d + z] = zmod::md(prod[z], p);
    }
  Vec one(d, 0);
  if (d) one[0] = 1;
  return FiniteCommRing(p, std::vector<int>(d, 1), lam, one);
}

}  // namespace remak
