#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "operators.hpp"
#include "ring.hpp"
#include "zmod.hpp"

namespace remak {

inline int log_p(std::uint64_t n, std::uint64_t p) {
  int k = 0;
  while (n > 1) {
    if (n % p) throw precondition_error("not a prime power");
    n /= p;
    ++k;
  }
  return k;
}

// Independent prime-power generators of an abelian permutation group.
class AbelianPresentation {
 public:
  AbelianPresentation() = default;
  AbelianPresentation(std::size_t degree, std::vector<Perm> basis, std::vector<std::uint64_t> primes, std::vector<int> exps)
      : degree_(degree), basis_(std::move(basis)), primes_(std::move(primes)), exps_(std::move(exps)) {
    group_ = PermGroup(degree_, basis_);
    std::vector<Vec> unit;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      Vec v(basis_.size(), 0);
      v[i] = 1;
      unit.push_back(v);
    }
    mods_.clear();
    for (std::size_t i = 0; i < basis_.size(); ++i) mods_.push_back(zmod::ipow(static_cast<i64>(primes_[i]), exps_[i]));
    auto mods = mods_;
    hom_ = std::make_shared<ChainHom<Vec>>(
        group_, unit, Vec(basis_.size(), 0),
        [mods](const Vec& a, const Vec& b) {
          Vec c(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) c[i] = zmod::md(a[i] + b[i], mods[i]);
          return c;
        },
        [mods](const Vec& a) {
          Vec c(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) c[i] = zmod::md(-a[i], mods[i]);
          return c;
        });
  }

  std::size_t degree() const { return degree_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<Perm>& basis() const { return basis_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  const std::vector<int>& exponents() const { return exps_; }
  std::uint64_t order(std::size_t i) const { return static_cast<std::uint64_t>(mods_[i]); }
  std::vector<std::uint64_t> orders() const {
    std::vector<std::uint64_t> o;
    for (auto m : mods_) o.push_back(static_cast<std::uint64_t>(m));
    return o;
  }
  const PermGroup& group() const { return group_; }

  bool contains(const Perm& g) const { return group_.contains(g); }
  Vec coords(const Perm& g) const { return (*hom_)(g); }

  Perm element(const Vec& c) const {
    Perm r = Perm::identity(degree_);
    for (std::size_t i = 0; i < rank(); ++i)
      if (zmod::md(c[i], mods_[i])) r = r * basis_[i].pow(zmod::md(c[i], mods_[i]));
    return r;
  }

  // basis indices belonging to the prime p
  std::vector<std::size_t> indices(std::uint64_t p) const {
    std::vector<std::size_t> ix;
    for (std::size_t i = 0; i < rank(); ++i)
      if (primes_[i] == p) ix.push_back(i);
    return ix;
  }

  std::vector<std::uint64_t> prime_list() const {
    std::vector<std::uint64_t> ps;
    for (auto p : primes_)
      if (ps.empty() || ps.back() != p) ps.push_back(p);
    return ps;
  }

 private:
  std::size_t degree_ = 0;
  std::vector<Perm> basis_;
  std::vector<std::uint64_t> primes_;
  std::vector<int> exps_;
  std::vector<i64> mods_;
  PermGroup group_;
  std::shared_ptr<ChainHom<Vec>> hom_;
};

namespace detail {

inline Perm combine(const std::vector<Perm>& gens, const Vec& c, std::size_t degree) {
  Perm r = Perm::identity(degree);
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (c[j]) r = r * gens[j].pow(c[j]);
  return r;
}

// Basis of the p-part, grown one generator at a time through Smith forms of
// the relation matrix.
inline void p_basis(const PermGroup& A, std::uint64_t p, std::vector<Perm>& basis, std::vector<int>& exps) {
  const std::size_t deg = A.degree();
  std::uint64_t n = A.order(), m = n;
  while (m % p == 0) m /= p;
  basis.clear();
  exps.clear();
  for (const auto& g0 : A.gens()) {
    Perm x = g0.pow(static_cast<long long>(m % g0.order()));
    if (x.is_identity()) continue;
    AbelianPresentation cur(deg, basis, std::vector<std::uint64_t>(basis.size(), p), exps);
    int t = 0;
    Perm y = x;
    while (!cur.contains(y)) {
      y = y.pow(static_cast<long long>(p));
      ++t;
    }
    if (t == 0) continue;
    Vec c = cur.coords(y);
    int E = t + log_p(y.order(), p);
    for (int e : exps) E = std::max(E, e);
    const i64 q = zmod::ipow(static_cast<i64>(p), E);
    const std::size_t s = basis.size();
    Mat R;
    for (std::size_t j = 0; j < s; ++j) {
      Vec row(s + 1, 0);
      row[j] = zmod::md(zmod::ipow(static_cast<i64>(p), exps[j]), q);
      R.push_back(row);
    }
    Vec last(s + 1, 0);
    for (std::size_t j = 0; j < s; ++j) last[j] = zmod::md(-c[j], q);
    last[s] = zmod::ipow(static_cast<i64>(p), t);
    R.push_back(last);
    auto f = zmod::snf(R, static_cast<i64>(p), E);
    std::vector<Perm> gens = basis;
    gens.push_back(x);
    std::vector<Perm> nb;
    std::vector<int> ne;
    for (std::size_t i = 0; i <= s; ++i) {
      int v = i < f.v.size() ? f.v[i] : E;
      if (v == 0) continue;
      Perm z = combine(gens, f.Vinv[i], deg);
      int ez = z.is_identity() ? 0 : log_p(z.order(), p);
      if (ez == 0) continue;
      nb.push_back(z);
      ne.push_back(ez);
    }
    basis = nb;
    exps = ne;
  }
  std::vector<std::size_t> ord(basis.size());
  for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
    if (exps[a] != exps[b]) return exps[a] > exps[b];
    return basis[a] < basis[b];
  });
  std::vector<Perm> sb;
  std::vector<int> se;
  for (auto i : ord) sb.push_back(basis[i]), se.push_back(exps[i]);
  basis = sb;
  exps = se;
}

}  // namespace detail

inline AbelianPresentation primary_decomposition(const PermGroup& A) {
  if (!A.is_abelian()) throw precondition_error("primary_decomposition: group is not abelian");
  std::vector<Perm> basis;
  std::vector<std::uint64_t> primes;
  std::vector<int> exps;
  for (auto p : prime_factors(A.order())) {
    std::vector<Perm> b;
    std::vector<int> e;
    detail::p_basis(A, p, b, e);
    for (std::size_t i = 0; i < b.size(); ++i) {
      basis.push_back(b[i]);
      primes.push_back(p);
      exps.push_back(e[i]);
    }
  }
  return AbelianPresentation(A.degree(), basis, primes, exps);
}

// A module (+)_i Z/p^{e_i} with operator matrices (row i = image of basis i).
struct PModule {
  i64 p = 2;
  std::vector<int> e;
  std::vector<Mat> ops;
  std::size_t rank() const { return e.size(); }
};

// Matrices of the operators on the p-part of a presentation.
inline std::vector<Mat> operator_matrices(const AbelianPresentation& A, std::uint64_t p, const std::vector<ElementMap>& maps) {
  auto ix = A.indices(p);
  std::vector<Mat> out;
  for (const auto& f : maps) {
    Mat W;
    for (auto i : ix) {
      Perm y = f(A.basis()[i]);
      if (!A.contains(y)) throw precondition_error("operator does not stabilize the abelian group");
      Vec c = A.coords(y), row;
      for (auto j : ix) row.push_back(c[j]);
      W.push_back(row);
    }
    out.push_back(W);
  }
  return out;
}

inline PModule p_module(const AbelianPresentation& A, std::uint64_t p, const std::vector<ElementMap>& maps) {
  PModule M;
  M.p = static_cast<i64>(p);
  for (auto i : A.indices(p)) M.e.push_back(A.exponents()[i]);
  M.ops = operator_matrices(A, p, maps);
  return M;
}

// Additive basis of End_ops(M) as checkered matrices.
inline std::vector<Mat> endomorphism_ring(const PModule& M) {
  const std::size_t k = M.rank();
  const i64 p = M.p;
  // unknown t_ij with f_ij = p^{s_ij} t_ij, t_ij mod p^{min(e_i,e_j)}
  std::vector<int> a;
  std::vector<int> shift;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      a.push_back(std::min(M.e[i], M.e[j]));
      shift.push_back(std::max(0, M.e[j] - M.e[i]));
    }
  std::vector<int> b;
  Mat C(k * k);
  for (const auto& W : M.ops) {
    for (std::size_t i2 = 0; i2 < k; ++i2)
      for (std::size_t kk = 0; kk < k; ++kk) {
        // (X W - W X)_{i2,kk} mod p^{e_kk}
        const i64 q = zmod::ipow(p, M.e[kk]);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            i64 s = zmod::ipow(p, shift[i * k + j]);
            i64 coef = 0;
            if (i == i2) coef += zmod::mulmod(s, W[j][kk], q);
            if (j == kk) coef -= zmod::mulmod(W[i2][i], s, q);
            C[i * k + j].push_back(zmod::md(coef, q));
          }
        b.push_back(M.e[kk]);
      }
  }
  std::vector<Vec> sols;
  if (b.empty()) {
    for (std::size_t u = 0; u < k * k; ++u) {
      Vec v(k * k, 0);
      v[u] = 1;
      sols.push_back(v);
    }
  } else {
    sols = zmod::solve(p, a, b, C, {}).homogeneous;
  }
  // as matrices, then an independent basis over the entry moduli
  std::vector<int> entry_exp;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) entry_exp.push_back(M.e[j]);
  Mat flat;
  for (const auto& t : sols) {
    Vec f(k * k);
    for (std::size_t u = 0; u < k * k; ++u) f[u] = zmod::mulmod(t[u], zmod::ipow(p, shift[u]), zmod::ipow(p, entry_exp[u]));
    flat.push_back(f);
  }
  zmod::LocalBasis lb(p, entry_exp, flat);
  std::vector<Mat> out;
  for (const auto& f : lb.vectors()) {
    Mat X(k, Vec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) X[i][j] = f[i * k + j];
    out.push_back(X);
  }
  return out;
}

// Minimal nonzero invariant subspace of F_p^d under the given matrices.
inline Mat irreducible_submodule(i64 p, std::size_t d, const std::vector<Mat>& ops, std::uint64_t bound = 1u << 20) {
  if (d == 0) throw precondition_error("irreducible_submodule: trivial module");
  std::vector<int> ones(d, 1);
  auto spin = [&](const Vec& v) {
    Mat rows{v};
    Mat basis = zmod::rref_fp(rows, p);
    std::vector<Vec> queue{v};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& W : ops) {
        Vec w = zmod::vec_mul(queue[i], W, p, ones);
        Mat t = basis;
        t.push_back(w);
        Mat r = zmod::rref_fp(t, p);
        if (r.size() > basis.size()) {
          basis = r;
          queue.push_back(w);
        }
      }
    return basis;
  };
  // canonical vector order: by the integer sum_i v_i p^i
  auto key = [&](const Vec& v) {
    std::vector<i64> k(v.rbegin(), v.rend());
    return k;
  };
  Vec first(d, 0);
  first[0] = 1;
  Mat U = spin(first);
  for (;;) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < U.size(); ++i) {
      if (count > bound / static_cast<std::uint64_t>(p)) throw resource_bound("irreducible_submodule: subspace too large to scan");
      count *= static_cast<std::uint64_t>(p);
    }
    std::vector<Vec> vecs;
    for (std::uint64_t c = 1; c < count; ++c) {
      Vec v(d, 0);
      std::uint64_t x = c;
      for (std::size_t i = 0; i < U.size(); ++i, x /= static_cast<std::uint64_t>(p)) {
        i64 a = static_cast<i64>(x % static_cast<std::uint64_t>(p));
        for (std::size_t j = 0; j < d; ++j) v[j] = zmod::md(v[j] + a * U[i][j], p);
      }
      vecs.push_back(v);
    }
    std::sort(vecs.begin(), vecs.end(), [&](const Vec& a, const Vec& b) { return key(a) < key(b); });
    bool smaller = false;
    for (const auto& v : vecs) {
      Mat S = spin(v);
      if (S.size() < U.size()) {
        U = S;
        smaller = true;
        break;
      }
    }
    if (!smaller) return U;
  }
}

namespace detail {

// Submodule spanned by rows (coordinates in M) as a module of its own.
struct SubModule {
  Mat basis;  // rows in M coordinates
  PModule mod;
};

inline SubModule submodule(const PModule& M, const Mat& rows) {
  zmod::LocalBasis lb(M.p, M.e, rows);
  SubModule s;
  s.basis = lb.vectors();
  s.mod.p = M.p;
  s.mod.e = lb.exponents();
  for (const auto& W : M.ops) {
    Mat R;
    for (const auto& u : s.basis) {
      auto c = lb.coords(zmod::vec_mul(u, W, M.p, M.e));
      if (!c) throw precondition_error("submodule is not invariant");
      R.push_back(*c);
    }
    s.mod.ops.push_back(R);
  }
  return s;
}

inline Mat mat_power(const Mat& X, std::uint64_t k, i64 p, const std::vector<int>& e) {
  Mat R = zmod::identity(X.size()), B = X;
  while (k) {
    if (k & 1) R = zmod::mul(R, B, p, e);
    k >>= 1;
    if (k) B = zmod::mul(B, B, p, e);
  }
  return R;
}

// Fitting split M = ker Y^N (+) im Y^N, both nonzero when Y mod p is neither
// nilpotent nor invertible.
inline std::pair<Mat, Mat> fitting_split(const PModule& M, const Mat& Y) {
  int len = 0;
  for (int x : M.e) len += x;
  Mat Z = mat_power(Y, static_cast<std::uint64_t>(len), M.p, M.e);
  Mat im = zmod::LocalBasis(M.p, M.e, Z).vectors();
  auto sol = zmod::solve(M.p, M.e, M.e, Z, {});
  Mat ker = zmod::LocalBasis(M.p, M.e, sol.homogeneous).vectors();
  return {ker, im};
}

// minimal polynomial over F_p (monic, low degree first)
inline Vec min_poly_fp(const Mat& X, i64 p) {
  const std::size_t k = X.size();
  std::vector<int> ones(k, 1);
  Mat pw = zmod::identity(k);
  std::vector<Vec> flat;
  for (std::size_t d = 0;; ++d) {
    Vec f;
    for (const auto& r : pw)
      for (auto x : r) f.push_back(zmod::md(x, p));
    // solve sum_{i<d} c_i flat_i = -f
    if (d > 0) {
      auto s = zmod::solve(p, std::vector<int>(d, 1), std::vector<int>(f.size(), 1), flat, [&] {
        Vec r;
        for (auto x : f) r.push_back(zmod::md(-x, p));
        return r;
      }());
      if (s.feasible) {
        Vec m = s.particular;
        m.push_back(1);
        return m;
      }
    } else if (zmod::is_zero(f)) {
      return Vec{1};
    }
    flat.push_back(f);
    pw = zmod::mul(pw, X, p, ones);
  }
}

inline Mat poly_eval(const Vec& c, const Mat& X, i64 p, const std::vector<int>& e) {
  const std::size_t k = X.size();
  Mat R(k, Vec(k, 0));
  for (std::size_t i = c.size(); i-- > 0;) {
    R = zmod::mul(R, X, p, e);
    for (std::size_t j = 0; j < k; ++j) R[j][j] = zmod::md(R[j][j] + c[i], zmod::ipow(p, e[j]));
  }
  return R;
}

// An endomorphism whose reduction is neither nilpotent nor invertible, built
// from X directly or from a nontrivial idempotent of F_p[X].
inline std::optional<Mat> splitting_element(const PModule& M, const Mat& X) {
  Mat Xb = zmod::mod_p(X, M.p);
  bool nil = zmod::nilpotent_fp(Xb, M.p), inv = zmod::invertible_fp(Xb, M.p);
  if (!nil && !inv) return X;
  if (nil) return std::nullopt;
  Vec m = min_poly_fp(Xb, M.p);
  if (m.size() <= 2) return std::nullopt;
  auto fr = frame(polynomial_quotient(M.p, m));
  if (fr.size() < 2) return std::nullopt;
  return poly_eval(fr[0], X, M.p, M.e);
}

inline std::optional<Mat> find_split(const PModule& M) {
  auto R = endomorphism_ring(M);
  for (const auto& X : R)
    if (auto y = splitting_element(M, X)) return y;
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < R.size(); ++j) {
      if (i < j) {
        Mat S = R[i];
        for (std::size_t a = 0; a < S.size(); ++a)
          for (std::size_t b = 0; b < S.size(); ++b) S[a][b] = zmod::md(S[a][b] + R[j][a][b], zmod::ipow(M.p, M.e[b]));
        if (auto y = splitting_element(M, S)) return y;
      }
      if (i != j)
        if (auto y = splitting_element(M, zmod::mul(R[i], R[j], M.p, M.e))) return y;
    }
  // exhaustive check of the image of End in End(M/pM)
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (count > (1u << 20) / static_cast<std::uint64_t>(M.p))
      throw resource_bound("endomorphism ring too large to certify locality");
    count *= static_cast<std::uint64_t>(M.p);
  }
  const std::size_t k = M.rank();
  for (std::uint64_t c = 1; c < count; ++c) {
    Mat S(k, Vec(k, 0));
    std::uint64_t x = c;
    for (std::size_t i = 0; i < R.size(); ++i, x /= static_cast<std::uint64_t>(M.p)) {
      i64 a = static_cast<i64>(x % static_cast<std::uint64_t>(M.p));
      if (!a) continue;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t s = 0; s < k; ++s) S[r][s] = zmod::md(S[r][s] + a * R[i][r][s], zmod::ipow(M.p, M.e[s]));
    }
    Mat Sb = zmod::mod_p(S, M.p);
    if (!zmod::nilpotent_fp(Sb, M.p) && !zmod::invertible_fp(Sb, M.p)) return S;
  }
  return std::nullopt;
}

// Remak decomposition of a module; pieces as rows in root coordinates.
inline void module_remak(const PModule& M, const Mat& embed, const std::vector<int>& root_e, std::vector<Mat>& out) {
  if (M.rank() == 0) return;
  auto Y = find_split(M);
  if (!Y) {
    out.push_back(embed);
    return;
  }
  auto [ker, im] = fitting_split(M, *Y);
  for (const auto* part : {&ker, &im}) {
    auto s = submodule(M, *part);
    module_remak(s.mod, zmod::mul(s.basis, embed, M.p, root_e), root_e, out);
  }
}

}  // namespace detail

// Remak decomposition of an abelian group under operators that stabilize it.
inline std::vector<PermGroup> remak_abelian(const PermGroup& A, const std::vector<ElementMap>& maps) {
  auto pres = primary_decomposition(A);
  std::vector<PermGroup> out;
  for (auto p : pres.prime_list()) {
    PModule M = p_module(pres, p, maps);
    std::vector<Mat> pieces;
    detail::module_remak(M, zmod::identity(M.rank()), M.e, pieces);
    auto ix = pres.indices(p);
    for (const auto& rows : pieces) {
      std::vector<Perm> g;
      for (const auto& r : rows) {
        Vec c(pres.rank(), 0);
        for (std::size_t i = 0; i < ix.size(); ++i) c[ix[i]] = r[i];
        g.push_back(pres.element(c));
      }
      out.push_back(PermGroup::reduced(A.degree(), g));
    }
  }
  return out;
}

inline std::vector<PermGroup> remak_abelian(const PermGroup& A, const OperatorSet& ops) {
  BoundOperators b(A, ops);
  return remak_abelian(A, b.maps());
}

}  // namespace remak
