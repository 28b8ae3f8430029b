#pragma once

#include <vector>

#include "abelian.hpp"
#include "ring.hpp"
#include "table.hpp"

namespace remak {

// Biadditive b : V x V -> W with V = (+) Z/p^{v_i}, W = (+) Z/p^{w_k}.
struct BilinearMap {
  i64 p = 2;
  std::vector<int> v_exp, w_exp;
  std::vector<i64> B;  // B[(i*nv + j)*nw + k]

  std::size_t nv() const { return v_exp.size(); }
  std::size_t nw() const { return w_exp.size(); }
  i64 at(std::size_t i, std::size_t j, std::size_t k) const { return B[(i * nv() + j) * nw() + k]; }
  i64& at(std::size_t i, std::size_t j, std::size_t k) { return B[(i * nv() + j) * nw() + k]; }

  static BilinearMap zero(i64 p, std::vector<int> v, std::vector<int> w) {
    BilinearMap b;
    b.p = p;
    b.v_exp = std::move(v);
    b.w_exp = std::move(w);
    b.B.assign(b.nv() * b.nv() * b.nw(), 0);
    return b;
  }

  Vec eval(const Vec& u, const Vec& v) const {
    Vec w(nw(), 0);
    for (std::size_t k = 0; k < nw(); ++k) {
      i64 q = zmod::ipow(p, w_exp[k]);
      for (std::size_t i = 0; i < nv(); ++i)
        for (std::size_t j = 0; j < nv(); ++j)
          w[k] = zmod::md(w[k] + zmod::mulmod(zmod::mulmod(u[i], v[j], q), at(i, j, k), q), q);
    }
    return w;
  }
};

// Bi(P) for a p-group of class at most 2, with the group data behind it.
struct GroupBilinear {
  BilinearMap map;
  CentralQuotient quotient;      // P -> P/Z(P)
  AbelianPresentation v_pres;    // basis of P/Z(P)
  std::vector<Perm> v_reps;      // lifts of that basis
  AbelianPresentation w_pres;    // basis of [P,P]

  Vec v_coords(const Perm& g) const { return v_pres.coords(quotient.image(g)); }
};

inline GroupBilinear bi_of_group(const PermGroup& P) {
  auto ps = prime_factors(P.order());
  if (ps.size() > 1) throw precondition_error("bi_of_group: not a p-group");
  i64 p = ps.empty() ? 2 : static_cast<i64>(ps.front());
  GroupBilinear g{BilinearMap(), central_quotient(P), AbelianPresentation(), {}, AbelianPresentation()};
  PermGroup W = commutator_subgroup(P, P, P);
  for (const auto& w : W.gens())
    if (!g.quotient.kernel.contains(w)) throw precondition_error("bi_of_group: class exceeds 2");
  g.v_pres = primary_decomposition(g.quotient.quotient);
  g.v_reps = g.quotient.lift_all(g.v_pres.basis());
  g.w_pres = primary_decomposition(W);
  g.map = BilinearMap::zero(p, g.v_pres.exponents(), g.w_pres.exponents());
  for (std::size_t i = 0; i < g.v_reps.size(); ++i)
    for (std::size_t j = 0; j < g.v_reps.size(); ++j) {
      Vec c = g.w_pres.coords(comm(g.v_reps[i], g.v_reps[j]));
      for (std::size_t k = 0; k < c.size(); ++k) g.map.at(i, j, k) = c[k];
    }
  return g;
}

// {v : b(v,V) = 0 = b(V,v)} as independent generators in V coordinates
inline Mat radical(const BilinearMap& b) {
  const std::size_t nv = b.nv(), nw = b.nw();
  if (nv == 0) return {};
  if (nw == 0) return zmod::LocalBasis(b.p, b.v_exp, zmod::identity(nv)).vectors();
  Mat C(nv);
  std::vector<int> eq;
  for (std::size_t j = 0; j < nv; ++j)
    for (std::size_t k = 0; k < nw; ++k) {
      for (std::size_t i = 0; i < nv; ++i) {
        C[i].push_back(b.at(i, j, k));
        C[i].push_back(b.at(j, i, k));
      }
      eq.push_back(b.w_exp[k]);
      eq.push_back(b.w_exp[k]);
    }
  auto s = zmod::solve(b.p, b.v_exp, eq, C, {});
  return zmod::LocalBasis(b.p, b.v_exp, s.homogeneous).vectors();
}

inline bool is_nondegenerate(const BilinearMap& b) { return radical(b).empty(); }

// W = b(V,V)?
inline bool is_full(const BilinearMap& b) {
  Mat vals;
  for (std::size_t i = 0; i < b.nv(); ++i)
    for (std::size_t j = 0; j < b.nv(); ++j) {
      Vec w;
      for (std::size_t k = 0; k < b.nw(); ++k) w.push_back(b.at(i, j, k));
      vals.push_back(w);
    }
  int total = 0;
  for (int e : b.w_exp) total += e;
  return zmod::LocalBasis(b.p, b.w_exp, vals).log_order() == total;
}

struct CentroidElement {
  Mat f;  // on V
  Mat g;  // on W
};

struct Centroid {
  FiniteCommRing ring;
  std::vector<CentroidElement> basis;

  CentroidElement element(const Vec& c, const BilinearMap& b) const {
    CentroidElement x{Mat(b.nv(), Vec(b.nv(), 0)), Mat(b.nw(), Vec(b.nw(), 0))};
    for (std::size_t r = 0; r < basis.size(); ++r) {
      for (std::size_t i = 0; i < b.nv(); ++i)
        for (std::size_t l = 0; l < b.nv(); ++l)
          x.f[i][l] = zmod::md(x.f[i][l] + c[r] * basis[r].f[i][l], zmod::ipow(b.p, b.v_exp[l]));
      for (std::size_t m = 0; m < b.nw(); ++m)
        for (std::size_t k = 0; k < b.nw(); ++k)
          x.g[m][k] = zmod::md(x.g[m][k] + c[r] * basis[r].g[m][k], zmod::ipow(b.p, b.w_exp[k]));
    }
    return x;
  }
};

// C(b) = {(f,g) : b(uf,v) = b(u,v)g = b(u,vf)} as a ring by structure constants.
inline Centroid centroid(const BilinearMap& b) {
  if (!is_nondegenerate(b)) throw precondition_error("centroid: bilinear map is degenerate");
  if (!is_full(b)) throw precondition_error("centroid: W is not spanned by b(V,V)");
  const std::size_t nv = b.nv(), nw = b.nw();
  const i64 p = b.p;
  // unknowns: t for f_il then g_mk, entries p^{shift} t
  std::vector<int> a, shift, entry_exp;
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t l = 0; l < nv; ++l) {
      a.push_back(std::min(b.v_exp[i], b.v_exp[l]));
      shift.push_back(std::max(0, b.v_exp[l] - b.v_exp[i]));
      entry_exp.push_back(b.v_exp[l]);
    }
  for (std::size_t m = 0; m < nw; ++m)
    for (std::size_t k = 0; k < nw; ++k) {
      a.push_back(std::min(b.w_exp[m], b.w_exp[k]));
      shift.push_back(std::max(0, b.w_exp[k] - b.w_exp[m]));
      entry_exp.push_back(b.w_exp[k]);
    }
  const std::size_t nu = a.size();
  Mat C(nu);
  std::vector<int> eq;
  auto fidx = [&](std::size_t i, std::size_t l) { return i * nv + l; };
  auto gidx = [&](std::size_t m, std::size_t k) { return nv * nv + m * nw + k; };
  for (int which = 0; which < 2; ++which)
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nv; ++j)
        for (std::size_t k = 0; k < nw; ++k) {
          const i64 q = zmod::ipow(p, b.w_exp[k]);
          Vec col(nu, 0);
          for (std::size_t l = 0; l < nv; ++l) {
            if (which == 0)  // b(v_i f, v_j) = sum_l f_il B_ljk
              col[fidx(i, l)] = zmod::md(col[fidx(i, l)] + zmod::mulmod(zmod::ipow(p, shift[fidx(i, l)]), b.at(l, j, k), q), q);
            else  // b(v_i, v_j f) = sum_l f_jl B_ilk
              col[fidx(j, l)] = zmod::md(col[fidx(j, l)] + zmod::mulmod(zmod::ipow(p, shift[fidx(j, l)]), b.at(i, l, k), q), q);
          }
          for (std::size_t m = 0; m < nw; ++m)
            col[gidx(m, k)] = zmod::md(col[gidx(m, k)] - zmod::mulmod(zmod::ipow(p, shift[gidx(m, k)]), b.at(i, j, m), q), q);
          for (std::size_t u = 0; u < nu; ++u) C[u].push_back(col[u]);
          eq.push_back(b.w_exp[k]);
        }
  auto sol = zmod::solve(p, a, eq, C, {});
  Mat flat;
  for (const auto& t : sol.homogeneous) {
    Vec e(nu);
    for (std::size_t u = 0; u < nu; ++u) e[u] = zmod::mulmod(t[u], zmod::ipow(p, shift[u]), zmod::ipow(p, entry_exp[u]));
    flat.push_back(e);
  }
  zmod::LocalBasis lb(p, entry_exp, flat);
  auto unflat = [&](const Vec& e) {
    CentroidElement x{Mat(nv, Vec(nv)), Mat(nw, Vec(nw))};
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t l = 0; l < nv; ++l) x.f[i][l] = e[fidx(i, l)];
    for (std::size_t m = 0; m < nw; ++m)
      for (std::size_t k = 0; k < nw; ++k) x.g[m][k] = e[gidx(m, k)];
    return x;
  };
  auto doflat = [&](const CentroidElement& x) {
    Vec e(nu);
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t l = 0; l < nv; ++l) e[fidx(i, l)] = x.f[i][l];
    for (std::size_t m = 0; m < nw; ++m)
      for (std::size_t k = 0; k < nw; ++k) e[gidx(m, k)] = x.g[m][k];
    return e;
  };
  Centroid c;
  for (const auto& e : lb.vectors()) c.basis.push_back(unflat(e));
  const std::size_t r = c.basis.size();
  std::vector<Mat> lam(r, Mat(r, Vec(r, 0)));
  for (std::size_t x = 0; x < r; ++x)
    for (std::size_t y = 0; y < r; ++y) {
      CentroidElement pr{zmod::mul(c.basis[x].f, c.basis[y].f, p, b.v_exp), zmod::mul(c.basis[x].g, c.basis[y].g, p, b.w_exp)};
      auto co = lb.coords(doflat(pr));
      if (!co) throw precondition_error("centroid: solution space not closed under composition");
      lam[x][y] = *co;
    }
  auto one = lb.coords(doflat({zmod::identity(nv), zmod::identity(nw)}));
  if (!one) throw precondition_error("centroid: identity missing from the solution space");
  int e = 1;
  for (int x : lb.exponents()) e = std::max(e, x);
  if (r == 0) {
    c.ring = FiniteCommRing(p, {}, {}, {});
    return c;
  }
  c.ring = ring_from_structure_constants(p, e, r, lam, *one, lb.exponents());
  return c;
}

struct BilinearBlock {
  Mat v_rows;  // basis of the V-part in V coordinates
  Mat w_rows;  // basis of the W-part in W coordinates
  BilinearMap map;
};

inline BilinearMap restrict_bilinear(const BilinearMap& b, const Mat& v_rows, const Mat& w_rows) {
  zmod::LocalBasis vb(b.p, b.v_exp, v_rows), wb(b.p, b.w_exp, w_rows);
  BilinearMap r = BilinearMap::zero(b.p, vb.exponents(), wb.exponents());
  auto vs = vb.vectors();
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) {
      auto c = wb.coords(b.eval(vs[i], vs[j]));
      if (!c) throw precondition_error("restrict_bilinear: values leave the W-part");
      for (std::size_t k = 0; k < c->size(); ++k) r.at(i, j, k) = (*c)[k];
    }
  return r;
}

// The Remak decomposition of b given by the frame of its centroid.
inline std::vector<BilinearBlock> frame_decomposition(const BilinearMap& b) {
  Centroid C = centroid(b);
  std::vector<BilinearBlock> out;
  for (const auto& e : frame(C.ring)) {
    CentroidElement x = C.element(e, b);
    BilinearBlock blk;
    blk.v_rows = zmod::LocalBasis(b.p, b.v_exp, x.f).vectors();
    blk.w_rows = zmod::LocalBasis(b.p, b.w_exp, x.g).vectors();
    blk.map = restrict_bilinear(b, blk.v_rows, blk.w_rows);
    out.push_back(std::move(blk));
  }
  return out;
}

// Grp(b): V x W with (u,w)(u',w') = (u+u', w + b(u,u') + w'), as a table.
inline std::vector<std::vector<long long>> grp_of_bilinear_table(const BilinearMap& b, std::size_t bound = 5000) {
  std::vector<i64> vm, wm;
  std::size_t n = 1;
  for (int e : b.v_exp) vm.push_back(zmod::ipow(b.p, e)), n *= static_cast<std::size_t>(vm.back());
  for (int e : b.w_exp) wm.push_back(zmod::ipow(b.p, e)), n *= static_cast<std::size_t>(wm.back());
  if (n > bound) throw resource_bound("grp_of_bilinear: group too large for a table");
  auto decode = [&](std::size_t x, Vec& u, Vec& w) {
    u.assign(vm.size(), 0);
    w.assign(wm.size(), 0);
    for (std::size_t i = 0; i < vm.size(); ++i) u[i] = static_cast<i64>(x % vm[i]), x /= vm[i];
    for (std::size_t k = 0; k < wm.size(); ++k) w[k] = static_cast<i64>(x % wm[k]), x /= wm[k];
  };
  auto encode = [&](const Vec& u, const Vec& w) {
    std::size_t x = 0;
    for (std::size_t k = wm.size(); k-- > 0;) x = x * wm[k] + static_cast<std::size_t>(zmod::md(w[k], wm[k]));
    for (std::size_t i = vm.size(); i-- > 0;) x = x * vm[i] + static_cast<std::size_t>(zmod::md(u[i], vm[i]));
    return x;
  };
  std::vector<std::vector<long long>> t(n, std::vector<long long>(n));
  Vec u1, w1, u2, w2;
  for (std::size_t x = 0; x < n; ++x) {
    decode(x, u1, w1);
    for (std::size_t y = 0; y < n; ++y) {
      decode(y, u2, w2);
      Vec bu = b.eval(u1, u2), u(vm.size()), w(wm.size());
      for (std::size_t i = 0; i < vm.size(); ++i) u[i] = u1[i] + u2[i];
      for (std::size_t k = 0; k < wm.size(); ++k) w[k] = w1[k] + bu[k] + w2[k];
      t[x][y] = static_cast<long long>(encode(u, w));
    }
  }
  return t;
}

inline TableGroup grp_of_bilinear(const BilinearMap& b, std::size_t bound = 5000) {
  return group_from_table(grp_of_bilinear_table(b, bound));
}

}  // namespace remak
