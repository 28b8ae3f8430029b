#include <gtest/gtest.h>

#include <random>

#include <remak/bilinear.hpp>
#include <remak/group_ops.hpp>

#include "pgroups.hpp"
#include "test_util.hpp"

using namespace remak;
using namespace remak::testing;

namespace {

BilinearMap bi(const GroupGens& g) { return bi_of_group(g.group()).map; }

std::size_t log_order(i64 p, const std::vector<int>& ex, const Mat& rows) { return zmod::LocalBasis(p, ex, rows).log_order(); }

int total(const std::vector<int>& ex) {
  int t = 0;
  for (int e : ex) t += e;
  return t;
}

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

Vec apply(const Vec& u, const Mat& f, i64 p, const std::vector<int>& ex) { return zmod::vec_mul(u, f, p, ex); }

// b(uA, vA) composed with C on W, for A, C invertible on elementary V, W
BilinearMap change_basis(const BilinearMap& b, const Mat& A, const Mat& C) {
  auto r = BilinearMap::zero(b.p, b.v_exp, b.w_exp);
  for (std::size_t i = 0; i < b.nv(); ++i)
    for (std::size_t j = 0; j < b.nv(); ++j) {
      Vec w = apply(b.eval(A[i], A[j]), C, b.p, b.w_exp);
      for (std::size_t k = 0; k < b.nw(); ++k) r.at(i, j, k) = w[k];
    }
  return r;
}

Mat random_invertible(std::size_t n, i64 p, std::mt19937_64& rng) {
  for (;;) {
    Mat A(n, Vec(n));
    for (auto& r : A)
      for (auto& x : r) x = static_cast<i64>(rng() % p);
    if (zmod::rref_fp(A, p).size() == n) return A;
  }
}

bool elementary(const BilinearMap& b) {
  for (int e : b.v_exp)
    if (e != 1) return false;
  for (int e : b.w_exp)
    if (e != 1) return false;
  return true;
}

std::size_t nonabelian_oracle_factors(const GroupGens& g) {
  auto S = small(g);
  std::size_t n = 0;
  for (const auto& F : oracle::brute_remak(S)) n += !oracle::as_group(S, F).is_abelian();
  return n;
}

}  // namespace

TEST(BiOfGroup, Examples) {
  auto z = bi(abelian_group({4, 2}));
  EXPECT_EQ(z.nv(), 0u);
  EXPECT_EQ(z.nw(), 0u);
  auto d = bi(dihedral(4));
  EXPECT_EQ(d.nv(), 2u);
  EXPECT_EQ(d.nw(), 1u);
  EXPECT_EQ(d.at(0, 1, 0), 1);
  EXPECT_EQ(d.at(1, 0, 0), 1);
  EXPECT_EQ(d.at(0, 0, 0), 0);
  EXPECT_EQ(d.at(1, 1, 0), 0);
  auto dq = bi(direct_product({dihedral(4), quaternion8()}));
  EXPECT_EQ(dq.nv(), 4u);
  EXPECT_EQ(dq.nw(), 2u);
}

TEST(BiOfGroup, Rejections) {
  EXPECT_THROW(bi_of_group(symmetric(3).group()), precondition_error);
  EXPECT_THROW(bi_of_group(dihedral(8).group()), precondition_error);  // class 3
}

TEST(BiOfGroup, AlternatingAndMatchesCommutators) {
  for (const auto& g : class2_small()) {
    auto B = bi_of_group(g.group());
    const auto& b = B.map;
    for (std::size_t i = 0; i < b.nv(); ++i)
      for (std::size_t j = 0; j < b.nv(); ++j) {
        Vec w = b.eval(unit(b.nv(), i), unit(b.nv(), j));
        EXPECT_EQ(w, B.w_pres.coords(comm(B.v_reps[i], B.v_reps[j]))) << g.name;
        if (i == j) EXPECT_EQ(w, Vec(b.nw(), 0)) << g.name;
      }
  }
}

TEST(Radical, Examples) {
  auto z = BilinearMap::zero(3, {1, 1}, {1});
  EXPECT_EQ(radical(z).size(), 2u);
  EXPECT_TRUE(radical(bi(dihedral(4))).empty());
  // e2 pairs with nothing
  auto b = BilinearMap::zero(2, {1, 1, 1}, {1});
  b.at(0, 1, 0) = b.at(1, 0, 0) = 1;
  auto R = radical(b);
  ASSERT_EQ(R.size(), 1u);
  EXPECT_EQ(R[0], (Vec{0, 0, 1}));
  EXPECT_THROW(centroid(b), precondition_error);
  auto nf = hyperbolic_planes(3, 1);
  nf.w_exp.push_back(1);
  nf.B.assign(nf.nv() * nf.nv() * 2, 0);
  nf.at(0, 1, 0) = 1;
  nf.at(1, 0, 0) = 2;
  EXPECT_FALSE(is_full(nf));
  EXPECT_THROW(centroid(nf), precondition_error);
}

TEST(Centroid, Examples) {
  auto m = BilinearMap::zero(5, {1}, {1});
  m.at(0, 0, 0) = 1;
  EXPECT_EQ(centroid(m).basis.size(), 1u);
  auto C = centroid(bi(dihedral(4)));
  EXPECT_EQ(C.basis.size(), 1u);
  EXPECT_EQ(frame(C.ring).size(), 1u);
  EXPECT_EQ(centroid(bi(direct_product({dihedral(4), quaternion8()}))).basis.size(), 2u);
  // Heis(F9) is F9-bilinear: its centroid is F9
  auto F = centroid(f9_heisenberg_form());
  EXPECT_EQ(F.basis.size(), 2u);
  EXPECT_EQ(frame(F.ring).size(), 1u);
}

TEST(FrameDecomposition, Examples) {
  EXPECT_EQ(frame_decomposition(bi(dihedral(4))).size(), 1u);
  auto dq = frame_decomposition(bi(direct_product({dihedral(4), quaternion8()})));
  ASSERT_EQ(dq.size(), 2u);
  for (const auto& blk : dq) {
    EXPECT_EQ(blk.v_rows.size(), 2u);
    EXPECT_EQ(blk.w_rows.size(), 1u);
  }
  auto h = frame_decomposition(hyperbolic_planes(3, 3));
  ASSERT_EQ(h.size(), 3u);
  for (const auto& blk : h) EXPECT_EQ(blk.v_rows.size(), 2u);
}

TEST(Grp, Examples) {
  auto z2 = grp_of_bilinear(BilinearMap::zero(2, {1}, {}));
  EXPECT_EQ(z2.group.order(), 2u);
  auto H = grp_of_bilinear(hyperbolic_planes(3, 1));
  EXPECT_EQ(H.group.order(), 27u);
  EXPECT_FALSE(H.group.is_abelian());
  auto S = small(H.group);
  for (std::size_t x = 0; x < S.order(); ++x) EXPECT_LE(S.element_order(x), 3u);
  EXPECT_THROW(grp_of_bilinear(hyperbolic_planes(3, 4)), resource_bound);
}

TEST(Grp, RoundTripsExponentP) {
  for (const auto& g : exponent_p_cases()) {
    auto P = g.group();
    if (P.order() > 512) continue;
    auto R = grp_of_bilinear(bi_of_group(P).map);
    EXPECT_TRUE(oracle::isomorphic_small(small(P), small(R.group))) << g.name;
  }
}

TEST(CentroidProperty, IdentitiesClosureAndUnit) {
  std::vector<BilinearMap> maps;
  for (const auto& g : class2_small()) maps.push_back(bi(g));
  maps.push_back(hyperbolic_planes(3, 3));
  maps.push_back(free_class2_form(3));
  maps.push_back(free_class2_form(5));
  maps.push_back(f9_heisenberg_form());
  for (const auto& b : maps) {
    auto C = centroid(b);
    const auto& R = C.ring;
    ASSERT_EQ(R.n(), C.basis.size());
    for (const auto& x : C.basis)
      for (std::size_t i = 0; i < b.nv(); ++i)
        for (std::size_t j = 0; j < b.nv(); ++j) {
          Vec u = unit(b.nv(), i), v = unit(b.nv(), j);
          Vec mid = apply(b.eval(u, v), x.g, b.p, b.w_exp);
          EXPECT_EQ(b.eval(apply(u, x.f, b.p, b.v_exp), v), mid);
          EXPECT_EQ(b.eval(u, apply(v, x.f, b.p, b.v_exp)), mid);
        }
    // (1,1) and composition agree with the ring structure
    auto one = C.element(R.one(), b);
    EXPECT_EQ(one.f, zmod::identity(b.nv()));
    EXPECT_EQ(one.g, zmod::identity(b.nw()));
    for (std::size_t x = 0; x < R.n(); ++x)
      for (std::size_t y = 0; y < R.n(); ++y) {
        auto a = C.element(unit(R.n(), x), b), c = C.element(unit(R.n(), y), b);
        auto prod = C.element(R.mul(unit(R.n(), x), unit(R.n(), y)), b);
        EXPECT_EQ(zmod::mul(a.f, c.f, b.p, b.v_exp), prod.f);
        EXPECT_EQ(zmod::mul(a.g, c.g, b.p, b.w_exp), prod.g);
        EXPECT_EQ(zmod::mul(a.f, c.f, b.p, b.v_exp), zmod::mul(c.f, a.f, b.p, b.v_exp));
      }
  }
}

TEST(FrameProperty, BlocksReassembleTheMap) {
  std::vector<BilinearMap> maps;
  for (const auto& g : class2_small()) maps.push_back(bi(g));
  maps.push_back(hyperbolic_planes(3, 3));
  maps.push_back(bi(direct_product({heisenberg27(), heisenberg27()})));
  for (const auto& b : maps) {
    auto blocks = frame_decomposition(b);
    Mat all_v, all_w;
    for (const auto& blk : blocks) {
      all_v.insert(all_v.end(), blk.v_rows.begin(), blk.v_rows.end());
      all_w.insert(all_w.end(), blk.w_rows.begin(), blk.w_rows.end());
    }
    EXPECT_EQ(static_cast<int>(log_order(b.p, b.v_exp, all_v)), total(b.v_exp));
    EXPECT_EQ(static_cast<int>(log_order(b.p, b.w_exp, all_w)), total(b.w_exp));
    int vsum = 0, wsum = 0;
    for (const auto& blk : blocks) {
      vsum += static_cast<int>(log_order(b.p, b.v_exp, blk.v_rows));
      wsum += static_cast<int>(log_order(b.p, b.w_exp, blk.w_rows));
    }
    EXPECT_EQ(vsum, total(b.v_exp));  // independent
    EXPECT_EQ(wsum, total(b.w_exp));
    for (std::size_t x = 0; x < blocks.size(); ++x) {
      auto vs = zmod::LocalBasis(b.p, b.v_exp, blocks[x].v_rows).vectors();
      auto ws = zmod::LocalBasis(b.p, b.w_exp, blocks[x].w_rows).vectors();
      const auto& m = blocks[x].map;
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < vs.size(); ++j) {
          Vec w(b.nw(), 0);
          for (std::size_t k = 0; k < ws.size(); ++k)
            for (std::size_t l = 0; l < b.nw(); ++l)
              w[l] = zmod::md(w[l] + m.at(i, j, k) * ws[k][l], zmod::ipow(b.p, b.w_exp[l]));
          EXPECT_EQ(b.eval(vs[i], vs[j]), w);
        }
      for (std::size_t y = 0; y < blocks.size(); ++y) {
        if (x == y) continue;
        for (const auto& u : blocks[x].v_rows)
          for (const auto& v : blocks[y].v_rows) EXPECT_EQ(b.eval(u, v), Vec(b.nw(), 0));
      }
    }
  }
}

TEST(FrameProperty, BlocksBoundNonabelianFactors) {
  for (const auto& g : class2_small())
    EXPECT_LE(frame_decomposition(bi(g)).size(), nonabelian_oracle_factors(g)) << g.name;
}

TEST(FrameProperty, ExactForExponentPWithCenterInFrattini) {
  for (const auto& g : exponent_p_cases()) {
    auto P = g.group();
    auto S = small(P);
    for (std::size_t x = 0; x < S.order(); ++x) ASSERT_LE(S.element_order(x), 3u) << g.name;
    // exponent p: Phi = [P,P]
    ASSERT_TRUE(center(P).is_subgroup_of(commutator_subgroup(P, P, P))) << g.name;
    auto C = centroid(bi_of_group(P).map);
    const auto blocks = frame(C.ring).size();
    EXPECT_EQ(blocks, nonabelian_oracle_factors(g)) << g.name;
    EXPECT_EQ(blocks == 1, oracle::brute_remak(S).size() == 1) << g.name;
  }
}

TEST(CentroidProperty, RankAddsOverDirectProducts) {
  auto gs = class2_small();
  gs.push_back(abelian_group({4, 2}));
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i; j < gs.size(); ++j) {
      auto P = gs[i].group(), Q = gs[j].group();
      if (P.order() % 2 != Q.order() % 2) continue;
      if (P.order() > 64 || Q.order() > 64) continue;
      auto rp = centroid(bi_of_group(P).map).basis.size();
      auto rq = centroid(bi_of_group(Q).map).basis.size();
      auto r = centroid(bi(direct_product({gs[i], gs[j]}))).basis.size();
      EXPECT_EQ(r, rp + rq) << gs[i].name << " x " << gs[j].name;
    }
}

TEST(CentroidProperty, InvariantUnderBasisChange) {
  std::mt19937_64 rng(11);
  std::vector<BilinearMap> maps;
  for (const auto& g : class2_small()) maps.push_back(bi(g));
  maps.push_back(free_class2_form(3));
  maps.push_back(f9_heisenberg_form());
  for (const auto& b : maps) {
    ASSERT_TRUE(elementary(b));
    auto C = centroid(b);
    for (int t = 0; t < 3; ++t) {
      auto c = change_basis(b, random_invertible(b.nv(), b.p, rng), random_invertible(b.nw(), b.p, rng));
      auto D = centroid(c);
      EXPECT_EQ(D.basis.size(), C.basis.size());
      EXPECT_EQ(frame(D.ring).size(), frame(C.ring).size());
    }
  }
  // and under relabelling the points of the group
  for (const auto& g : class2_small()) {
    auto h = g;
    Perm s = random_perm(g.degree, rng);
    for (auto& x : h.gens) x = conj(x, s);
    EXPECT_EQ(centroid(bi(h)).basis.size(), centroid(bi(g)).basis.size()) << g.name;
  }
}
