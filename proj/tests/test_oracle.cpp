#include <gtest/gtest.h>

#include <random>

#include <remak/corpus.hpp>

#include "test_util.hpp"

using namespace remak;
using namespace remak::testing;
using oracle::SmallGroup;
using oracle::Subgroup;

namespace {

Subgroup gen_by(const SmallGroup& S, const std::vector<Perm>& g) {
  std::vector<oracle::elem> e;
  for (const auto& x : g) e.push_back(S.index_of(x));
  return S.closure(e);
}

std::vector<std::size_t> sorted_orders(const std::vector<Subgroup>& f) {
  std::vector<std::size_t> o;
  for (const auto& x : f) o.push_back(x.order());
  std::sort(o.begin(), o.end());
  return o;
}

// does some pair of proper normal subgroups split H directly?
bool splits(const SmallGroup& H) {
  auto N = oracle::all_normal_subgroups(H);
  for (const auto& a : N)
    for (const auto& b : N)
      if (a.order() > 1 && b.order() > 1 && a.order() * b.order() == H.order() && a.bits.meet_count(b.bits) == 1) return true;
  return false;
}

std::vector<GroupGens> sample_groups() {
  std::vector<GroupGens> out;
  for (const auto& e : corpus(32, 400))
    if (e.order <= 400) out.push_back(e.gens);
  return out;
}

}  // namespace

TEST(NormalSubgroups, Examples) {
  EXPECT_EQ(oracle::all_normal_subgroups(small(cyclic(7))).size(), 2u);
  auto s3 = oracle::all_normal_subgroups(small(symmetric(3)));
  ASSERT_EQ(s3.size(), 3u);
  EXPECT_EQ(s3[1].order(), 3u);
  EXPECT_EQ(oracle::all_normal_subgroups(small(dihedral(4))).size(), 6u);
  EXPECT_EQ(oracle::all_normal_subgroups(small(quaternion8())).size(), 6u);
  EXPECT_EQ(oracle::all_normal_subgroups(small(alternating4())).size(), 3u);
}

TEST(NormalSubgroups, BoundsAreEnforced) {
  EXPECT_THROW(small(symmetric(7)), resource_bound);
  EXPECT_NO_THROW(small(symmetric(7), 6000));
  EXPECT_THROW(oracle::all_normal_subgroups(small(abelian_group({2, 2, 2, 2, 2})), 10), resource_bound);
}

TEST(NormalSubgroups, AreNormalAndClosed) {
  for (const auto& g : sample_groups()) {
    if (g.group().order() > 120) continue;
    auto S = small(g);
    auto N = oracle::all_normal_subgroups(S);
    for (const auto& H : N) {
      EXPECT_EQ(S.closure(H.elems).bits, H.bits) << g.name;
      for (auto h : H.elems)
        for (oracle::elem x = 0; x < S.order(); ++x) ASSERT_TRUE(H.bits.test(S.conj(h, x))) << g.name;
    }
    // no duplicates
    for (std::size_t i = 1; i < N.size(); ++i) EXPECT_FALSE(N[i - 1].bits == N[i].bits);
  }
}

TEST(IsDirect, Examples) {
  auto S = small(cyclic(6));
  EXPECT_TRUE(oracle::is_direct_decomposition(S, {S.whole()}).ok);
  Perm g = cyclic(6).gens[0];
  auto z2 = gen_by(S, {g.pow(3)}), z3 = gen_by(S, {g.pow(2)});
  EXPECT_TRUE(oracle::is_direct_decomposition(S, {z2, z3}).ok);
  auto v = oracle::is_direct_decomposition(S, {z2, S.whole()});
  EXPECT_FALSE(v.ok);
  EXPECT_FALSE(v.witness.empty());
}

TEST(IsDirect, CentralInvolutionsOfD8xZ2) {
  // <z> and <a^2 z> are both central complements to D8, but no direct
  // decomposition contains both
  auto G = direct_product({dihedral(4), cyclic(2)});
  auto S = small(G);
  Perm a = cyc(6, {{1, 2, 3, 4}}), z = cyc(6, {{5, 6}});
  auto A = gen_by(S, {z}), B = gen_by(S, {a * a * z});
  EXPECT_FALSE(oracle::is_direct_decomposition(S, {A, B}).ok);
  for (const auto& N : oracle::all_normal_subgroups(S)) EXPECT_FALSE(oracle::is_direct_decomposition(S, {A, B, N}).ok);
  // each alone is a direct factor
  auto D = gen_by(S, {cyc(6, {{1, 2, 3, 4}}), cyc(6, {{2, 4}})});
  EXPECT_TRUE(oracle::is_direct_decomposition(S, {A, D}).ok);
  EXPECT_TRUE(oracle::is_direct_decomposition(S, {B, D}).ok);
}

TEST(BruteRemak, Examples) {
  EXPECT_EQ(oracle::remak_orders(small(quaternion8())), (std::vector<std::size_t>{8}));
  EXPECT_EQ(oracle::remak_orders(small(klein4())), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(oracle::remak_orders(small(central_product_f3(sl23_matrices(), sl23_matrices(), "SL o SL"))),
            (std::vector<std::size_t>{288}));
  EXPECT_TRUE(oracle::brute_remak(small(cyclic(1))).empty());
  EXPECT_EQ(oracle::remak_orders(small(direct_product({symmetric(3), cyclic(6)}))), (std::vector<std::size_t>{2, 3, 6}));
}

TEST(BruteRemak, FactorsAreDirectAndIndecomposable) {
  for (const auto& g : sample_groups()) {
    auto S = small(g);
    auto f = oracle::brute_remak(S);
    if (f.empty()) continue;
    EXPECT_TRUE(oracle::is_direct_decomposition(S, f).ok) << g.name;
    for (const auto& F : f) {
      auto H = oracle::as_group(S, F);
      if (H.is_abelian()) {
        // cyclic of prime-power order
        std::size_t m = 0, n = H.order();
        for (oracle::elem x = 0; x < n; ++x) m = std::max(m, H.element_order(x));
        EXPECT_EQ(m, n) << g.name;
        while (n % 2 == 0 && n > 1) n /= 2;
        std::size_t p = 3;
        while (n > 1 && n % p) p += 2;
        while (n > 1 && n % p == 0) n /= p;
        EXPECT_EQ(n, 1u) << g.name;
      } else if (H.order() <= 200) {
        EXPECT_FALSE(splits(H)) << g.name << " factor of order " << H.order();
      }
    }
  }
}

TEST(BruteRemak, IndependentOfGeneratorOrder) {
  std::mt19937_64 rng(5);
  for (const auto& g : sample_groups()) {
    auto base = oracle::remak_orders(small(g));
    auto h = g;
    std::shuffle(h.gens.begin(), h.gens.end(), rng);
    if (!h.gens.empty()) h.gens.push_back(h.gens[0] * h.gens.back());
    Perm s = random_perm(g.degree, rng);
    for (auto& x : h.gens) x = conj(x, s);
    EXPECT_EQ(oracle::remak_orders(small(h)), base) << g.name;
  }
}

TEST(Isomorphic, Examples) {
  auto d8 = small(dihedral(4));
  EXPECT_TRUE(oracle::isomorphic_small(d8, d8));
  EXPECT_FALSE(oracle::isomorphic_small(d8, small(quaternion8())));
  EXPECT_FALSE(oracle::isomorphic_small(small(abelian_group({4, 2})), small(abelian_group({2, 2, 2}))));
  EXPECT_TRUE(oracle::isomorphic_small(small(cyclic(6)), small(abelian_group({2, 3}))));
  // D8 as the matrix group over F3
  EXPECT_TRUE(oracle::isomorphic_small(d8, small(matrix_group(3, d8_matrices(), "D8'"))));
  EXPECT_TRUE(oracle::isomorphic_small(small(quaternion8()), small(matrix_group(3, q8_matrices(), "Q8'"))));
  EXPECT_FALSE(oracle::isomorphic_small(small(symmetric(4)), small(sl23())));
  auto big = small(cyclic(600));
  EXPECT_THROW(oracle::isomorphic_small(big, big), resource_bound);
}

TEST(Isomorphic, RelabelledCopies) {
  std::mt19937_64 rng(9);
  for (const auto& g : sample_groups()) {
    if (g.group().order() > 200) continue;
    auto h = g;
    Perm s = random_perm(g.degree, rng);
    for (auto& x : h.gens) x = conj(x, s);
    EXPECT_TRUE(oracle::isomorphic_small(small(g), small(h))) << g.name;
  }
}
