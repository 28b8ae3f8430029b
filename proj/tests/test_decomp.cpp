#include <gtest/gtest.h>

#include <random>
#include <set>

#include <remak/corpus.hpp>
#include <remak/decomp.hpp>

#include "instances.hpp"
#include "test_util.hpp"

using namespace remak;
using namespace remak::testing;
using Stage = ComplementResult::Stage;

namespace {

const std::vector<ElementMap> none;

Slp power_word(long long k) {
  Slp s;
  s.pow(s.gen(0), k);
  return s;
}

bool same_member(const PermGroup& A, const std::vector<PermGroup>& L) {
  return std::any_of(L.begin(), L.end(), [&](const PermGroup& B) { return A.same_as(B); });
}

bool oracle_direct(const PermGroup& G, const std::vector<PermGroup>& parts) {
  auto S = small(G, 6000);
  std::vector<oracle::Subgroup> p;
  for (const auto& x : parts) p.push_back(as_subgroup(S, x));
  return oracle::is_direct_decomposition(S, p).ok;
}

std::vector<CorpusEntry> sample(std::uint64_t max_order) {
  std::vector<CorpusEntry> out;
  for (const auto& e : corpus(64, 2000))
    if (e.order <= max_order) out.push_back(e);
  return out;
}

}  // namespace

TEST(SolveModule, Examples) {
  auto z4 = cyclic(4).group();
  Perm a = z4.gens()[0];
  auto s = solve_module_equations(z4, z4, {a}, {power_word(4)});
  ASSERT_TRUE(s.feasible);
  std::vector<Perm> h;
  for (const auto& v : s.homogeneous) h.push_back(v.at(0));
  EXPECT_EQ(PermGroup(4, h).order(), 4u);

  PermGroup m2(4, {a * a});
  EXPECT_FALSE(solve_module_equations(z4, m2, {a}, {power_word(2)}).feasible);

  auto s3 = symmetric(3).group();
  PermGroup a3(3, {cyc(3, {{1, 2, 3}})});
  auto t = solve_module_equations(s3, a3, {cyc(3, {{1, 2}})}, {power_word(2)});
  ASSERT_TRUE(t.feasible);
  h.clear();
  for (const auto& v : t.homogeneous) h.push_back(v.at(0));
  EXPECT_EQ(PermGroup(3, h).order(), 3u);

  EXPECT_THROW(solve_module_equations(s3, PermGroup(3, {cyc(3, {{1, 2}})}), {}, {}), precondition_error);
}

TEST(SolveModule, SolutionsSatisfyTheWords) {
  // G = D8 x Z4, M = Z(G), f = (r, s): x^4 and (xy)^2 are solvable, the
  // commutator is not since [r mu, s nu] = r^2
  auto G = direct_product({dihedral(4), cyclic(4)}).group();
  auto M = center(G);
  std::vector<Perm> f = {G.gens()[0], G.gens()[1]};
  Slp w1 = power_word(4), w2, w3;
  {
    auto x = w2.gen(0), y = w2.gen(1);
    w2.pow(w2.mul(x, y), 2);
    auto u = w3.gen(0), v = w3.gen(1);
    w3.mul(w3.mul(w3.inv(u), w3.inv(v)), w3.mul(u, v));
  }
  EXPECT_FALSE(solve_module_equations(G, M, f, {w3}).feasible);
  auto s = solve_module_equations(G, M, f, {w1, w2});
  ASSERT_TRUE(s.feasible);
  auto holds = [&](const std::vector<Perm>& mu) {
    std::vector<Perm> v = {f[0] * mu[0], f[1] * mu[1]};
    return w1.eval(v, G.degree()).is_identity() && w2.eval(v, G.degree()).is_identity();
  };
  EXPECT_TRUE(holds(s.particular));
  for (const auto& hmu : s.homogeneous) {
    ASSERT_EQ(hmu.size(), 2u);
    for (const auto& m : hmu) EXPECT_TRUE(M.contains(m));
    EXPECT_TRUE(holds({s.particular[0] * hmu[0], s.particular[1] * hmu[1]}));
  }
  // every solution is reached: count by brute force over M^2
  std::uint64_t brute = 0;
  auto elems = M.elements();
  for (const auto& a : elems)
    for (const auto& b : elems) brute += holds({a, b});
  std::set<std::pair<Perm, Perm>> span{{Perm::identity(G.degree()), Perm::identity(G.degree())}};
  for (bool grew = true; grew;) {
    grew = false;
    auto cur = span;
    for (const auto& [p, q] : cur)
      for (const auto& hmu : s.homogeneous) grew |= span.insert({p * hmu[0], q * hmu[1]}).second;
  }
  EXPECT_EQ(span.size(), brute);
}

TEST(Presentation, Examples) {
  auto s3 = symmetric(3).group();
  auto P = constructive_presentation(s3, s3);
  EXPECT_EQ(P.rank(), 0u);
  PermGroup a3(3, {cyc(3, {{1, 2, 3}})});
  auto Q = constructive_presentation(s3, a3);
  EXPECT_EQ(Q.rank(), 1u);
  EXPECT_FALSE(a3.contains(Q.generators()[0]));
  for (const auto& r : Q.relators()) EXPECT_TRUE(a3.contains(r.eval(Q.generators(), 3)));
  auto d8 = dihedral(4).group();
  auto Z = center(d8);
  auto D = constructive_presentation(d8, Z);
  EXPECT_EQ(D.rank(), 2u);
  for (const auto& r : D.relators()) EXPECT_TRUE(Z.contains(r.eval(D.generators(), 4)));
  EXPECT_THROW(constructive_presentation(symmetric(7).group(), PermGroup::trivial(7), 100), resource_bound);
}

TEST(Presentation, RewritingLandsInTheRightCoset) {
  for (const auto& e : sample(200)) {
    auto G = e.gens.group();
    auto M = center(G);
    auto P = constructive_presentation(G, M);
    for (const auto& r : P.relators()) EXPECT_TRUE(M.contains(r.eval(P.generators(), G.degree()))) << e.gens.name;
    G.for_each_element([&](const Perm& g) {
      Perm v = P.rewrite(g).eval(P.generators(), G.degree());
      EXPECT_TRUE(M.contains(g.inverse() * v)) << e.gens.name;
    });
  }
}

TEST(ComplementAbelian, Examples) {
  auto V = klein4().group();
  PermGroup first(4, {V.gens()[0]});
  auto K = complement_abelian(V, first, none);
  ASSERT_TRUE(K.has_value());
  EXPECT_EQ(K->order(), 2u);
  EXPECT_FALSE(K->contains(V.gens()[0]));
  auto z4 = cyclic(4).group();
  EXPECT_FALSE(complement_abelian(z4, PermGroup(4, {z4.gens()[0].pow(2)}), none).has_value());
  auto s3 = symmetric(3).group();
  auto T = complement_abelian(s3, PermGroup(3, {cyc(3, {{1, 2, 3}})}), none);
  ASSERT_TRUE(T.has_value());
  EXPECT_EQ(T->order(), 2u);
}

TEST(DirectComplement, Examples) {
  auto z6 = cyclic(6).group();
  auto r = direct_complement(z6, PermGroup(6, {z6.gens()[0].pow(2)}), none);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.complement->order(), 2u);
  auto s3 = symmetric(3).group();
  EXPECT_EQ(direct_complement(s3, PermGroup(3, {cyc(3, {{1, 2, 3}})}), none).stage, Stage::product);
  EXPECT_EQ(direct_complement(s3, PermGroup(3, {cyc(3, {{1, 2}})}), none).stage, Stage::invariance);
  auto d8 = dihedral(4).group();
  auto z = direct_complement(d8, center(d8), none);
  EXPECT_EQ(z.stage, Stage::infeasible);
  EXPECT_FALSE(z.detail.empty());
  EXPECT_THROW(direct_complement(d8, PermGroup(4, {cyc(4, {{1, 2}})}), none), precondition_error);
  // trivial and whole
  EXPECT_EQ(direct_complement(d8, PermGroup::trivial(4), none).complement->order(), 8u);
  EXPECT_EQ(direct_complement(d8, d8, none).complement->order(), 1u);
}

TEST(DirectComplement, RespectsOperators) {
  // Z2 x Z2 with the coordinate swap: no coordinate is invariant, the
  // diagonal has no invariant complement
  auto V = klein4().group();
  Perm s = cyc(4, {{1, 3}, {2, 4}});
  std::vector<ElementMap> sw{[s](const Perm& x) { return conj(x, s); }};
  EXPECT_EQ(direct_complement(V, PermGroup(4, {V.gens()[0]}), sw).stage, Stage::invariance);
  EXPECT_FALSE(direct_complement(V, PermGroup(4, {V.gens()[0] * V.gens()[1]}), sw).found());
}

TEST(DirectComplement, RoundTripsAndRefusals) {
  std::mt19937_64 rng(41);
  auto entries = sample(200);
  for (int t = 0; t < 25; ++t) {
    auto c = complement_positive(entries, rng);
    auto r = direct_complement(c.G, c.H, none);
    ASSERT_TRUE(r.found()) << c.label;
    EXPECT_EQ(r.complement->order() * c.H.order(), c.G.order());
    std::vector<PermGroup> parts{c.H};
    if (!r.complement->is_trivial()) parts.push_back(*r.complement);
    auto d = make_decomposition(c.G, parts, none, false);
    EXPECT_TRUE(d.is_direct) << c.label;
    EXPECT_FALSE(verify_certificate(d, none).has_value()) << c.label;
  }
  for (const auto& c : complement_negatives(rng, 45)) EXPECT_EQ(direct_complement(c.G, c.H, none).stage, c.expected) << c.label;
}

TEST(Extend, Examples) {
  auto G = direct_product({dihedral(4), cyclic(2)}).group();
  Perm a = cyc(6, {{1, 2, 3, 4}}), z = cyc(6, {{5, 6}});
  PermGroup A(6, {a * a * z}), Z(6, {z});
  auto H = extend(G, {A, Z}, none);
  ASSERT_EQ(H.size(), 2u);
  EXPECT_TRUE(H[0].same_as(A));  // input order decides which one is kept
  EXPECT_EQ(H[1].order(), 8u);
  EXPECT_FALSE(H[1].contains(z) && H[1].contains(a * a * z));
  auto H2 = extend(G, {Z, A}, none);
  ASSERT_EQ(H2.size(), 2u);
  EXPECT_TRUE(H2[0].same_as(Z));
  EXPECT_TRUE(oracle_direct(G, H));
  EXPECT_TRUE(oracle_direct(G, H2));

  // already a decomposition
  auto coords = coordinates({dihedral(4), cyclic(2)});
  auto same = extend(G, coords, none);
  ASSERT_EQ(same.size(), 2u);
  EXPECT_TRUE(same[0].same_as(coords[0]));
  EXPECT_TRUE(same[1].same_as(coords[1]));

  auto E = abelian_group({2, 2, 2}).group();
  auto e3 = extend(E, {PermGroup(6, {E.gens()[0]})}, none);
  EXPECT_EQ(e3.size(), 2u);
  EXPECT_EQ(orders_of(e3), (std::vector<std::uint64_t>{2, 4}));
  EXPECT_TRUE(oracle_direct(E, e3));
}

TEST(Extend, ContractOnRandomInstances) {
  std::mt19937_64 rng(2027);
  for (int t = 0; t < 30; ++t) {
    auto in = extend_instance(rng);
    auto H = extend(in.G, in.K, none);
    auto d = make_decomposition(in.G, H, none, false);
    EXPECT_TRUE(d.is_direct);
    std::size_t fresh = 0;
    for (const auto& h : H) fresh += !same_member(h, in.K);
    EXPECT_LE(fresh, 1u);
    for (std::size_t i = 0; i < in.K.size(); ++i)
      if (in.outside[i]) EXPECT_TRUE(same_member(in.K[i], H));
  }
}

TEST(Merge, Examples) {
  auto V = klein4().group();
  auto A = remak_abelian(V, none);
  auto m = merge(A, {}, none);
  ASSERT_EQ(m.size(), A.size());

  auto G = direct_product({dihedral(4), quaternion8()}).group();
  auto Z = center(G);
  auto coords = coordinates({dihedral(4), quaternion8()});
  auto H = merge(remak_abelian(Z, none), {join(coords[0], Z), join(coords[1], Z)}, none);
  EXPECT_EQ(orders_of(H), (std::vector<std::uint64_t>{8, 8}));
  EXPECT_TRUE(oracle_direct(G, H));

  auto z42 = abelian_group({4, 2}).group();
  auto f = merge(remak_abelian(z42, none), {z42}, none);
  EXPECT_EQ(orders_of(f), (std::vector<std::uint64_t>{2, 4}));
}

TEST(CentralizeRefine, Examples) {
  auto d8 = dihedral(4).group();
  EXPECT_EQ(centralize_refine(d8, {d8}, 1).size(), 1u);
  Perm r = dihedral(4).gens[0], s = dihedral(4).gens[1];
  auto fused = centralize_refine(d8, {PermGroup(4, {r}), PermGroup(4, {s, r * r})}, 1);
  ASSERT_EQ(fused.size(), 1u);
  EXPECT_EQ(fused[0].order(), 8u);

  auto G = direct_product({dihedral(4), quaternion8()}).group();
  auto Z = center(G);
  auto coords = coordinates({dihedral(4), quaternion8()});
  auto two = centralize_refine(G, {join(coords[0], Z), join(coords[1], Z)}, 1);
  EXPECT_EQ(two.size(), 2u);
  EXPECT_THROW(centralize_refine(G, {G}, 3), precondition_error);
}

TEST(RemakClass2, Examples) {
  EXPECT_EQ(orders_of(remak_class2(abelian_group({4, 2}).group(), none)), (std::vector<std::uint64_t>{2, 4}));
  EXPECT_EQ(remak_class2(dihedral(4).group(), none).size(), 1u);
  EXPECT_EQ(orders_of(remak_class2(direct_product({dihedral(4), quaternion8()}).group(), none)), (std::vector<std::uint64_t>{8, 8}));
  EXPECT_THROW(remak_class2(dihedral(8).group(), none), precondition_error);
}

TEST(FindRemak, Examples) {
  EXPECT_EQ(find_remak(symmetric(3).group(), none).factors.size(), 1u);
  EXPECT_EQ(orders_of(find_remak(cyclic(6).group(), none).factors), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_TRUE(find_remak(cyclic(1).group(), none).factors.empty());
  auto d = find_remak(worked_example().group(), none);
  EXPECT_EQ(orders_of(d.factors), (std::vector<std::uint64_t>{8, 8, 24, 288}));
  EXPECT_TRUE(d.is_direct);
  EXPECT_TRUE(d.is_remak_claimed);
  EXPECT_FALSE(verify_certificate(d, none).has_value());
}

TEST(FindRemak, RespectsOperators) {
  auto V = klein4().group();
  Operator swap{Operator::Kind::automorphism, {V.gens()[1], V.gens()[0]}, {}};
  EXPECT_EQ(find_remak(V, OperatorSet{swap}).factors.size(), 1u);
  // S3 x S3 with the factor swap is Omega-indecomposable
  auto G = direct_product({symmetric(3), symmetric(3)}).group();
  Perm s = cyc(6, {{1, 4}, {2, 5}, {3, 6}});
  std::vector<ElementMap> sw{[s](const Perm& x) { return conj(x, s); }};
  auto d = find_remak(G, sw);
  EXPECT_EQ(d.factors.size(), 1u);
  EXPECT_TRUE(d.omega_stable);
}

TEST(ReduceGeneral, Examples) {
  auto V = klein4().group();
  auto G = V;
  std::vector<ElementMap> id{[](const Perm& x) { return x; }};
  auto same = reduce_general_operators(G, id);
  EXPECT_EQ(same.parts.size(), 1u);

  Perm e0 = V.gens()[0];
  Operator proj{Operator::Kind::endomorphism, {e0, Perm::identity(4)}, {}};
  BoundOperators bp(V, {proj});
  auto split = reduce_general_operators(V, bp.maps());
  ASSERT_EQ(split.parts.size(), 2u);
  EXPECT_EQ(orders_of(split.decomposition.factors), (std::vector<std::uint64_t>{2, 2}));
  EXPECT_TRUE(split.decomposition.is_direct);

  auto z4 = cyclic(4).group();
  Operator sq{Operator::Kind::endomorphism, {z4.gens()[0].pow(2)}, {}};
  BoundOperators bs(z4, {sq});
  auto nil = reduce_general_operators(z4, bs.maps());
  EXPECT_EQ(nil.parts.size(), 1u);
  EXPECT_EQ(nil.decomposition.factors.size(), 1u);
  // decompose picks the Fitting route by itself
  EXPECT_EQ(decompose(V, {proj}).factors.size(), 2u);
}

TEST(Certificate, VerifiesAndCatchesTampering) {
  for (const auto& e : sample(300)) {
    auto G = e.gens.group();
    auto d = find_remak(G, none);
    ASSERT_TRUE(d.is_direct) << e.gens.name;
    EXPECT_FALSE(verify_certificate(d, none).has_value()) << e.gens.name;
    if (d.factors.size() < 2) continue;
    auto bad = d;
    bad.factors.pop_back();
    EXPECT_TRUE(verify_certificate(bad, none).has_value()) << e.gens.name;
    auto worse = d;
    worse.certificate.factor_orders[0] *= 2;
    EXPECT_TRUE(verify_certificate(worse, none).has_value()) << e.gens.name;
  }
}

TEST(FindRemak, KrullSchmidtInvariance) {
  std::mt19937_64 rng(77);
  for (const auto& e : sample(2000)) {
    if (rng() % 4) continue;
    auto base = orders_of(find_remak(e.gens.group(), none).factors);
    auto g = e.gens;
    std::shuffle(g.gens.begin(), g.gens.end(), rng);
    if (!g.gens.empty()) g.gens.push_back(g.gens.front() * g.gens.back());
    Perm s = random_perm(g.degree, rng);
    for (auto& x : g.gens) x = conj(x, s);
    EXPECT_EQ(orders_of(find_remak(g.group(), none).factors), base) << e.gens.name;
  }
}

TEST(FindRemak, CentersAreGraded) {
  for (const auto& e : sample(2000)) {
    auto G = e.gens.group();
    auto Z = center(G);
    for (const auto& F : find_remak(G, none).factors) {
      if (F.is_abelian()) continue;
      auto ZF = center(F);
      EXPECT_TRUE(ZF.is_subgroup_of(Z)) << e.gens.name;
      std::uint64_t meet = 0;
      Z.for_each_element([&](const Perm& z) { meet += F.contains(z); });
      EXPECT_EQ(ZF.order(), meet) << e.gens.name;
    }
  }
}

TEST(FindRemak, MatchesOracle) {
  for (const auto& e : sample(500)) {
    auto d = find_remak(e.gens.group(), none);
    EXPECT_EQ(orders_of(d.factors), oracle::remak_orders(small(e.gens))) << e.gens.name;
  }
}
