#include <gtest/gtest.h>

#include <remak/ring.hpp>

#include "ring_corpus.hpp"

using namespace remak;
using namespace remak::testing;

namespace {

FiniteCommRing f2xf2() { return ring_from_structure_constants(2, 1, 2, {{{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}}, {1, 1}); }

}  // namespace

TEST(Construction, Examples) {
  auto Z = ring_from_structure_constants(5, 2, 1, {{{1}}}, {1});
  EXPECT_EQ(ring_size(Z), 25u);
  EXPECT_EQ(frame(Z).size(), 1u);
  auto F = f2xf2();
  EXPECT_EQ(brute_frame_size(F), 2u);
  // F2[x]/(x^2), basis 1, x
  auto L = ring_from_structure_constants(2, 1, 2, {{{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}}, {1, 0});
  EXPECT_EQ(frame(L).size(), 1u);
  EXPECT_EQ(nilpotency_index(L, {0, 1}), 2);
}

TEST(Construction, Rejections) {
  // not commutative: b1 b2 = b1, b2 b1 = b2
  EXPECT_THROW(ring_from_structure_constants(2, 1, 2, {{{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}}, {1, 0}), invalid_input);
  // one is not an identity
  EXPECT_THROW(ring_from_structure_constants(2, 1, 2, {{{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}}, {1, 0}), invalid_input);
  // not associative: b2 b2 = b3, b2 b3 = b2, b3 b3 = 0, so (b2 b2) b3 != b2 (b2 b3)
  try {
    ring_from_structure_constants(2, 1, 3,
                                  {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 0}, {0, 0, 1}, {0, 1, 0}}, {{0, 0, 1}, {0, 1, 0}, {0, 0, 0}}},
                                  {1, 0, 0});
    FAIL();
  } catch (const invalid_input& e) {
    EXPECT_NE(std::string(e.what()).find("associative"), std::string::npos);
  }
  EXPECT_THROW(ring_from_structure_constants(4, 1, 1, {{{1}}}, {1}), invalid_input);
  EXPECT_THROW(ring_from_structure_constants(2, 1, 2, {{{1, 0}}}, {1, 0}), invalid_input);
}

TEST(Lift, Examples) {
  auto F = f2xf2();
  EXPECT_EQ(lift_idempotent(F, {1, 0}), (Vec{1, 0}));
  auto Z4 = zpe_ring(2, 2);
  EXPECT_EQ(lift_idempotent(Z4, {3}), (Vec{1}));
  auto Z9 = zpe_ring(3, 2);
  EXPECT_EQ(lift_idempotent(Z9, {4}), (Vec{1}));
  EXPECT_THROW(lift_idempotent(zpe_ring(5, 1), {2}), precondition_error);
}

TEST(Frame, Examples) {
  EXPECT_EQ(frame(zpe_ring(2, 2)), (std::vector<Vec>{{1}}));
  EXPECT_EQ(frame(f2xf2()), (std::vector<Vec>{{1, 0}, {0, 1}}));
  // {a I + b I'} inside End(V) (+) End(W) for a two-block form: as a ring, Z2 (+) Z2
  auto C = ring_sum(zpe_ring(2, 1), zpe_ring(2, 1));
  EXPECT_EQ(frame(C).size(), 2u);
}

class RingCorpus : public ::testing::TestWithParam<std::size_t> {
 protected:
  static const std::vector<NamedRing>& rings() {
    static const auto r = ring_corpus();
    return r;
  }
};

TEST(RingCorpusShape, FiftyRingsWithinBound) {
  auto r = ring_corpus();
  EXPECT_EQ(r.size(), 50u);
  for (const auto& x : r) EXPECT_LE(ring_size(x.ring), 4096u) << x.name;
}

TEST_P(RingCorpus, FrameIsOrthogonalPrimitiveAndComplete) {
  const auto& [name, R] = rings()[GetParam()];
  auto F = frame(R);
  Vec sum = R.zero();
  for (std::size_t i = 0; i < F.size(); ++i) {
    EXPECT_TRUE(R.is_idempotent(F[i])) << name;
    EXPECT_FALSE(R.is_zero(F[i])) << name;
    for (std::size_t j = 0; j < F.size(); ++j)
      if (i != j) EXPECT_TRUE(R.is_zero(R.mul(F[i], F[j]))) << name;
    sum = R.add(sum, F[i]);
  }
  EXPECT_TRUE(R.equal(sum, R.one())) << name;
  EXPECT_EQ(F.size(), brute_frame_size(R)) << name;
  EXPECT_EQ(frame(R), F) << name;  // repeatable
}

TEST_P(RingCorpus, LiftsEveryNearIdempotent) {
  const auto& [name, R] = rings()[GetParam()];
  std::size_t tested = 0;
  for_each_ring_element(R, [&](const Vec& e) {
    if (nilpotency_index(R, R.sub(R.mul(e, e), e)) == 0) return;
    Vec h = lift_idempotent(R, e);
    EXPECT_TRUE(R.is_idempotent(h)) << name;
    EXPECT_TRUE(R.equal(lift_idempotent(R, R.sub(R.one(), e)), R.sub(R.one(), h))) << name;
    EXPECT_NE(nilpotency_index(R, R.sub(h, e)), 0) << name;  // h = e modulo nilpotents
    ++tested;
  });
  EXPECT_GT(tested, 0u);
}

TEST_P(RingCorpus, FrameIsInvariantUnderRelabelling) {
  const auto& [name, R] = rings()[GetParam()];
  if (R.n() < 2) return;
  std::vector<std::size_t> perm(R.n());
  for (std::size_t k = 0; k < R.n(); ++k) perm[k] = R.n() - 1 - k;
  auto S = ring_relabel(R, perm);
  auto F = frame(R), G = frame(S);
  ASSERT_EQ(F.size(), G.size()) << name;
  std::vector<Vec> mapped;
  for (const auto& e : F) {
    Vec v(R.n());
    for (std::size_t k = 0; k < R.n(); ++k) v[perm[k]] = e[k];
    mapped.push_back(S.reduce(v));
  }
  std::sort(mapped.begin(), mapped.end());
  std::sort(G.begin(), G.end());
  EXPECT_EQ(mapped, G) << name;
}

INSTANTIATE_TEST_SUITE_P(All, RingCorpus, ::testing::Range<std::size_t>(0, 50));
