#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "group_ops.hpp"

namespace remak {

// An endomorphism of an ambient group, given by images of its generators.
// Inner maps also remember the conjugating element so they can be applied
// without a word evaluation.
struct Operator {
  enum class Kind { automorphism, endomorphism };
  Kind kind = Kind::automorphism;
  std::vector<Perm> images;
  std::optional<Perm> conjugator;
};

using OperatorSet = std::vector<Operator>;

// Operators bound to the group whose generators they map.
class BoundOperators {
 public:
  BoundOperators() = default;
  BoundOperators(const PermGroup& G, const OperatorSet& ops) : G_(G), ops_(ops) {
    for (const auto& o : ops_) {
      if (o.images.size() != G.gens().size()) throw invalid_input("operator needs one image per generator");
      if (o.conjugator)
        homs_.push_back(nullptr);
      else
        homs_.push_back(std::make_shared<ChainHom<Perm>>(perm_hom(G, o.images, G.degree())));
    }
  }

  std::size_t size() const { return ops_.size(); }
  const OperatorSet& ops() const { return ops_; }
  const PermGroup& group() const { return G_; }

  Perm apply(std::size_t i, const Perm& x) const {
    if (ops_[i].conjugator) return conj(x, *ops_[i].conjugator);
    return (*homs_[i])(x);
  }

  std::vector<ElementMap> maps() const {
    std::vector<ElementMap> m;
    for (std::size_t i = 0; i < size(); ++i) m.push_back([this, i](const Perm& x) { return apply(i, x); });
    return m;
  }

 private:
  PermGroup G_;
  OperatorSet ops_;
  std::vector<std::shared_ptr<ChainHom<Perm>>> homs_;
};

// conjugation by the generators of K, as operators on U
inline OperatorSet inner_operators(const PermGroup& K, const PermGroup& U) {
  OperatorSet out;
  for (const auto& k : K.gens()) {
    Operator o;
    o.conjugator = k;
    for (const auto& u : U.gens()) o.images.push_back(conj(u, k));
    out.push_back(std::move(o));
  }
  return out;
}

// Restriction to an invariant subgroup U; identity and repeated maps dropped.
inline OperatorSet restrict_operators(const BoundOperators& b, const PermGroup& U) {
  OperatorSet out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Operator o;
    o.kind = b.ops()[i].kind;
    o.conjugator = b.ops()[i].conjugator;
    for (const auto& u : U.gens()) {
      Perm y = b.apply(i, u);
      if (!U.contains(y)) throw precondition_error("operator does not stabilize the subgroup");
      o.images.push_back(std::move(y));
    }
    if (o.images == U.gens()) continue;
    bool dup = false;
    for (const auto& p : out) dup = dup || p.images == o.images;
    if (!dup) out.push_back(std::move(o));
  }
  return out;
}

inline OperatorSet with_inner(const PermGroup& G, const OperatorSet& ops, const PermGroup& U) {
  BoundOperators b(G, ops);
  OperatorSet all = restrict_operators(b, U);
  for (auto& o : inner_operators(G, U)) {
    if (o.images == U.gens()) continue;
    bool dup = false;
    for (const auto& p : all) dup = dup || p.images == o.images;
    if (!dup) all.push_back(std::move(o));
  }
  return all;
}

// Operators induced on G/Z(G).
inline OperatorSet induce_on_quotient(const PermGroup& G, const OperatorSet& ops, const CentralQuotient& q) {
  BoundOperators b(G, ops);
  OperatorSet out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Operator o;
    o.kind = ops[i].kind;
    if (ops[i].conjugator) o.conjugator = q.image(*ops[i].conjugator);
    for (const auto& g : G.gens()) o.images.push_back(q.image(b.apply(i, g)));
    if (o.images == q.quotient.gens()) continue;
    out.push_back(std::move(o));
  }
  return out;
}

// Homomorphism test: the graph subgroup <(g_i, w(g_i))> has order |G|.
inline bool is_homomorphism(const PermGroup& G, const std::vector<Perm>& images) {
  const std::size_t n = G.degree();
  std::vector<Perm> diag;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!G.contains(images[i])) return false;
    std::vector<point> img(2 * n);
    for (point x = 0; x < n; ++x) {
      img[x] = G.gens()[i][x];
      img[n + x] = static_cast<point>(images[i][x] + n);
    }
    diag.push_back(Perm::from_images(std::move(img)));
  }
  return PermGroup::reduced(2 * n, diag).order() == G.order();
}

// Checks each map and its claimed kind; throws on failure.
inline void validate_operators(const PermGroup& G, const OperatorSet& ops) {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& o = ops[i];
    if (o.images.size() != G.gens().size())
      throw invalid_input("operator " + std::to_string(i + 1) + " needs one image per generator");
    for (const auto& x : o.images)
      if (x.degree() != G.degree()) throw invalid_input("operator " + std::to_string(i + 1) + " has an image of the wrong degree");
    if (!is_homomorphism(G, o.images))
      throw invalid_input("operator " + std::to_string(i + 1) + " is not a homomorphism of the group");
    if (o.kind == Operator::Kind::automorphism && PermGroup::reduced(G.degree(), o.images).order() != G.order())
      throw invalid_input("operator " + std::to_string(i + 1) + " is flagged automorphism but is not bijective");
  }
}

inline bool is_bijective(const PermGroup& G, const Operator& o) {
  return PermGroup::reduced(G.degree(), o.images).order() == G.order();
}

}  // namespace remak
