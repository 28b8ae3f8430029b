#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "perm.hpp"
#include "slp.hpp"

namespace remak {

namespace detail {

constexpr std::uint32_t no_node = UINT32_MAX;  // the identity in the word pool

struct Level {
  point base = 0;
  std::vector<std::uint32_t> gens;  // indices into Chain::strong
  std::vector<std::int32_t> pos;    // point -> orbit index, -1 outside
  std::vector<point> orbit;
  std::vector<Perm> u, u_inv;       // u[j] maps base to orbit[j]
  std::vector<std::uint32_t> u_node;
  std::vector<std::vector<char>> done;  // schreier pairs (orbit j, gen t) already sifted
};

// Stabilizer chain plus a pool of words over the input generators. Every
// strong generator and transversal element has a node in the pool.
struct Chain {
  std::size_t degree = 0;
  std::vector<Perm> gens;
  std::vector<Perm> strong;
  std::vector<std::uint32_t> strong_node;
  std::vector<Level> levels;
  std::vector<SlpStep> pool;
};

// Deterministic incremental Schreier-Sims. New base points are the smallest
// point moved by the element that forces a new level.
class ChainBuilder {
 public:
  ChainBuilder(std::size_t degree, const std::vector<point>& prefix) {
    c_.degree = degree;
    for (point b : prefix) {
      if (b >= degree) throw invalid_input("base point out of range");
      add_level(b);
    }
  }

  // Registers g as the next input generator. With keep = false a generator
  // already in the group is not registered at all.
  bool add_generator(const Perm& g, bool keep) {
    if (g.degree() != c_.degree) throw invalid_input("generator degree mismatch");
    bool inside = g.is_identity() || sifts(g);
    if (inside && !keep) return false;
    auto idx = static_cast<std::uint32_t>(c_.gens.size());
    c_.gens.push_back(g);
    c_.pool.push_back({SlpStep::Op::gen, idx, 0, 0});
    if (inside) return false;
    auto node = static_cast<std::uint32_t>(c_.pool.size() - 1);
    std::size_t top = add_strong(g, node, 0);
    run(top);
    return true;
  }

  bool sifts(const Perm& g) const {
    Perm h = g;
    for (const auto& L : c_.levels) {
      auto k = L.pos[h[L.base]];
      if (k < 0) return false;
      h = h * L.u_inv[k];
    }
    return h.is_identity();
  }

  Chain take() { return std::move(c_); }

 private:
  Chain c_;

  std::uint32_t mul_node(std::uint32_t a, std::uint32_t b) {
    if (a == no_node) return b;
    if (b == no_node) return a;
    c_.pool.push_back({SlpStep::Op::mul, a, b, 0});
    return static_cast<std::uint32_t>(c_.pool.size() - 1);
  }
  std::uint32_t inv_node(std::uint32_t a) {
    if (a == no_node) return a;
    c_.pool.push_back({SlpStep::Op::inv, a, 0, 0});
    return static_cast<std::uint32_t>(c_.pool.size() - 1);
  }

  void add_level(point b) {
    Level L;
    L.base = b;
    L.pos.assign(c_.degree, -1);
    L.pos[b] = 0;
    L.orbit = {b};
    L.u = {Perm::identity(c_.degree)};
    L.u_inv = L.u;
    L.u_node = {no_node};
    L.done = {{}};
    c_.levels.push_back(std::move(L));
  }

  // Adds h (which fixes the bases of levels < from) as a strong generator on
  // every level whose stabilizer contains it. Returns the deepest such level.
  std::size_t add_strong(const Perm& h, std::uint32_t node, std::size_t from) {
    auto s = static_cast<std::uint32_t>(c_.strong.size());
    c_.strong.push_back(h);
    c_.strong_node.push_back(node);
    std::size_t l = from;
    for (;; ++l) {
      if (l == c_.levels.size()) add_level(h.first_moved());
      extend_level(l, s);
      if (h[c_.levels[l].base] != c_.levels[l].base) break;
    }
    return l;
  }

  void extend_level(std::size_t l, std::uint32_t s) {
    Level& L = c_.levels[l];
    L.gens.push_back(s);
    for (auto& row : L.done) row.push_back(0);
    std::size_t old = L.orbit.size();
    for (std::size_t j = 0; j < L.orbit.size(); ++j) {
      for (std::uint32_t t : L.gens) {
        if (j < old && t != s) continue;
        point g = c_.strong[t][L.orbit[j]];
        if (L.pos[g] >= 0) continue;
        L.pos[g] = static_cast<std::int32_t>(L.orbit.size());
        L.orbit.push_back(g);
        L.u.push_back(L.u[j] * c_.strong[t]);
        L.u_inv.push_back(L.u.back().inverse());
        L.u_node.push_back(mul_node(L.u_node[j], c_.strong_node[t]));
        L.done.emplace_back(L.gens.size(), 0);
      }
    }
  }

  void run(std::size_t start) {
    long i = static_cast<long>(start);
    while (i >= 0) {
      bool restart = false;
      auto li = static_cast<std::size_t>(i);
      for (std::size_t j = 0; j < c_.levels[li].orbit.size() && !restart; ++j) {
        for (std::size_t t = 0; t < c_.levels[li].gens.size(); ++t) {
          Level& L = c_.levels[li];
          if (L.done[j][t]) continue;
          L.done[j][t] = 1;
          std::uint32_t s = L.gens[t];
          auto k = static_cast<std::size_t>(L.pos[c_.strong[s][L.orbit[j]]]);
          Perm sch = L.u[j] * c_.strong[s];
          if (sch == L.u[k]) continue;
          sch = sch * L.u_inv[k];
          std::vector<std::size_t> path;
          std::size_t lvl = li + 1;
          for (; lvl < c_.levels.size(); ++lvl) {
            const Level& M = c_.levels[lvl];
            auto q = M.pos[sch[M.base]];
            if (q < 0) break;
            path.push_back(static_cast<std::size_t>(q));
            sch = sch * M.u_inv[q];
          }
          if (sch.is_identity()) continue;
          std::uint32_t node = mul_node(mul_node(L.u_node[j], c_.strong_node[s]), inv_node(L.u_node[k]));
          for (std::size_t q = 0; q < path.size(); ++q)
            node = mul_node(node, inv_node(c_.levels[li + 1 + q].u_node[path[q]]));
          i = static_cast<long>(add_strong(sch, node, li + 1));
          restart = true;
          break;
        }
      }
      if (!restart) --i;
    }
  }
};

}  // namespace detail

struct Membership {
  bool member = false;
  Slp slp;       // over the group's generators when member
  Perm residue;  // sift remainder otherwise
};

// Immutable permutation group with a complete stabilizer chain.
class PermGroup {
 public:
  PermGroup() : PermGroup(0, {}) {}

  // Keeps every generator (so SLP indices match the input list).
  PermGroup(std::size_t degree, const std::vector<Perm>& gens, const std::vector<point>& prefix = {}) {
    detail::ChainBuilder b(degree, prefix);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      try {
        b.add_generator(gens[i], true);
      } catch (const invalid_input&) {
        throw invalid_input("generator " + std::to_string(i + 1) + " has the wrong degree");
      }
    }
    chain_ = std::make_shared<const detail::Chain>(b.take());
  }

  // Drops generators already in the span of earlier ones.
  static PermGroup reduced(std::size_t degree, const std::vector<Perm>& gens, const std::vector<point>& prefix = {}) {
    detail::ChainBuilder b(degree, prefix);
    for (const auto& g : gens) b.add_generator(g, false);
    PermGroup G(nullptr);
    G.chain_ = std::make_shared<const detail::Chain>(b.take());
    return G;
  }

  static PermGroup trivial(std::size_t degree) { return PermGroup(degree, {}); }

  static PermGroup from_builder(detail::ChainBuilder&& b) {
    PermGroup G(nullptr);
    G.chain_ = std::make_shared<const detail::Chain>(b.take());
    return G;
  }

  std::size_t degree() const { return chain_->degree; }
  const std::vector<Perm>& gens() const { return chain_->gens; }
  const detail::Chain& chain() const { return *chain_; }
  Perm identity() const { return Perm::identity(degree()); }

  std::vector<point> base() const {
    std::vector<point> b;
    for (const auto& L : chain_->levels) b.push_back(L.base);
    return b;
  }

  std::uint64_t order() const {
    std::uint64_t n = 1;
    for (const auto& L : chain_->levels) {
      std::uint64_t m = L.orbit.size();
      if (n > UINT64_MAX / m) throw resource_bound("group order overflows 64 bits");
      n *= m;
    }
    return n;
  }

  bool is_trivial() const { return order() == 1; }

  // orbit indices along the sift, empty optional if g is not a member
  std::optional<std::vector<std::uint32_t>> sift_path(const Perm& g) const {
    check_degree(g);
    std::vector<std::uint32_t> path;
    Perm h = g;
    for (const auto& L : chain_->levels) {
      auto k = L.pos[h[L.base]];
      if (k < 0) return std::nullopt;
      path.push_back(static_cast<std::uint32_t>(k));
      h = h * L.u_inv[k];
    }
    if (!h.is_identity()) return std::nullopt;
    return path;
  }

  bool contains(const Perm& g) const { return sift_path(g).has_value(); }

  Membership membership(const Perm& g) const {
    check_degree(g);
    Membership m;
    if (g.is_identity()) {
      m.member = true;
      return m;
    }
    for (std::size_t i = 0; i < gens().size(); ++i)
      if (gens()[i] == g) {
        m.member = true;
        m.slp = Slp::generator(static_cast<std::uint32_t>(i));
        return m;
      }
    Perm h = g;
    std::vector<std::uint32_t> nodes;
    for (const auto& L : chain_->levels) {
      auto k = L.pos[h[L.base]];
      if (k < 0) break;
      nodes.push_back(L.u_node[k]);
      h = h * L.u_inv[k];
    }
    if (!h.is_identity()) {
      m.residue = h;
      return m;
    }
    m.member = true;
    // g = u_k ... u_1; copy the needed part of the pool
    std::unordered_map<std::uint32_t, std::uint32_t> map;
    Slp out;
    std::uint32_t acc = detail::no_node;
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
      if (*it == detail::no_node) continue;
      std::uint32_t n = copy_node(*it, out, map);
      acc = acc == detail::no_node ? n : out.mul(acc, n);
    }
    if (acc != detail::no_node && acc + 1 != out.size()) out.pow(acc, 1);
    m.slp = std::move(out);
    return m;
  }

  bool is_subgroup_of(const PermGroup& G) const {
    for (const auto& g : gens())
      if (!G.contains(g)) return false;
    return true;
  }

  bool same_as(const PermGroup& H) const { return order() == H.order() && is_subgroup_of(H); }

  bool is_abelian() const {
    const auto& g = gens();
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j)
        if (g[i] * g[j] != g[j] * g[i]) return false;
    return true;
  }

  template <class F>
  void for_each_element(F f) const {
    std::vector<Perm> cur{identity()};
    for (auto it = chain_->levels.rbegin(); it != chain_->levels.rend(); ++it) {
      std::vector<Perm> next;
      next.reserve(cur.size() * it->u.size());
      for (const auto& x : cur)
        for (const auto& u : it->u) next.push_back(x * u);
      cur.swap(next);
    }
    for (const auto& x : cur) f(x);
  }

  std::vector<Perm> elements(std::uint64_t bound = 5000000) const {
    if (order() > bound) throw resource_bound("element enumeration bound exceeded");
    std::vector<Perm> out;
    for_each_element([&](const Perm& x) { out.push_back(x); });
    return out;
  }

  std::vector<Perm> sorted_elements(std::uint64_t bound = 5000000) const {
    auto e = elements(bound);
    std::sort(e.begin(), e.end());
    return e;
  }

 private:
  std::shared_ptr<const detail::Chain> chain_;

  explicit PermGroup(std::nullptr_t) {}

  void check_degree(const Perm& g) const {
    if (g.degree() != degree()) throw invalid_input("permutation degree does not match the group");
  }

  std::uint32_t copy_node(std::uint32_t root, Slp& out, std::unordered_map<std::uint32_t, std::uint32_t>& map) const {
    const auto& pool = chain_->pool;
    std::vector<std::pair<std::uint32_t, bool>> st{{root, false}};
    while (!st.empty()) {
      auto [n, expanded] = st.back();
      st.pop_back();
      if (map.count(n)) continue;
      const auto& s = pool[n];
      if (!expanded) {
        st.push_back({n, true});
        if (s.op == SlpStep::Op::mul) {
          st.push_back({s.b, false});
          st.push_back({s.a, false});
        } else if (s.op == SlpStep::Op::inv) {
          st.push_back({s.a, false});
        }
        continue;
      }
      switch (s.op) {
        case SlpStep::Op::gen: map[n] = out.gen(s.a); break;
        case SlpStep::Op::mul: map[n] = out.mul(map.at(s.a), map.at(s.b)); break;
        case SlpStep::Op::inv: map[n] = out.inv(map.at(s.a)); break;
        case SlpStep::Op::pow: map[n] = out.pow(map.at(s.a), s.k); break;
      }
    }
    return map.at(root);
  }
};

// Evaluates the homomorphism defined by generator images on any element,
// through the chain's word pool. T needs mul and inv.
template <class T>
class ChainHom {
 public:
  using mul_fn = std::function<T(const T&, const T&)>;
  using inv_fn = std::function<T(const T&)>;

  ChainHom(const PermGroup& G, const std::vector<T>& gen_vals, T id, mul_fn mul, inv_fn inv)
      : G_(G), id_(std::move(id)), mul_(std::move(mul)), inv_(std::move(inv)) {
    const auto& pool = G.chain().pool;
    if (gen_vals.size() != G.gens().size()) throw invalid_input("wrong number of generator images");
    vals_.reserve(pool.size());
    for (const auto& s : pool) {
      switch (s.op) {
        case SlpStep::Op::gen: vals_.push_back(gen_vals[s.a]); break;
        case SlpStep::Op::mul: vals_.push_back(mul_(vals_[s.a], vals_[s.b])); break;
        case SlpStep::Op::inv: vals_.push_back(inv_(vals_[s.a])); break;
        case SlpStep::Op::pow: throw invalid_input("unexpected pool step");
      }
    }
  }

  T operator()(const Perm& g) const {
    auto path = G_.sift_path(g);
    if (!path) throw precondition_error("element outside the domain of a homomorphism");
    const auto& lv = G_.chain().levels;
    T acc = id_;
    for (std::size_t l = path->size(); l-- > 0;) {
      auto n = lv[l].u_node[(*path)[l]];
      if (n != detail::no_node) acc = mul_(acc, vals_[n]);
    }
    return acc;
  }

  const PermGroup& domain() const { return G_; }

 private:
  PermGroup G_;
  T id_;
  mul_fn mul_;
  inv_fn inv_;
  std::vector<T> vals_;
};

// homomorphism into a permutation group of degree m
inline ChainHom<Perm> perm_hom(const PermGroup& G, const std::vector<Perm>& images, std::size_t m) {
  return ChainHom<Perm>(
      G, images, Perm::identity(m), [](const Perm& a, const Perm& b) { return a * b; },
      [](const Perm& a) { return a.inverse(); });
}

}  // namespace remak
