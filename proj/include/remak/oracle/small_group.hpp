#pragma once

// Brute-force ground truth on fully enumerated groups. Shares nothing with
// the main pipeline except Perm.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "../errors.hpp"
#include "../perm.hpp"

namespace remak::oracle {

using elem = std::uint32_t;

class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : w_((n + 63) / 64, 0) {}
  void set(elem i) { w_[i >> 6] |= 1ull << (i & 63); }
  bool test(elem i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  std::size_t meet_count(const Bits& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) c += static_cast<std::size_t>(__builtin_popcountll(w_[k] & o.w_[k]));
    return c;
  }
  bool operator==(const Bits& o) const { return w_ == o.w_; }
  std::size_t hash() const {
    std::size_t h = 0;
    for (auto x : w_) h = h * 1000003u ^ std::hash<std::uint64_t>()(x);
    return h;
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct Subgroup {
  std::vector<elem> elems;  // sorted
  std::vector<elem> gens;
  Bits bits;
  std::size_t order() const { return elems.size(); }
};

class SmallGroup {
 public:
  SmallGroup(std::size_t degree, const std::vector<Perm>& gens, std::size_t bound = 5000) {
    for (const auto& g : gens)
      if (g.degree() != degree) throw invalid_input("oracle: generator degree mismatch");
    std::vector<Perm> el{Perm::identity(degree)};
    std::unordered_set<Perm, perm_hash> seen{el[0]};
    for (std::size_t i = 0; i < el.size(); ++i)
      for (const auto& g : gens) {
        Perm y = el[i] * g;
        if (seen.insert(y).second) {
          if (el.size() >= bound) throw resource_bound("oracle: group larger than the enumeration bound " + std::to_string(bound));
          el.push_back(std::move(y));
        }
      }
    std::sort(el.begin(), el.end());
    elems_ = std::move(el);
    const std::size_t n = elems_.size();
    for (elem i = 0; i < n; ++i) index_.emplace(elems_[i], i);
    id_ = index_.at(Perm::identity(degree));
    table_.assign(n * n, 0);
    for (elem i = 0; i < n; ++i)
      for (elem j = 0; j < n; ++j) table_[i * n + j] = index_.at(elems_[i] * elems_[j]);
    inv_.resize(n);
    for (elem i = 0; i < n; ++i)
      for (elem j = 0; j < n; ++j)
        if (mul(i, j) == id_) inv_[i] = j;
    for (const auto& g : gens) gen_.push_back(index_.at(g));
    // associativity against generators (Light's test)
    for (elem a : gen_)
      for (elem x = 0; x < n; ++x)
        for (elem y = 0; y < n; ++y)
          if (mul(mul(x, a), y) != mul(x, mul(a, y))) throw invalid_input("oracle: table is not associative");
    ord_.resize(n);
    for (elem i = 0; i < n; ++i) {
      std::size_t k = 1;
      for (elem x = i; x != id_; x = mul(x, i)) ++k;
      ord_[i] = k;
    }
  }

  std::size_t order() const { return elems_.size(); }
  elem identity() const { return id_; }
  elem mul(elem a, elem b) const { return table_[a * elems_.size() + b]; }
  elem inv(elem a) const { return inv_[a]; }
  elem conj(elem x, elem g) const { return mul(mul(inv(g), x), g); }
  std::size_t element_order(elem a) const { return ord_[a]; }
  const Perm& element(elem a) const { return elems_[a]; }
  elem index_of(const Perm& g) const { return index_.at(g); }
  const std::vector<elem>& generators() const { return gen_; }
  std::size_t degree() const { return elems_[0].degree(); }

  bool is_abelian() const {
    for (elem a : gen_)
      for (elem b : gen_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  Subgroup closure(const std::vector<elem>& seeds) const {
    Subgroup s;
    s.bits = Bits(order());
    s.elems = {id_};
    s.bits.set(id_);
    for (elem g : seeds)
      if (g != id_ && !s.bits.test(g)) s.gens.push_back(g);
    for (std::size_t i = 0; i < s.elems.size(); ++i)
      for (elem g : s.gens) {
        elem y = mul(s.elems[i], g);
        if (!s.bits.test(y)) s.bits.set(y), s.elems.push_back(y);
      }
    std::sort(s.elems.begin(), s.elems.end());
    return s;
  }

  Subgroup whole() const { return closure(gen_); }

  std::vector<std::vector<elem>> conjugacy_classes() const {
    std::vector<char> done(order(), 0);
    std::vector<std::vector<elem>> out;
    for (elem x = 0; x < order(); ++x) {
      if (done[x]) continue;
      std::vector<elem> cls{x};
      done[x] = 1;
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (elem g : gen_) {
          elem y = conj(cls[i], g);
          if (!done[y]) done[y] = 1, cls.push_back(y);
        }
      out.push_back(std::move(cls));
    }
    return out;
  }

 private:
  std::vector<Perm> elems_;
  std::unordered_map<Perm, elem, perm_hash> index_;
  std::vector<elem> table_, inv_, gen_;
  std::vector<std::size_t> ord_;
  elem id_ = 0;
};

// Every normal subgroup: closures of products of class closures.
inline std::vector<Subgroup> all_normal_subgroups(const SmallGroup& G, std::size_t limit = 200000) {
  std::vector<Subgroup> atoms;
  for (const auto& cls : G.conjugacy_classes()) {
    if (cls[0] == G.identity()) continue;
    // normal closure of a class: closure under multiplication of the class
    Subgroup s = G.closure(cls);
    bool dup = false;
    for (const auto& a : atoms) dup = dup || a.bits == s.bits;
    if (!dup) atoms.push_back(std::move(s));
  }
  std::vector<Subgroup> out{G.closure({})};
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;
  by_hash[out[0].bits.hash()].push_back(0);
  auto known = [&](const Subgroup& s) {
    auto it = by_hash.find(s.bits.hash());
    if (it == by_hash.end()) return false;
    for (auto i : it->second)
      if (out[i].bits == s.bits) return true;
    return false;
  };
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& a : atoms) {
      if (a.bits.subset_of(out[i].bits)) continue;
      auto seeds = out[i].gens;
      seeds.insert(seeds.end(), a.gens.begin(), a.gens.end());
      Subgroup s = G.closure(seeds);
      if (known(s)) continue;
      if (out.size() >= limit) throw resource_bound("oracle: too many normal subgroups");
      by_hash[s.bits.hash()].push_back(out.size());
      out.push_back(std::move(s));
    }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.elems < b.elems;
  });
  return out;
}

struct Verdict {
  bool ok = false;
  std::string witness;
};

// Literal check of the definition: normal parts, jointly generating, each
// meeting the span of the others trivially.
inline Verdict is_direct_decomposition(const SmallGroup& G, const std::vector<Subgroup>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].order() == 1) return {false, "part " + std::to_string(i + 1) + " is trivial"};
    for (elem h : parts[i].elems)
      for (elem g : G.generators())
        if (!parts[i].bits.test(G.conj(h, g))) return {false, "part " + std::to_string(i + 1) + " is not normal"};
  }
  std::vector<elem> all;
  for (const auto& p : parts) all.insert(all.end(), p.gens.begin(), p.gens.end());
  if (G.closure(all).order() != G.order()) return {false, "parts do not generate"};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<elem> rest;
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (j != i) rest.insert(rest.end(), parts[j].gens.begin(), parts[j].gens.end());
    if (parts[i].bits.meet_count(G.closure(rest).bits) != 1)
      return {false, "part " + std::to_string(i + 1) + " meets the others nontrivially"};
  }
  return {true, ""};
}

namespace detail {

// Abelian groups: the cyclic prime-power factor orders are read off from
// the counts of solutions of x^(p^k) = 1; factors are then found by a
// backtracking search for independent elements of those orders.
inline std::vector<std::size_t> abelian_invariants(const SmallGroup& G) {
  std::vector<std::size_t> out;
  std::size_t n = G.order();
  for (std::size_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    std::vector<std::size_t> count{1};  // count[k] = #{x : x^(p^k) = 1}
    for (std::size_t q = p;; q *= p) {
      std::size_t c = 0;
      for (elem x = 0; x < G.order(); ++x) c += q % G.element_order(x) == 0;
      count.push_back(c);
      if (c == count[count.size() - 2]) break;
    }
    // factors of order >= p^k number log_p(count[k] / count[k-1])
    std::vector<std::size_t> ge;
    for (std::size_t k = 1; k < count.size(); ++k) {
      std::size_t r = count[k] / count[k - 1], l = 0;
      while (r > 1) r /= p, ++l;
      ge.push_back(l);
    }
    std::size_t q = 1;
    for (std::size_t k = 0; k < ge.size(); ++k) {
      q *= p;
      std::size_t exactly = ge[k] - (k + 1 < ge.size() ? ge[k + 1] : 0);
      for (std::size_t i = 0; i < exactly; ++i) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline std::vector<Subgroup> abelian_remak(const SmallGroup& G) {
  auto orders = abelian_invariants(G);
  std::vector<elem> picked;
  std::function<bool(std::size_t, const Subgroup&)> pick = [&](std::size_t i, const Subgroup& span) {
    if (i == orders.size()) return span.order() == G.order();
    for (elem x = 0; x < G.order(); ++x) {
      if (G.element_order(x) != orders[i] || span.bits.test(x)) continue;
      Subgroup c = G.closure({x});
      if (c.bits.meet_count(span.bits) != 1) continue;
      picked.push_back(x);
      if (pick(i + 1, G.closure(picked))) return true;
      picked.pop_back();
    }
    return false;
  };
  if (!pick(0, G.closure({}))) throw std::logic_error("oracle: abelian factor search failed");
  std::vector<Subgroup> out;
  for (elem x : picked) out.push_back(G.closure({x}));
  return out;
}

}  // namespace detail

// Smallest-factor-first: the normal subgroup of least order that has a
// normal complement is indecomposable; split it off and recurse inside the
// complement.
inline std::vector<Subgroup> brute_remak(const SmallGroup& G) {
  if (G.order() == 1) return {};
  if (G.is_abelian()) {
    auto f = detail::abelian_remak(G);
    std::sort(f.begin(), f.end(), [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
    return f;
  }
  const auto normals = all_normal_subgroups(G);
  std::vector<Subgroup> out;
  Subgroup cur = G.whole();
  for (;;) {
    bool split = false;
    for (const auto& N : normals) {
      if (N.order() == 1) continue;
      if (N.order() * N.order() > cur.order()) break;
      if (!N.bits.subset_of(cur.bits) || cur.order() % N.order()) continue;
      std::size_t want = cur.order() / N.order();
      for (const auto& C : normals) {
        if (C.order() != want || !C.bits.subset_of(cur.bits)) continue;
        if (N.bits.meet_count(C.bits) != 1) continue;
        out.push_back(N);
        cur = C;
        split = true;
        break;
      }
      if (split) break;
    }
    if (!split) break;
  }
  out.push_back(cur);
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
  return out;
}

inline std::vector<std::size_t> remak_orders(const SmallGroup& G) {
  std::vector<std::size_t> o;
  for (const auto& f : brute_remak(G)) o.push_back(f.order());
  std::sort(o.begin(), o.end());
  return o;
}

// The subgroup as a group in its own right.
inline SmallGroup as_group(const SmallGroup& G, const Subgroup& H) {
  std::vector<Perm> g;
  for (elem x : H.gens) g.push_back(G.element(x));
  return SmallGroup(G.degree(), g);
}

// Generator-image backtracking over a small generating set of A.
inline bool isomorphic_small(const SmallGroup& A, const SmallGroup& B, std::size_t bound = 512) {
  if (A.order() != B.order()) return false;
  if (A.order() > bound) throw resource_bound("oracle: isomorphism test above its bound");
  const std::size_t n = A.order();
  auto histogram = [](const SmallGroup& X) {
    std::map<std::size_t, std::size_t> h;
    for (elem x = 0; x < X.order(); ++x) ++h[X.element_order(x)];
    return h;
  };
  if (histogram(A) != histogram(B)) return false;
  if (A.is_abelian() != B.is_abelian()) return false;
  // greedy generating set, larger element orders first
  std::vector<elem> cand(n);
  std::iota(cand.begin(), cand.end(), 0);
  std::stable_sort(cand.begin(), cand.end(), [&](elem x, elem y) { return A.element_order(x) > A.element_order(y); });
  std::vector<elem> gens;
  Subgroup span = A.closure({});
  for (elem x : cand) {
    if (span.order() == n) break;
    if (span.bits.test(x)) continue;
    gens.push_back(x);
    span = A.closure(gens);
  }
  std::vector<std::vector<elem>> options;
  for (elem g : gens) {
    std::vector<elem> o;
    for (elem y = 0; y < n; ++y)
      if (B.element_order(y) == A.element_order(g)) o.push_back(y);
    options.push_back(std::move(o));
  }
  // consistency of a partial assignment on the subgroup of its first k gens
  std::vector<elem> img(gens.size());
  auto consistent = [&](std::size_t k, bool full) {
    std::vector<elem> map(n, UINT32_MAX), order{A.identity()};
    std::vector<char> used(n, 0);
    map[A.identity()] = B.identity();
    used[B.identity()] = 1;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = 0; j < k; ++j) {
        elem x = A.mul(order[i], gens[j]), y = B.mul(map[order[i]], img[j]);
        if (map[x] == UINT32_MAX) {
          if (used[y]) return false;
          map[x] = y, used[y] = 1, order.push_back(x);
        } else if (map[x] != y) {
          return false;
        }
      }
    return !full || order.size() == n;
  };
  std::function<bool(std::size_t)> search = [&](std::size_t k) {
    if (k == gens.size()) return consistent(k, true);
    for (elem y : options[k]) {
      img[k] = y;
      if (consistent(k + 1, false) && search(k + 1)) return true;
    }
    return false;
  };
  return search(0);
}

}  // namespace remak::oracle
