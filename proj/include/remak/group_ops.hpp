#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "perm_group.hpp"

namespace remak {

using ElementMap = std::function<Perm(const Perm&)>;

inline PermGroup subgroup(std::size_t degree, const std::vector<Perm>& gens) { return PermGroup::reduced(degree, gens); }

inline PermGroup join(const PermGroup& A, const PermGroup& B) {
  std::vector<Perm> g = A.gens();
  g.insert(g.end(), B.gens().begin(), B.gens().end());
  return PermGroup::reduced(A.degree(), g);
}

inline PermGroup join(std::size_t degree, const std::vector<PermGroup>& parts) {
  std::vector<Perm> g;
  for (const auto& P : parts) g.insert(g.end(), P.gens().begin(), P.gens().end());
  return PermGroup::reduced(degree, g);
}

// Smallest subgroup containing S closed under conjugation by G and the maps.
inline PermGroup normal_closure(const PermGroup& G, const std::vector<Perm>& S, const std::vector<ElementMap>& maps = {}) {
  for (const auto& s : S)
    if (!G.contains(s)) throw precondition_error("normal closure: element outside the group");
  detail::ChainBuilder b(G.degree(), {});
  std::deque<Perm> todo;
  for (const auto& s : S)
    if (b.add_generator(s, false)) todo.push_back(s);
  while (!todo.empty()) {
    Perm x = todo.front();
    todo.pop_front();
    for (const auto& g : G.gens()) {
      Perm y = conj(x, g);
      if (b.add_generator(y, false)) todo.push_back(y);
    }
    for (const auto& f : maps) {
      Perm y = f(x);
      if (b.add_generator(y, false)) todo.push_back(y);
    }
  }
  return PermGroup::from_builder(std::move(b));
}

// conjugate (or map image) of a generator of H lying outside H
inline std::optional<Perm> normality_witness(const PermGroup& G, const PermGroup& H, const std::vector<ElementMap>& maps = {}) {
  for (const auto& h : H.gens()) {
    for (const auto& g : G.gens()) {
      Perm y = conj(h, g);
      if (!H.contains(y)) return y;
    }
    for (const auto& f : maps) {
      Perm y = f(h);
      if (!H.contains(y)) return y;
    }
  }
  return std::nullopt;
}

inline bool is_normal(const PermGroup& G, const PermGroup& H, const std::vector<ElementMap>& maps = {}) {
  return !normality_witness(G, H, maps).has_value();
}

// Kernel of the homomorphism G -> Sym(m) given by generator images. Built as
// the stabilizer of the image base inside the graph group on n+m points.
inline PermGroup kernel_of(const PermGroup& G, const std::vector<Perm>& images, std::size_t m) {
  const std::size_t n = G.degree();
  if (images.size() != G.gens().size()) throw invalid_input("kernel_of: wrong number of images");
  PermGroup I(m, images);
  std::vector<point> prefix;
  for (point b : I.base()) prefix.push_back(static_cast<point>(b + n));
  std::vector<Perm> diag;
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::vector<point> img(n + m);
    for (point x = 0; x < n; ++x) img[x] = G.gens()[i][x];
    for (point x = 0; x < m; ++x) img[n + x] = static_cast<point>(images[i][x] + n);
    diag.push_back(Perm::from_images(std::move(img)));
  }
  PermGroup D = PermGroup::reduced(n + m, diag, prefix);
  const auto& ch = D.chain();
  std::vector<Perm> kg;
  if (ch.levels.size() > prefix.size()) {
    for (auto s : ch.levels[prefix.size()].gens) {
      std::vector<point> img(ch.strong[s].images().begin(), ch.strong[s].images().begin() + static_cast<long>(n));
      kg.push_back(Perm::from_images(std::move(img)));
    }
  }
  return PermGroup::reduced(n, kg);
}

// Conjugation action of G on the union of the G-classes of some elements.
struct ClassAction {
  std::vector<Perm> points;
  std::unordered_map<Perm, point, perm_hash> index;
  std::vector<Perm> images;  // action of each generator of G

  Perm act(const Perm& g) const {
    std::vector<point> img(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) img[i] = index.at(conj(points[i], g));
    return Perm::from_images(std::move(img));
  }
};

inline ClassAction class_action(const PermGroup& G, const std::vector<Perm>& seeds, std::uint64_t bound) {
  ClassAction a;
  auto add = [&](const Perm& x) {
    if (a.index.count(x)) return;
    if (a.points.size() >= bound) throw resource_bound("conjugation action exceeds the configured bound of " + std::to_string(bound) + " points");
    a.index.emplace(x, static_cast<point>(a.points.size()));
    a.points.push_back(x);
  };
  for (const auto& s : seeds)
    if (!s.is_identity()) add(s);
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (const auto& g : G.gens()) add(conj(a.points[i], g));
  for (const auto& g : G.gens()) {
    std::vector<point> img(a.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) img[i] = a.index.at(conj(a.points[i], g));
    a.images.push_back(Perm::from_images(std::move(img)));
  }
  return a;
}

constexpr std::uint64_t default_action_bound = 1000000;

inline PermGroup centralizer_of_normal(const PermGroup& G, const PermGroup& H, std::uint64_t bound = default_action_bound) {
  if (auto w = normality_witness(G, H)) throw precondition_error("subgroup is not normal; conjugate " + w->str() + " lies outside");
  auto a = class_action(G, H.gens(), bound);
  return kernel_of(G, a.images, a.points.size());
}

inline PermGroup center(const PermGroup& G, std::uint64_t bound = default_action_bound) {
  auto a = class_action(G, G.gens(), bound);
  return kernel_of(G, a.images, a.points.size());
}

// G/Z(G) realized as the conjugation action on the classes of the generators.
struct CentralQuotient {
  PermGroup source;
  ClassAction action;
  PermGroup quotient;  // generators aligned with source.gens()
  PermGroup kernel;

  Perm image(const Perm& g) const { return action.act(g); }

  Perm lift(const Perm& q) const {
    auto h = perm_hom(quotient, source.gens(), source.degree());
    return h(q);
  }

  std::vector<Perm> lift_all(const std::vector<Perm>& qs) const {
    auto h = perm_hom(quotient, source.gens(), source.degree());
    std::vector<Perm> out;
    for (const auto& q : qs) out.push_back(h(q));
    return out;
  }

  PermGroup pullback(const PermGroup& U) const {
    std::vector<Perm> g = kernel.gens();
    auto l = lift_all(U.gens());
    g.insert(g.end(), l.begin(), l.end());
    return PermGroup::reduced(source.degree(), g);
  }
};

inline CentralQuotient central_quotient(const PermGroup& G, std::uint64_t bound = default_action_bound) {
  CentralQuotient q{G, class_action(G, G.gens(), bound), PermGroup(), PermGroup()};
  q.quotient = PermGroup(q.action.points.size(), q.action.images);
  q.kernel = kernel_of(G, q.action.images, q.action.points.size());
  return q;
}

// 1 = zeta_0 <= zeta_1 <= ... until it stabilizes
inline std::vector<PermGroup> upper_central_series(const PermGroup& G, std::uint64_t bound = default_action_bound) {
  std::vector<PermGroup> out{PermGroup::trivial(G.degree())};
  std::vector<CentralQuotient> qs;
  PermGroup cur = G;
  for (;;) {
    qs.push_back(central_quotient(cur, bound));
    PermGroup z = qs.back().kernel;
    for (std::size_t i = qs.size() - 1; i-- > 0;) z = qs[i].pullback(z);
    if (z.order() == out.back().order()) break;
    out.push_back(z);
    if (z.order() == G.order()) break;
    cur = qs.back().quotient;
  }
  return out;
}

// zeta_c(G) for small c
inline PermGroup zeta(const PermGroup& G, int c, std::uint64_t bound = default_action_bound) {
  if (c <= 0) return PermGroup::trivial(G.degree());
  std::vector<CentralQuotient> qs;
  PermGroup cur = G;
  for (int i = 0; i < c; ++i) {
    qs.push_back(central_quotient(cur, bound));
    cur = qs.back().quotient;
    if (qs.back().kernel.is_trivial()) break;
  }
  PermGroup z = qs.back().kernel;
  for (std::size_t i = qs.size() - 1; i-- > 0;) z = qs[i].pullback(z);
  return z;
}

// [A,B] for normal subgroups A, B of G
inline PermGroup commutator_subgroup(const PermGroup& G, const PermGroup& A, const PermGroup& B) {
  std::vector<Perm> c;
  for (const auto& a : A.gens())
    for (const auto& b : B.gens()) c.push_back(comm(a, b));
  return normal_closure(G, c);
}

inline std::vector<PermGroup> lower_central_series(const PermGroup& G) {
  std::vector<PermGroup> out{PermGroup::reduced(G.degree(), G.gens())};
  for (;;) {
    PermGroup next = commutator_subgroup(G, out.back(), G);
    bool stable = next.order() == out.back().order();
    out.push_back(next);
    if (stable || next.is_trivial()) break;
  }
  return out;
}

// nilpotency class, or -1 when not nilpotent
inline int nilpotency_class(const PermGroup& G) {
  auto s = lower_central_series(G);
  if (!s.back().is_trivial()) return -1;
  return static_cast<int>(s.size()) - 1 - (G.is_trivial() ? 1 : 0);
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    ps.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

// p-part of a nilpotent group: generated by the p-parts of the generators
inline PermGroup primary_part(const PermGroup& G, std::uint64_t p) {
  std::uint64_t n = G.order(), m = n;
  while (m % p == 0) m /= p;
  std::vector<Perm> g;
  for (const auto& x : G.gens()) g.push_back(x.pow(static_cast<long long>(m)));
  return PermGroup::reduced(G.degree(), g);
}

}  // namespace remak
