#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "abelian.hpp"
#include "bilinear.hpp"
#include "minimal_normal.hpp"
#include "operators.hpp"

namespace remak {

inline std::vector<ElementMap> inner_maps(const PermGroup& G) {
  std::vector<ElementMap> m;
  for (const auto& g : G.gens())
    if (!g.is_identity()) m.push_back([g](const Perm& x) { return conj(x, g); });
  return m;
}

inline std::vector<ElementMap> concat(std::vector<ElementMap> a, const std::vector<ElementMap>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline bool generators_less(const PermGroup& A, const PermGroup& B) {
  if (A.order() != B.order()) return A.order() < B.order();
  auto a = A.gens(), b = B.gens();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a < b;
}

inline void sort_factors(std::vector<PermGroup>& f) { std::stable_sort(f.begin(), f.end(), generators_less); }

// ---------------------------------------------------------------------------
// Presentations modulo a normal subgroup

// A presentation of G/M. The generators X are the generators of G that are
// independent modulo M. Internally words live over X followed by the
// generators of M (which are read as 1), so a Sims presentation of G on that
// list becomes a presentation of G/M on X.
class Presentation {
 public:
  struct Factor {
    std::uint32_t ref;  // pool node, or generator index when !node
    bool node;
    bool inverse;
  };
  using Word = std::vector<Factor>;

  Presentation(const PermGroup& G, const PermGroup& M, std::uint64_t bound = default_action_bound) : M_(M) {
    if (!M.is_subgroup_of(G)) throw precondition_error("presentation: M is not a subgroup of G");
    if (auto w = normality_witness(G, M)) throw precondition_error("presentation: M is not normal; " + w->str() + " lies outside");
    if (G.order() / M.order() > bound) throw resource_bound("presentation: index exceeds the coset bound of " + std::to_string(bound));
    std::vector<Perm> acc = M.gens();
    PermGroup span = M;
    for (const auto& g : G.gens()) {
      if (span.contains(g)) continue;
      X_.push_back(g);
      acc.push_back(g);
      span = PermGroup::reduced(G.degree(), acc);
    }
    std::vector<Perm> cover = X_;
    cover.insert(cover.end(), M.gens().begin(), M.gens().end());
    H_ = PermGroup(G.degree(), cover);
    build();
  }

  const std::vector<Perm>& generators() const { return X_; }
  std::size_t rank() const { return X_.size(); }
  const PermGroup& modulus() const { return M_; }
  const PermGroup& cover() const { return H_; }
  const std::vector<Word>& relator_words() const { return words_; }

  // g as a product of transversal nodes (deepest level first)
  Word rewrite_word(const Perm& g) const {
    auto path = H_.sift_path(g);
    if (!path) throw precondition_error("presentation: element outside the group");
    Word w;
    const auto& lv = H_.chain().levels;
    for (std::size_t l = path->size(); l-- > 0;) {
      auto n = lv[l].u_node[(*path)[l]];
      if (n != detail::no_node) w.push_back({n, true, false});
    }
    return w;
  }

  template <class T, class Mul, class Inv>
  std::vector<T> node_values(const std::vector<T>& gen_vals, Mul mul, Inv inv) const {
    std::vector<T> v;
    const auto& pool = H_.chain().pool;
    v.reserve(pool.size());
    for (const auto& s : pool) {
      switch (s.op) {
        case SlpStep::Op::gen: v.push_back(gen_vals[s.a]); break;
        case SlpStep::Op::mul: v.push_back(mul(v[s.a], v[s.b])); break;
        case SlpStep::Op::inv: v.push_back(inv(v[s.a])); break;
        case SlpStep::Op::pow: throw std::logic_error("unexpected pool step");
      }
    }
    return v;
  }

  template <class T, class Mul, class Inv>
  T evaluate(const Word& w, const std::vector<T>& nodes, const std::vector<T>& gen_vals, const T& id, Mul mul, Inv inv) const {
    T acc = id;
    for (const auto& f : w) {
      const T& x = f.node ? nodes[f.ref] : gen_vals[f.ref];
      acc = mul(acc, f.inverse ? inv(x) : x);
    }
    return acc;
  }

  // relators and rewriting as SLPs over X
  std::vector<Slp> relators() const {
    std::vector<Slp> out;
    for (const auto& w : words_) out.push_back(to_slp(w));
    return out;
  }
  Slp rewrite(const Perm& g) const { return to_slp(rewrite_word(g)); }

 private:
  PermGroup M_, H_;
  std::vector<Perm> X_;
  std::vector<Word> words_;

  void build() {
    const auto& ch = H_.chain();
    const std::size_t depth = ch.levels.size();
    auto sift_tail = [&](Perm h, std::size_t from, Word& w) {
      for (std::size_t l = from; l < depth; ++l) {
        const auto& L = ch.levels[l];
        auto q = L.pos[h[L.base]];
        if (q < 0) throw std::logic_error("presentation: incomplete stabilizer chain");
        if (L.u_node[q] != detail::no_node) w.push_back({L.u_node[q], true, true});
        h = h * L.u_inv[q];
      }
      if (!h.is_identity()) throw std::logic_error("presentation: incomplete stabilizer chain");
    };
    // Schreier relators for the nested sets S_l = strong gens fixing b_0..b_{l-1}
    for (std::size_t l = 0; l < depth; ++l) {
      const auto& L = ch.levels[l];
      std::vector<std::uint32_t> S;
      for (std::uint32_t t = 0; t < ch.strong.size(); ++t) {
        bool fixes = true;
        for (std::size_t k = 0; k < l && fixes; ++k) fixes = ch.strong[t][ch.levels[k].base] == ch.levels[k].base;
        if (fixes) S.push_back(t);
      }
      for (std::size_t j = 0; j < L.orbit.size(); ++j)
        for (auto t : S) {
          auto k = static_cast<std::size_t>(L.pos[ch.strong[t][L.orbit[j]]]);
          auto uj = L.u_node[j], uk = L.u_node[k], st = ch.strong_node[t];
          // tree edges hold in the free group
          if (uj == detail::no_node && uk == st) continue;
          if (uk != detail::no_node && ch.pool[uk].op == SlpStep::Op::mul && ch.pool[uk].a == uj && ch.pool[uk].b == st) continue;
          Word w;
          if (uj != detail::no_node) w.push_back({uj, true, false});
          w.push_back({st, true, false});
          if (uk != detail::no_node) w.push_back({uk, true, true});
          sift_tail(L.u[j] * ch.strong[t] * L.u_inv[k], l + 1, w);
          words_.push_back(std::move(w));
        }
    }
    // each input generator equals its sifted word
    for (std::uint32_t i = 0; i < H_.gens().size(); ++i) {
      Word w{{i, false, false}};
      sift_tail(H_.gens()[i], 0, w);
      words_.push_back(std::move(w));
    }
  }

  Slp to_slp(const Word& w) const {
    const auto& pool = H_.chain().pool;
    const auto nx = static_cast<std::uint32_t>(X_.size());
    constexpr std::uint32_t none = detail::no_node;
    Slp out;
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    std::function<std::uint32_t(std::uint32_t)> copy = [&](std::uint32_t n) -> std::uint32_t {
      if (auto it = memo.find(n); it != memo.end()) return it->second;
      const auto& s = pool[n];
      std::uint32_t r = none;
      switch (s.op) {
        case SlpStep::Op::gen: r = s.a < nx ? out.gen(s.a) : none; break;
        case SlpStep::Op::mul: {
          auto a = copy(s.a), b = copy(s.b);
          r = a == none ? b : b == none ? a : out.mul(a, b);
          break;
        }
        case SlpStep::Op::inv: {
          auto a = copy(s.a);
          r = a == none ? none : out.inv(a);
          break;
        }
        case SlpStep::Op::pow: throw std::logic_error("unexpected pool step");
      }
      memo[n] = r;
      return r;
    };
    std::uint32_t acc = none;
    for (const auto& f : w) {
      std::uint32_t x = f.node ? copy(f.ref) : (f.ref < nx ? out.gen(f.ref) : none);
      if (x == none) continue;
      if (f.inverse) x = out.inv(x);
      acc = acc == none ? x : out.mul(acc, x);
    }
    if (acc != none && acc + 1 != out.size()) out.pow(acc, 1);
    if (acc == none) return Slp();
    return out;
  }
};

inline Presentation constructive_presentation(const PermGroup& G, const PermGroup& M, std::uint64_t bound = default_action_bound) {
  return Presentation(G, M, bound);
}

// ---------------------------------------------------------------------------
// Linear systems over an abelian normal subgroup

namespace detail {

// Unknowns mu_x in the p-part of M, one per symbol. Elements of the
// extension are tracked as g * m(mu D), with A the conjugation matrix of g.
class ModuleSystem {
 public:
  struct Ext {
    Perm g;
    Mat A, Ai, D;
  };

  ModuleSystem(const AbelianPresentation& M, std::uint64_t p, std::size_t nx) : M_(&M), p_(static_cast<i64>(p)), nx_(nx) {
    idx_ = M.indices(p);
    for (auto i : idx_) e_.push_back(M.exponents()[i]);
    r_ = idx_.size();
    C_.assign(nx_ * r_, {});
    for (std::size_t x = 0; x < nx_; ++x) a_.insert(a_.end(), e_.begin(), e_.end());
  }

  std::size_t rank() const { return r_; }
  const std::vector<int>& exponents() const { return e_; }

  Vec coords(const Perm& m) const {
    Vec c = M_->coords(m), out;
    for (auto i : idx_) out.push_back(c[i]);
    return out;
  }

  Perm element(const Vec& c) const {
    Vec full(M_->rank(), 0);
    for (std::size_t i = 0; i < r_; ++i) full[idx_[i]] = c[i];
    return M_->element(full);
  }

  Mat conj_matrix(const Perm& g) const {
    Mat A;
    for (auto i : idx_) A.push_back(coords(conj(M_->basis()[i], g)));
    return A;
  }

  Ext constant(const Perm& g) const { return {g, conj_matrix(g), conj_matrix(g.inverse()), Mat(nx_ * r_, Vec(r_, 0))}; }

  Ext unknown(std::size_t x, const Perm& f) const {
    Ext v = constant(f);
    for (std::size_t i = 0; i < r_; ++i) v.D[x * r_ + i][i] = 1;
    return v;
  }

  Ext mul(const Ext& a, const Ext& b) const {
    Ext c{a.g * b.g, zmod::mul(a.A, b.A, p_, e_), zmod::mul(b.Ai, a.Ai, p_, e_), zmod::mul(a.D, b.A, p_, e_)};
    for (std::size_t i = 0; i < c.D.size(); ++i)
      for (std::size_t k = 0; k < r_; ++k) c.D[i][k] = zmod::md(c.D[i][k] + b.D[i][k], zmod::ipow(p_, e_[k]));
    return c;
  }

  Ext inv(const Ext& a) const {
    Ext c{a.g.inverse(), a.Ai, a.A, zmod::mul(a.D, a.Ai, p_, e_)};
    for (auto& row : c.D)
      for (std::size_t k = 0; k < r_; ++k) row[k] = zmod::md(-row[k], zmod::ipow(p_, e_[k]));
    return c;
  }

  // mu D = c
  void require(const Mat& D, const Vec& c) {
    for (std::size_t k = 0; k < r_; ++k) {
      bool zero = zmod::md(c[k], zmod::ipow(p_, e_[k])) == 0;
      for (std::size_t i = 0; i < D.size() && zero; ++i) zero = D[i][k] == 0;
      if (zero) continue;
      for (std::size_t i = 0; i < D.size(); ++i) C_[i].push_back(D[i][k]);
      rhs_.push_back(c[k]);
      b_.push_back(e_[k]);
    }
  }

  // the word value must be trivial: coords(g) + mu D = 0
  void require_trivial(const Ext& w) {
    Vec c = coords(w.g);
    for (std::size_t k = 0; k < r_; ++k) c[k] = zmod::md(-c[k], zmod::ipow(p_, e_[k]));
    require(w.D, c);
  }

  zmod::Solution solve() const {
    if (b_.empty()) {
      zmod::Solution s;
      s.feasible = true;
      s.particular.assign(nx_ * r_, 0);
      for (std::size_t i = 0; i < nx_ * r_; ++i) {
        Vec v(nx_ * r_, 0);
        v[i] = 1;
        s.homogeneous.push_back(v);
      }
      return s;
    }
    return zmod::solve(p_, a_, b_, C_, rhs_);
  }

 private:
  const AbelianPresentation* M_;
  i64 p_;
  std::size_t nx_, r_ = 0;
  std::vector<std::size_t> idx_;
  std::vector<int> e_, a_, b_;
  Mat C_;
  Vec rhs_;
};

inline void require_abelian_normal(const PermGroup& G, const PermGroup& M, const char* who) {
  if (!M.is_subgroup_of(G)) throw precondition_error(std::string(who) + ": M is not a subgroup of G");
  if (!M.is_abelian()) throw precondition_error(std::string(who) + ": M is not abelian");
  if (auto w = normality_witness(G, M)) throw precondition_error(std::string(who) + ": M is not normal; " + w->str() + " lies outside");
}

}  // namespace detail

struct ModuleSolution {
  bool feasible = false;
  std::vector<Perm> particular;                // one element of M per symbol
  std::vector<std::vector<Perm>> homogeneous;  // generators of the solutions of the homogeneous system
};

// Solutions mu in M^X of w(f mu) = 1 for every word (SLPs over X).
inline ModuleSolution solve_module_equations(const PermGroup& G, const PermGroup& M, const std::vector<Perm>& f,
                                             const std::vector<Slp>& words) {
  detail::require_abelian_normal(G, M, "solve_module_equations");
  const std::size_t nx = f.size(), deg = G.degree();
  for (const auto& x : f)
    if (!G.contains(x)) throw precondition_error("solve_module_equations: symbol value outside G");
  ModuleSolution out;
  out.particular.assign(nx, Perm::identity(deg));
  // w(f mu) = w(f) mod M, so w(f) must already lie in M
  for (const auto& w : words)
    if (!M.contains(w.eval(f, deg))) return out;
  auto pres = primary_decomposition(M);
  for (auto p : pres.prime_list()) {
    detail::ModuleSystem sys(pres, p, nx);
    using Ext = detail::ModuleSystem::Ext;
    std::vector<Ext> gv;
    for (std::size_t i = 0; i < nx; ++i) gv.push_back(sys.unknown(i, f[i]));
    auto mul = [&](const Ext& a, const Ext& b) { return sys.mul(a, b); };
    auto inv = [&](const Ext& a) { return sys.inv(a); };
    Ext id = sys.constant(Perm::identity(deg));
    for (const auto& w : words) sys.require_trivial(w.eval<Ext>(gv, id, mul, inv));
    auto s = sys.solve();
    if (!s.feasible) return ModuleSolution{};
    const std::size_t r = sys.rank();
    auto split = [&](const Vec& v) {
      std::vector<Perm> m;
      for (std::size_t x = 0; x < nx; ++x) m.push_back(sys.element(Vec(v.begin() + static_cast<long>(x * r), v.begin() + static_cast<long>((x + 1) * r))));
      return m;
    };
    auto part = split(s.particular);
    for (std::size_t x = 0; x < nx; ++x) out.particular[x] = out.particular[x] * part[x];
    for (const auto& h : s.homogeneous) out.homogeneous.push_back(split(h));
  }
  out.feasible = true;
  return out;
}

// An Omega-invariant complement K of an abelian normal M (G = M x| K), from
// the relators of G/M and one relation per (map, generator); nullopt when the
// linear system is infeasible.
inline std::optional<PermGroup> complement_abelian(const PermGroup& G, const PermGroup& M, const std::vector<ElementMap>& maps,
                                                   std::uint64_t bound = default_action_bound) {
  detail::require_abelian_normal(G, M, "complement_abelian");
  const std::size_t deg = G.degree();
  for (const auto& f : maps)
    for (const auto& m : M.gens())
      if (!M.contains(f(m))) throw precondition_error("complement_abelian: an operator does not stabilize M");
  if (M.is_trivial()) return PermGroup::reduced(deg, G.gens());
  Presentation P(G, M, bound);
  const auto& X = P.generators();
  const std::size_t nx = X.size();
  if (nx == 0) return PermGroup::trivial(deg);
  auto pres = primary_decomposition(M);
  std::vector<Perm> kg = X;
  using Ext = detail::ModuleSystem::Ext;
  for (auto p : pres.prime_list()) {
    detail::ModuleSystem sys(pres, p, nx);
    const std::size_t r = sys.rank();
    auto mul = [&](const Ext& a, const Ext& b) { return sys.mul(a, b); };
    auto inv = [&](const Ext& a) { return sys.inv(a); };
    Ext id = sys.constant(Perm::identity(deg));
    std::vector<Ext> gv;
    for (std::size_t i = 0; i < P.cover().gens().size(); ++i) gv.push_back(i < nx ? sys.unknown(i, X[i]) : id);
    auto nodes = P.node_values<Ext>(gv, mul, inv);
    for (const auto& w : P.relator_words()) sys.require_trivial(P.evaluate(w, nodes, gv, id, mul, inv));
    // s(x mu_x) must equal the rewritten word of s(x), evaluated at x mu
    auto S = operator_matrices(pres, p, maps);
    for (std::size_t s = 0; s < maps.size(); ++s)
      for (std::size_t x = 0; x < nx; ++x) {
        Perm t = maps[s](X[x]);
        if (!G.contains(t)) throw precondition_error("complement_abelian: an operator does not stabilize G");
        Ext w = P.evaluate(P.rewrite_word(t), nodes, gv, id, mul, inv);
        Mat D = w.D;
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t k = 0; k < r; ++k) D[x * r + i][k] = zmod::md(D[x * r + i][k] - S[s][i][k], zmod::ipow(static_cast<i64>(p), sys.exponents()[k]));
        sys.require(D, sys.coords(w.g.inverse() * t));
      }
    auto sol = sys.solve();
    if (!sol.feasible) return std::nullopt;
    for (std::size_t x = 0; x < nx; ++x)
      kg[x] = kg[x] * sys.element(Vec(sol.particular.begin() + static_cast<long>(x * r), sol.particular.begin() + static_cast<long>((x + 1) * r)));
  }
  PermGroup K = PermGroup::reduced(deg, kg);
  if (K.order() * M.order() != G.order()) throw std::logic_error("complement_abelian: solution does not give a complement");
  return K;
}

// ---------------------------------------------------------------------------
// Direct complements

struct ComplementResult {
  enum class Stage { found, invariance, product, infeasible };
  Stage stage = Stage::infeasible;
  std::optional<PermGroup> complement;
  std::string detail;
  bool found() const { return stage == Stage::found; }
};

inline const char* stage_name(ComplementResult::Stage s) {
  switch (s) {
    case ComplementResult::Stage::found: return "found";
    case ComplementResult::Stage::invariance: return "invariance";
    case ComplementResult::Stage::product: return "product";
    case ComplementResult::Stage::infeasible: return "infeasible";
  }
  return "?";
}

// K with G = H x K and K invariant under the maps, else the failed test.
inline ComplementResult direct_complement(const PermGroup& G, const PermGroup& H, const std::vector<ElementMap>& maps,
                                          std::uint64_t bound = default_action_bound) {
  if (!H.is_subgroup_of(G)) throw precondition_error("direct_complement: H is not a subgroup of G");
  using Stage = ComplementResult::Stage;
  ComplementResult r;
  if (auto w = normality_witness(G, H, maps)) {
    r.stage = Stage::invariance;
    r.detail = "H is not invariant: " + w->str() + " lies outside H";
    return r;
  }
  r.stage = Stage::found;
  if (H.is_trivial()) {
    r.complement = PermGroup::reduced(G.degree(), G.gens());
    return r;
  }
  if (H.order() == G.order()) {
    r.complement = PermGroup::trivial(G.degree());
    return r;
  }
  PermGroup C = centralizer_of_normal(G, H, bound);
  PermGroup Z = centralizer_of_normal(H, H, bound);
  if (G.order() / H.order() != C.order() / Z.order()) {
    r.stage = Stage::product;
    r.detail = "H C_G(H) has index " + std::to_string(G.order() / H.order() / (C.order() / Z.order())) + " in G";
    return r;
  }
  if (auto w = normality_witness(G, C, maps)) {
    r.stage = Stage::product;
    r.detail = "C_G(H) is not invariant: " + w->str() + " lies outside";
    return r;
  }
  auto all = concat(maps, inner_maps(G));
  auto K = complement_abelian(C, Z, all, bound);
  if (!K) {
    r.stage = Stage::infeasible;
    r.detail = "the complement equations for Z(H) in C_G(H) have no solution";
    return r;
  }
  if (H.order() * K->order() != G.order() || !is_normal(G, *K, maps)) throw std::logic_error("direct_complement: verification failed");
  r.complement = std::move(K);
  return r;
}

// ---------------------------------------------------------------------------
// Extend and Merge

// Keeps members of K (input order) while the kept list plus a direct
// complement still decomposes G; the last complement is the leftover factor.
inline std::vector<PermGroup> extend(const PermGroup& G, const std::vector<PermGroup>& K, const std::vector<ElementMap>& maps,
                                     std::uint64_t bound = default_action_bound) {
  std::vector<PermGroup> kept, rest = K;
  PermGroup floor = PermGroup::reduced(G.degree(), G.gens());
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      auto parts = kept;
      parts.push_back(rest[i]);
      auto r = direct_complement(G, join(G.degree(), parts), maps, bound);
      if (!r.found()) continue;
      floor = *r.complement;
      kept.push_back(rest[i]);
      rest.erase(rest.begin() + static_cast<long>(i));
      progress = true;
      break;
    }
  }
  if (!floor.is_trivial()) kept.push_back(floor);
  return kept;
}

inline std::vector<PermGroup> merge(const std::vector<PermGroup>& A, const std::vector<PermGroup>& H, const std::vector<ElementMap>& maps,
                                    std::uint64_t bound = default_action_bound) {
  std::vector<PermGroup> K = A;
  for (const auto& h : H) {
    if (h.gens().empty() && K.empty()) continue;
    std::size_t deg = h.degree();
    auto parts = K;
    parts.push_back(h);
    PermGroup M = join(deg, parts);
    K = extend(M, K, maps, bound);
  }
  return K;
}

// Coarsest fusion needed so that every block K has zeta_c(K) = zeta_c(G):
// blocks with a nontrivial mixed commutator of length c+1 are joined, then
// any block still failing is fused with a partner that moves its zeta_c.
inline std::vector<PermGroup> centralize_refine(const PermGroup& G, const std::vector<PermGroup>& H, int c,
                                                std::uint64_t bound = default_action_bound) {
  if (c < 1 || c > 2) throw precondition_error("centralize_refine: c must be 1 or 2");
  const std::size_t n = H.size();
  if (n <= 1) return H;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find(i) == find(j)) continue;
      PermGroup T = commutator_subgroup(G, H[i], H[j]);
      bool linked = !T.is_trivial();
      if (linked && c == 2) linked = !commutator_subgroup(G, T, H[i]).is_trivial() || !commutator_subgroup(G, T, H[j]).is_trivial();
      if (linked) parent[find(j)] = find(i);
    }
  std::vector<PermGroup> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) != i) continue;
    std::vector<PermGroup> parts;
    for (std::size_t j = 0; j < n; ++j)
      if (find(j) == i) parts.push_back(H[j]);
    blocks.push_back(join(G.degree(), parts));
  }
  PermGroup Zc = zeta(G, c, bound);
  for (bool again = true; again && blocks.size() > 1;) {
    again = false;
    for (std::size_t i = 0; i < blocks.size() && !again; ++i) {
      PermGroup zk = zeta(blocks[i], c, bound);
      if (zk.same_as(Zc)) continue;
      std::size_t partner = i == 0 ? 1 : 0;
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        if (j == i) continue;
        if (!zk.is_subgroup_of(zeta(join(blocks[i], blocks[j]), c, bound))) {
          partner = j;
          break;
        }
      }
      blocks[std::min(i, partner)] = join(blocks[i], blocks[partner]);
      blocks.erase(blocks.begin() + static_cast<long>(std::max(i, partner)));
      again = true;
    }
  }
  return blocks;
}

// ---------------------------------------------------------------------------
// Class 2 and the main recursion

inline std::vector<PermGroup> remak_class2(const PermGroup& G, const std::vector<ElementMap>& maps, std::uint64_t bound = default_action_bound) {
  if (G.is_trivial()) return {};
  if (G.is_abelian()) return remak_abelian(G, maps);
  PermGroup Z = center(G, bound);
  if (!commutator_subgroup(G, G, G).is_subgroup_of(Z)) throw precondition_error("remak_class2: class exceeds 2");
  const std::size_t deg = G.degree();
  std::vector<PermGroup> out;
  for (auto p : prime_factors(G.order())) {
    PermGroup P = primary_part(G, p);
    if (P.is_abelian()) {
      auto f = remak_abelian(P, maps);
      out.insert(out.end(), f.begin(), f.end());
      continue;
    }
    PermGroup ZP = center(P, bound);
    auto Zs = remak_abelian(ZP, maps);
    auto gb = bi_of_group(P);
    std::vector<PermGroup> blocks;
    for (const auto& blk : frame_decomposition(gb.map)) {
      std::vector<Perm> g = ZP.gens();
      for (const auto& row : blk.v_rows) g.push_back(detail::combine(gb.v_reps, row, deg));
      blocks.push_back(PermGroup::reduced(deg, g));
    }
    // operators permute the frame blocks; keep the orbit unions
    std::vector<std::size_t> parent(blocks.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (const auto& f : maps) {
        std::vector<Perm> img;
        for (const auto& x : blocks[i].gens()) img.push_back(f(x));
        PermGroup I = PermGroup::reduced(deg, img);
        I = join(I, ZP);
        bool hit = false;
        for (std::size_t j = 0; j < blocks.size(); ++j)
          if (I.same_as(blocks[j])) {
            parent[find(j)] = find(i);
            hit = true;
          }
        if (!hit)
          for (std::size_t j = 0; j < blocks.size(); ++j) parent[find(j)] = find(0);
      }
    std::vector<PermGroup> Hs;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (find(i) != i) continue;
      std::vector<PermGroup> parts;
      for (std::size_t j = 0; j < blocks.size(); ++j)
        if (find(j) == i) parts.push_back(blocks[j]);
      Hs.push_back(join(deg, parts));
    }
    auto f = merge(Zs, Hs, maps, bound);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

namespace detail {

inline std::vector<PermGroup> remak_factors(const PermGroup& G, const std::vector<ElementMap>& maps, std::uint64_t bound) {
  if (G.is_trivial()) return {};
  if (G.is_abelian()) return remak_abelian(G, maps);
  const auto all = concat(maps, inner_maps(G));
  auto q = std::make_shared<CentralQuotient>(central_quotient(G, bound));
  if (q->kernel.is_trivial()) {
    PermGroup N = minimal_normal_subgroup(G, maps, bound);
    PermGroup C = centralizer_of_normal(G, N, bound);
    if (C.is_trivial()) return {PermGroup::reduced(G.degree(), G.gens())};
    return extend(G, remak_factors(C, all, bound), maps, bound);
  }
  PermGroup Z2 = q->pullback(center(q->quotient, bound));
  auto A = remak_class2(Z2, all, bound);
  if (Z2.order() == G.order()) return A;
  for (const auto& f : maps)
    for (const auto& z : q->kernel.gens())
      if (!q->kernel.contains(f(z))) throw precondition_error("an operator does not stabilize the center; its action on G/Z(G) is undefined");
  auto lift = std::make_shared<ChainHom<Perm>>(perm_hom(q->quotient, G.gens(), G.degree()));
  std::vector<ElementMap> qmaps;
  for (const auto& f : maps) qmaps.push_back([q, lift, f](const Perm& x) { return q->image(f((*lift)(x))); });
  std::vector<PermGroup> H;
  for (const auto& U : remak_factors(q->quotient, qmaps, bound)) {
    PermGroup h = join(q->pullback(U), Z2);
    if (h.order() == Z2.order()) continue;
    bool dup = false;
    for (const auto& x : H) dup = dup || x.same_as(h);
    if (!dup) H.push_back(std::move(h));
  }
  H = centralize_refine(G, H, 2, bound);
  return merge(A, H, all, bound);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Decompositions with certificates

struct Certificate {
  std::uint64_t ambient_order = 0;
  std::vector<std::uint64_t> factor_orders;
  // conj_words[i][j][k]: conj(factor i gen k, ambient gen j) over factor i's gens
  std::vector<std::vector<std::vector<Slp>>> conj_words;
  // op_words[i][s][k]: map s applied to factor i gen k, over factor i's gens
  std::vector<std::vector<std::vector<Slp>>> op_words;
  // ambient generators over the concatenated factor generators
  std::vector<Slp> generation;
};

struct Decomposition {
  PermGroup ambient;
  std::vector<PermGroup> factors;
  bool is_direct = false;
  bool is_remak_claimed = false;
  bool omega_stable = false;
  Certificate certificate;
};

inline std::uint64_t checked_product(const std::vector<std::uint64_t>& v) {
  std::uint64_t n = 1;
  for (auto x : v) {
    if (x && n > UINT64_MAX / x) return 0;
    n *= x;
  }
  return n;
}

// Fills flags and certificate from direct checks.
inline void certify(Decomposition& d, const std::vector<ElementMap>& maps) {
  const auto& G = d.ambient;
  auto& c = d.certificate;
  c = Certificate{};
  c.ambient_order = G.order();
  bool normal = true;
  d.omega_stable = true;
  std::vector<Perm> all_gens;
  for (const auto& F : d.factors) {
    c.factor_orders.push_back(F.order());
    all_gens.insert(all_gens.end(), F.gens().begin(), F.gens().end());
    std::vector<std::vector<Slp>> cw, ow;
    for (const auto& g : G.gens()) {
      std::vector<Slp> row;
      for (const auto& h : F.gens()) {
        auto m = F.membership(conj(h, g));
        normal = normal && m.member;
        row.push_back(m.slp);
      }
      cw.push_back(std::move(row));
    }
    for (const auto& f : maps) {
      std::vector<Slp> row;
      for (const auto& h : F.gens()) {
        auto m = F.membership(f(h));
        d.omega_stable = d.omega_stable && m.member;
        row.push_back(m.slp);
      }
      ow.push_back(std::move(row));
    }
    c.conj_words.push_back(std::move(cw));
    c.op_words.push_back(std::move(ow));
  }
  PermGroup U(G.degree(), all_gens);
  bool generates = true;
  for (const auto& g : G.gens()) {
    auto m = U.membership(g);
    generates = generates && m.member;
    c.generation.push_back(m.slp);
  }
  bool nontrivial = std::none_of(d.factors.begin(), d.factors.end(), [](const PermGroup& F) { return F.is_trivial(); });
  bool inside = std::all_of(d.factors.begin(), d.factors.end(), [&](const PermGroup& F) { return F.is_subgroup_of(G); });
  d.is_direct = normal && generates && nontrivial && inside && checked_product(c.factor_orders) == c.ambient_order;
}

// Independent re-check of a certificate; returns the first failure.
inline std::optional<std::string> verify_certificate(const Decomposition& d, const std::vector<ElementMap>& maps) {
  const auto& G = d.ambient;
  const auto& c = d.certificate;
  const std::size_t deg = G.degree();
  if (c.conj_words.size() != d.factors.size() || c.op_words.size() != d.factors.size()) return "certificate shape mismatch";
  std::vector<std::uint64_t> orders;
  std::vector<Perm> all_gens;
  for (std::size_t i = 0; i < d.factors.size(); ++i) {
    const auto& F = d.factors[i];
    for (const auto& h : F.gens())
      if (!G.contains(h)) return "factor " + std::to_string(i + 1) + " is not inside the ambient group";
    PermGroup fresh(deg, F.gens());
    if (fresh.is_trivial()) return "factor " + std::to_string(i + 1) + " is trivial";
    orders.push_back(fresh.order());
    all_gens.insert(all_gens.end(), F.gens().begin(), F.gens().end());
    if (c.conj_words[i].size() != G.gens().size()) return "certificate shape mismatch";
    for (std::size_t j = 0; j < G.gens().size(); ++j)
      for (std::size_t k = 0; k < F.gens().size(); ++k)
        if (c.conj_words[i][j].at(k).eval(F.gens(), deg) != conj(F.gens()[k], G.gens()[j]))
          return "factor " + std::to_string(i + 1) + ": normality word " + std::to_string(j + 1) + "," + std::to_string(k + 1) + " is wrong";
    if (c.op_words[i].size() != maps.size()) return "certificate shape mismatch";
    for (std::size_t s = 0; s < maps.size(); ++s)
      for (std::size_t k = 0; k < F.gens().size(); ++k)
        if (c.op_words[i][s].at(k).eval(F.gens(), deg) != maps[s](F.gens()[k]))
          return "factor " + std::to_string(i + 1) + ": operator word " + std::to_string(s + 1) + "," + std::to_string(k + 1) + " is wrong";
  }
  if (c.generation.size() != G.gens().size()) return "certificate shape mismatch";
  for (std::size_t j = 0; j < G.gens().size(); ++j)
    if (c.generation[j].eval(all_gens, deg) != G.gens()[j]) return "generation word " + std::to_string(j + 1) + " is wrong";
  if (orders != c.factor_orders) return "factor orders do not match";
  if (checked_product(orders) != G.order()) return "order product differs from the group order";
  return std::nullopt;
}

// Drops generators, first to last, while the rest still generate.
inline PermGroup trim_generators(const PermGroup& F) {
  auto gens = F.gens();
  for (std::size_t i = 0; i < gens.size() && gens.size() > 1;) {
    auto rest = gens;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (PermGroup::reduced(F.degree(), rest).order() == F.order())
      gens = std::move(rest);
    else
      ++i;
  }
  return PermGroup::reduced(F.degree(), gens);
}

inline Decomposition make_decomposition(const PermGroup& G, std::vector<PermGroup> factors, const std::vector<ElementMap>& maps, bool remak) {
  for (auto& F : factors) F = trim_generators(F);
  sort_factors(factors);
  Decomposition d;
  d.ambient = G;
  d.factors = std::move(factors);
  d.is_remak_claimed = remak;
  certify(d, maps);
  return d;
}

// Remak decomposition under automorphisms.
inline Decomposition find_remak(const PermGroup& G, const std::vector<ElementMap>& maps, std::uint64_t bound = default_action_bound) {
  return make_decomposition(G, detail::remak_factors(G, maps, bound), maps, true);
}

inline Decomposition find_remak(const PermGroup& G, const OperatorSet& ops, std::uint64_t bound = default_action_bound) {
  BoundOperators b(G, ops);
  return find_remak(G, b.maps(), bound);
}

struct GeneralDecomposition {
  Decomposition decomposition;
  std::vector<PermGroup> parts;          // the Fitting pieces
  std::vector<OperatorSet> reduced_ops;  // per piece: each map restricted, zero maps dropped
};

// Splits along kernel/image of powers of non-bijective maps, then decomposes
// each piece.
inline GeneralDecomposition reduce_general_operators(const PermGroup& G, const std::vector<ElementMap>& maps,
                                                     std::uint64_t bound = default_action_bound) {
  const std::size_t deg = G.degree();
  auto image_of = [&](const PermGroup& P, const ElementMap& f) {
    std::vector<Perm> img;
    for (const auto& x : P.gens()) img.push_back(f(x));
    return PermGroup::reduced(deg, img);
  };
  std::vector<PermGroup> todo{PermGroup::reduced(deg, G.gens())}, parts;
  while (!todo.empty()) {
    PermGroup P = todo.back();
    todo.pop_back();
    bool split = false;
    for (const auto& f : maps) {
      PermGroup I = P;
      for (;;) {
        PermGroup next = image_of(I, f);
        if (next.order() == I.order()) break;
        I = next;
      }
      if (I.is_trivial() || I.order() == P.order()) continue;
      auto r = direct_complement(P, I, maps, bound);
      if (!r.found())
        throw precondition_error(std::string("a stable image of an operator power has no invariant direct complement (") + stage_name(r.stage) + ")");
      todo.push_back(I);
      todo.push_back(*r.complement);
      split = true;
      break;
    }
    if (!split && !P.is_trivial()) parts.push_back(P);
  }
  sort_factors(parts);
  GeneralDecomposition out;
  std::vector<PermGroup> factors;
  for (const auto& P : parts) {
    OperatorSet ops;
    std::vector<ElementMap> live;
    for (const auto& f : maps) {
      Operator o;
      for (const auto& x : P.gens()) o.images.push_back(f(x));
      if (std::all_of(o.images.begin(), o.images.end(), [](const Perm& y) { return y.is_identity(); })) continue;
      o.kind = PermGroup::reduced(deg, o.images).order() == P.order() ? Operator::Kind::automorphism : Operator::Kind::endomorphism;
      ops.push_back(std::move(o));
      live.push_back(f);
    }
    auto f = detail::remak_factors(P, live, bound);
    factors.insert(factors.end(), f.begin(), f.end());
    out.reduced_ops.push_back(std::move(ops));
  }
  out.parts = parts;
  out.decomposition = make_decomposition(G, factors, maps, true);
  return out;
}

// find_remak when every map is bijective, else the Fitting reduction first.
inline Decomposition decompose(const PermGroup& G, const OperatorSet& ops, std::uint64_t bound = default_action_bound) {
  BoundOperators b(G, ops);
  bool general = std::any_of(ops.begin(), ops.end(), [&](const Operator& o) { return !is_bijective(G, o); });
  if (general) return reduce_general_operators(G, b.maps(), bound).decomposition;
  return find_remak(G, b.maps(), bound);
}

}  // namespace remak
