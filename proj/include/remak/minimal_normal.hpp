#pragma once

#include <unordered_set>

#include "abelian.hpp"

namespace remak {

// A minimal subgroup invariant under conjugation and the given maps.
// Candidates are prime-order elements in canonical order; elementary abelian
// candidates are finished with an irreducible submodule.
inline PermGroup minimal_normal_subgroup(const PermGroup& G, const std::vector<ElementMap>& maps,
                                         std::uint64_t bound = 1000000) {
  if (G.is_trivial()) throw precondition_error("minimal_normal_subgroup: trivial group");
  auto prime_power = [](const Perm& x) {
    auto o = x.order();
    return x.pow(static_cast<long long>(o / prime_factors(o).front()));
  };
  auto closure = [&](const Perm& x) { return normal_closure(G, {x}, maps); };
  Perm start;
  for (const auto& g : G.gens())
    if (!g.is_identity()) {
      start = g;
      break;
    }
  PermGroup N = closure(prime_power(start));
  std::vector<ElementMap> all = maps;
  for (const auto& g : G.gens()) all.push_back([g](const Perm& x) { return conj(x, g); });
  for (;;) {
    if (N.is_abelian()) {
      auto pres = primary_decomposition(N);
      bool elementary = pres.prime_list().size() == 1 &&
                        std::all_of(pres.exponents().begin(), pres.exponents().end(), [](int e) { return e == 1; });
      if (elementary) {
        auto p = pres.primes().front();
        auto U = irreducible_submodule(static_cast<i64>(p), pres.rank(), operator_matrices(pres, p, all));
        std::vector<Perm> g;
        for (const auto& r : U) g.push_back(pres.element(r));
        return PermGroup::reduced(G.degree(), g);
      }
    }
    auto elems = N.sorted_elements(bound);
    std::unordered_set<Perm, perm_hash> seen;
    bool smaller = false;
    for (const auto& y : elems) {
      if (y.is_identity() || seen.count(y)) continue;
      auto o = y.order();
      if (prime_factors(o).size() != 1 || prime_factors(o).front() != o) continue;
      PermGroup M = closure(y);
      if (M.order() < N.order()) {
        N = M;
        smaller = true;
        break;
      }
      // everything in the invariant orbit of <y> generates the same closure
      std::vector<Perm> orbit{y};
      seen.insert(y);
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        std::vector<Perm> next;
        for (const auto& f : all) next.push_back(f(orbit[i]));
        for (std::uint64_t k = 2; k < o; ++k) next.push_back(orbit[i].pow(static_cast<long long>(k)));
        for (auto& z : next)
          if (seen.insert(z).second) orbit.push_back(std::move(z));
      }
    }
    if (!smaller) return N;
  }
}

}  // namespace remak
