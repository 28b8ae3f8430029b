#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "group_ops.hpp"
#include "groups.hpp"

namespace remak {

// Integer partitions of a, parts in descending order.
inline std::vector<std::vector<int>> partitions(int a, int max_part = -1) {
  if (max_part < 0) max_part = a;
  if (a == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int k = std::min(a, max_part); k >= 1; --k)
    for (auto rest : partitions(a - k, k)) {
      rest.insert(rest.begin(), k);
      out.push_back(std::move(rest));
    }
  return out;
}

// Invariant factors d_1 >= d_2 >= ... (d_{i+1} | d_i) of every abelian
// group of order n.
inline std::vector<std::vector<std::size_t>> abelian_types(std::size_t n) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (auto p : prime_factors(n)) {
    int a = 0;
    for (std::size_t m = n; m % p == 0; m /= p) ++a;
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : out)
      for (const auto& lam : partitions(a)) {
        auto u = t;
        if (u.size() < lam.size()) u.resize(lam.size(), 1);
        for (std::size_t i = 0; i < lam.size(); ++i)
          for (int k = 0; k < lam[i]; ++k) u[i] *= p;
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

inline std::string abelian_name(const std::vector<std::size_t>& t) {
  if (t.empty()) return "1";
  std::string s;
  for (auto d : t) s += (s.empty() ? "Z" : "xZ") + std::to_string(d);
  return s;
}

struct CorpusEntry {
  GroupGens gens;
  std::string family;  // abelian, product, central
  std::uint64_t order = 0;
};

inline std::vector<GroupGens> nonabelian_atoms() {
  return {dihedral(4), quaternion8(), symmetric(3), symmetric(4), alternating4(), sl23()};
}

// Abelian groups of order <= abelian_max, the six small nonabelian groups
// with all their pairwise and triple products of order <= product_max, and
// three central products.
inline std::vector<CorpusEntry> corpus(std::size_t abelian_max = 256, std::uint64_t product_max = 2000) {
  std::vector<CorpusEntry> out;
  for (std::size_t n = 1; n <= abelian_max; ++n)
    for (const auto& t : abelian_types(n)) {
      GroupGens g = t.empty() ? cyclic(1) : abelian_group(t);
      g.name = abelian_name(t);
      out.push_back({g, "abelian", n});
    }
  const auto atoms = nonabelian_atoms();
  std::vector<std::uint64_t> ord;
  for (const auto& a : atoms) ord.push_back(a.group().order());
  const std::size_t k = atoms.size();
  for (std::size_t i = 0; i < k; ++i) out.push_back({atoms[i], "atom", ord[i]});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      if (ord[i] * ord[j] <= product_max) out.push_back({direct_product({atoms[i], atoms[j]}), "product", ord[i] * ord[j]});
      for (std::size_t l = j; l < k; ++l)
        if (ord[i] * ord[j] * ord[l] <= product_max)
          out.push_back({direct_product({atoms[i], atoms[j], atoms[l]}), "product", ord[i] * ord[j] * ord[l]});
    }
  out.push_back({central_product_f3(d8_matrices(), d8_matrices(), "D8oD8"), "central", 32});
  out.push_back({central_product_f3(q8_matrices(), q8_matrices(), "Q8oQ8"), "central", 32});
  out.push_back({central_product_f3(sl23_matrices(), sl23_matrices(), "SL(2,3)oSL(2,3)"), "central", 288});
  return out;
}

}  // namespace remak
