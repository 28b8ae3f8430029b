#pragma once

#include <string>
#include <vector>

#include <remak/bilinear.hpp>
#include <remak/groups.hpp>

namespace remak::testing {

// k hyperbolic planes over F_p with independent value lines:
// b(e_{2i}, e_{2i+1}) = w_i = -b(e_{2i+1}, e_{2i})
inline BilinearMap hyperbolic_planes(i64 p, std::size_t k) {
  auto b = BilinearMap::zero(p, std::vector<int>(2 * k, 1), std::vector<int>(k, 1));
  for (std::size_t i = 0; i < k; ++i) {
    b.at(2 * i, 2 * i + 1, i) = 1;
    b.at(2 * i + 1, 2 * i, i) = p - 1;
  }
  return b;
}

// b(e_i, e_j) = w_{ij} for i < j on F_p^3: the free class-2 exponent-p group
inline BilinearMap free_class2_form(i64 p) {
  auto b = BilinearMap::zero(p, {1, 1, 1}, {1, 1, 1});
  b.at(0, 1, 0) = 1;
  b.at(0, 2, 1) = 1;
  b.at(1, 2, 2) = 1;
  return b;
}

// u1 v2 - u2 v1 over F9 = F3[t]/(t^2+1), written over F3
inline BilinearMap f9_heisenberg_form() {
  auto b = BilinearMap::zero(3, {1, 1, 1, 1}, {1, 1});
  // V coordinates (a0 + a1 t, c0 + c1 t) -> indices 0,1 | 2,3
  auto mul = [](int x, int y) {  // t^x * t^y as coordinates, t^2 = -1
    int d = x + y;
    std::vector<i64> c(2, 0);
    if (d < 2)
      c[d] = 1;
    else
      c[0] = 2;
    return c;
  };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      auto c = mul(x, y);
      for (int k = 0; k < 2; ++k) {
        b.at(x, 2 + y, k) = zmod::md(b.at(x, 2 + y, k) + c[k], 3);
        b.at(2 + y, x, k) = zmod::md(b.at(2 + y, x, k) - c[k], 3);
      }
    }
  return b;
}

inline GroupGens heisenberg27() {
  return matrix_group(3, {{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}}}, "Heis(3)");
}

inline GroupGens from_table(const TableGroup& T, std::string name) { return {T.table.size(), T.group.gens(), std::move(name)}; }

// Nonabelian class-2 p-groups of order <= 64 drawn from the corpus atoms.
inline std::vector<GroupGens> class2_small() {
  auto D8 = dihedral(4), Q8 = quaternion8();
  return {D8,
          Q8,
          direct_product({D8, cyclic(2)}),
          direct_product({Q8, cyclic(2)}),
          direct_product({D8, cyclic(4)}),
          direct_product({D8, D8}),
          direct_product({D8, Q8}),
          direct_product({Q8, Q8}),
          central_product_f3(d8_matrices(), d8_matrices(), "D8oD8"),
          central_product_f3(q8_matrices(), q8_matrices(), "Q8oQ8"),
          heisenberg27()};
}

// Exponent-p class-2 groups with Z(P) <= Phi(P), as permutation or table groups.
inline std::vector<GroupGens> exponent_p_cases() {
  auto H = heisenberg27();
  return {H,
          direct_product({H, H}),
          from_table(grp_of_bilinear(free_class2_form(3)), "Grp(free3)"),
          from_table(grp_of_bilinear(f9_heisenberg_form()), "Heis(F9)"),
          from_table(grp_of_bilinear(hyperbolic_planes(3, 2)), "Grp(2 planes)")};
}

}  // namespace remak::testing
