#pragma once

#include <string>
#include <vector>

#include "perm_group.hpp"

namespace remak {

// Generators on a fixed number of points; cheap to combine before a chain
// is built.
struct GroupGens {
  std::size_t degree = 0;
  std::vector<Perm> gens;
  std::string name;

  PermGroup group() const { return PermGroup(degree, gens); }
};

inline Perm shift(const Perm& g, std::size_t offset, std::size_t degree) {
  std::vector<point> img(degree);
  for (point x = 0; x < degree; ++x) img[x] = x;
  for (point x = 0; x < g.degree(); ++x) img[x + offset] = static_cast<point>(g[x] + offset);
  return Perm::from_images(std::move(img));
}

inline GroupGens direct_product(const std::vector<GroupGens>& parts) {
  GroupGens out;
  for (const auto& p : parts) out.degree += p.degree;
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (const auto& g : p.gens) out.gens.push_back(shift(g, off, out.degree));
    off += p.degree;
    out.name += (out.name.empty() ? "" : "x") + p.name;
  }
  return out;
}

inline GroupGens cyclic(std::size_t n) {
  GroupGens g{n, {}, "Z" + std::to_string(n)};
  if (n > 1) {
    std::vector<point> img(n);
    for (point i = 0; i < n; ++i) img[i] = static_cast<point>((i + 1) % n);
    g.gens.push_back(Perm::from_images(std::move(img)));
  }
  return g;
}

inline GroupGens abelian_group(const std::vector<std::size_t>& cyclic_orders) {
  std::vector<GroupGens> parts;
  for (auto n : cyclic_orders) parts.push_back(cyclic(n));
  auto g = direct_product(parts);
  return g;
}

inline GroupGens dihedral(std::size_t n) {  // order 2n on n points
  GroupGens g{n, {}, "D" + std::to_string(2 * n)};
  std::vector<point> r(n), s(n);
  for (point i = 0; i < n; ++i) r[i] = static_cast<point>((i + 1) % n), s[i] = static_cast<point>((n - i) % n);
  g.gens = {Perm::from_images(r), Perm::from_images(s)};
  return g;
}

inline GroupGens quaternion8() {
  GroupGens g{8, {}, "Q8"};
  g.gens = {Perm::from_cycles(8, {{1, 2, 3, 4}, {5, 6, 7, 8}}), Perm::from_cycles(8, {{1, 5, 3, 7}, {2, 8, 4, 6}})};
  return g;
}

inline GroupGens symmetric(std::size_t n) {
  GroupGens g{n, {}, "S" + std::to_string(n)};
  if (n < 2) return g;
  std::vector<long long> cyc;
  for (std::size_t i = 1; i <= n; ++i) cyc.push_back(static_cast<long long>(i));
  g.gens = {Perm::from_cycles(n, {cyc}), Perm::from_cycles(n, {{1, 2}})};
  return g;
}

inline GroupGens alternating4() {
  GroupGens g{4, {}, "A4"};
  g.gens = {Perm::from_cycles(4, {{1, 2, 3}}), Perm::from_cycles(4, {{1, 2}, {3, 4}})};
  return g;
}

// Matrices over F_p acting on the nonzero row vectors of F_p^d (v -> vA).
using IntMatrix = std::vector<std::vector<int>>;

inline std::size_t vector_count(int p, int d) {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(p);
  return n;
}

inline Perm matrix_action(int p, const IntMatrix& A) {
  const int d = static_cast<int>(A.size());
  const std::size_t n = vector_count(p, d);
  std::vector<point> img(n - 1);
  std::vector<int> v(d), w(d);
  for (std::size_t x = 1; x < n; ++x) {
    std::size_t y = x;
    for (int i = 0; i < d; ++i) v[i] = static_cast<int>(y % p), y /= p;
    std::size_t z = 0;
    for (int j = d; j-- > 0;) {
      int s = 0;
      for (int i = 0; i < d; ++i) s += v[i] * A[i][j];
      z = z * p + static_cast<std::size_t>(((s % p) + p) % p);
    }
    img[x - 1] = static_cast<point>(z - 1);
  }
  return Perm::from_images(std::move(img));
}

inline IntMatrix kronecker(const IntMatrix& A, const IntMatrix& B, int p) {
  const std::size_t a = A.size(), b = B.size();
  IntMatrix K(a * b, std::vector<int>(a * b));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j)
      for (std::size_t k = 0; k < b; ++k)
        for (std::size_t l = 0; l < b; ++l) K[i * b + k][j * b + l] = (A[i][j] * B[k][l]) % p;
  return K;
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix I(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline GroupGens matrix_group(int p, const std::vector<IntMatrix>& mats, std::string name) {
  GroupGens g{vector_count(p, static_cast<int>(mats.at(0).size())) - 1, {}, std::move(name)};
  for (const auto& A : mats) g.gens.push_back(matrix_action(p, A));
  return g;
}

// 2x2 generators over F_3 for small subgroups of GL(2,3)
inline std::vector<IntMatrix> sl23_matrices() { return {{{1, 1}, {0, 1}}, {{1, 0}, {1, 1}}}; }
inline std::vector<IntMatrix> q8_matrices() { return {{{0, 1}, {2, 0}}, {{1, 1}, {1, 2}}}; }
inline std::vector<IntMatrix> d8_matrices() { return {{{0, 1}, {2, 0}}, {{1, 0}, {0, 2}}}; }

inline GroupGens sl23() { return matrix_group(3, sl23_matrices(), "SL(2,3)"); }

// A o B through the tensor product; the scalars -1 are identified.
inline GroupGens central_product_f3(const std::vector<IntMatrix>& A, const std::vector<IntMatrix>& B, std::string name) {
  std::vector<IntMatrix> m;
  for (const auto& a : A) m.push_back(kronecker(a, identity_matrix(B.at(0).size()), 3));
  for (const auto& b : B) m.push_back(kronecker(identity_matrix(A.at(0).size()), b, 3));
  return matrix_group(3, m, std::move(name));
}

// D8 x Q8 x SL(2,3) x (SL(2,3) o SL(2,3)) on 100 points
inline GroupGens worked_example() {
  auto g = direct_product({dihedral(4), quaternion8(), sl23(), central_product_f3(sl23_matrices(), sl23_matrices(), "SLoSL")});
  g.name = "D8xQ8xSL(2,3)x(SLoSL)";
  return g;
}

}  // namespace remak
