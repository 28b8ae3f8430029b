#pragma once

#include <string>
#include <vector>

#include "perm_group.hpp"

namespace remak {

// A group given by its multiplication table, realized by right
// multiplication: element i acts as j -> table[j][i].
struct TableGroup {
  std::vector<std::vector<point>> table;  // 0-indexed
  point identity = 0;
  std::vector<point> gen_index;  // table elements chosen as generators
  PermGroup group;

  Perm regular(point i) const {
    std::vector<point> img(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) img[j] = table[j][i];
    return Perm::from_images(std::move(img));
  }
};

// Entries may be 0- or 1-indexed (detected from the range).
inline TableGroup group_from_table(const std::vector<std::vector<long long>>& raw) {
  const std::size_t n = raw.size();
  if (n == 0) throw invalid_input("table: empty table");
  long long lo = raw[0].empty() ? 0 : raw[0][0], hi = lo;
  for (const auto& r : raw) {
    if (r.size() != n) throw invalid_input("table: not square");
    for (auto x : r) lo = std::min(lo, x), hi = std::max(hi, x);
  }
  long long off;
  if (lo == 1 && hi == static_cast<long long>(n))
    off = 1;
  else if (lo == 0 && hi == static_cast<long long>(n) - 1)
    off = 0;
  else
    throw invalid_input("table: entries must be 1..n (or 0..n-1)");
  TableGroup T;
  T.table.assign(n, std::vector<point>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) T.table[i][j] = static_cast<point>(raw[i][j] - off);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<char> row(n, 0), col(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (row[T.table[i][j]]++ || col[T.table[j][i]]++)
        throw invalid_input("table: not a Latin square (line " + std::to_string(i + off) + ")");
    }
  }
  const auto& t = T.table;
  bool found = false;
  for (point e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (point j = 0; j < n && ok; ++j) ok = t[e][j] == j && t[j][e] == j;
    if (ok) T.identity = e, found = true;
  }
  if (!found) throw invalid_input("table: no identity element");
  // greedy generators by index, closing under right multiplication
  std::vector<char> in(n, 0);
  in[T.identity] = 1;
  std::vector<point> elems{T.identity};
  for (point i = 0; i < n; ++i) {
    if (in[i]) continue;
    T.gen_index.push_back(i);
    for (std::size_t k = 0; k < elems.size(); ++k)
      for (point g : T.gen_index) {
        point y = t[elems[k]][g];
        if (!in[y]) in[y] = 1, elems.push_back(y);
      }
  }
  // Light's test: associativity against generators suffices
  for (point a : T.gen_index)
    for (point x = 0; x < n; ++x)
      for (point y = 0; y < n; ++y)
        if (t[t[x][a]][y] != t[x][t[a][y]])
          throw invalid_input("not a group: associativity fails at (" + std::to_string(x + off) + "," +
                              std::to_string(a + off) + "," + std::to_string(y + off) + ")");
  std::vector<Perm> gens;
  for (point a : T.gen_index) gens.push_back(T.regular(a));
  T.group = PermGroup(n, gens);
  return T;
}

}  // namespace remak
