#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace remak {

using point = std::uint32_t;

// Permutation of {0..n-1}, acting on the right: x^(ab) = (x^a)^b.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t n) : img_(n) { std::iota(img_.begin(), img_.end(), point{0}); }

  static Perm identity(std::size_t n) { return Perm(n); }

  static Perm from_images(std::vector<point> img) {
    std::vector<char> seen(img.size(), 0);
    for (point x : img) {
      if (x >= img.size() || seen[x]) throw invalid_input("not a permutation: duplicate or out-of-range image");
      seen[x] = 1;
    }
    Perm p;
    p.img_ = std::move(img);
    return p;
  }

  // Cycles are lists of points; one_based selects the point labelling.
  static Perm from_cycles(std::size_t n, const std::vector<std::vector<long long>>& cycles, bool one_based = true) {
    Perm p(n);
    std::vector<char> used(n, 0);
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        long long a = c[i] - (one_based ? 1 : 0);
        long long b = c[(i + 1) % c.size()] - (one_based ? 1 : 0);
        if (a < 0 || b < 0 || a >= static_cast<long long>(n) || b >= static_cast<long long>(n))
          throw invalid_input("cycle point out of range");
        if (used[a]) throw invalid_input("point repeated in cycle notation");
        used[a] = 1;
        p.img_[a] = static_cast<point>(b);
      }
    }
    return p;
  }

  std::size_t degree() const { return img_.size(); }
  point operator[](point x) const { return img_[x]; }
  const std::vector<point>& images() const { return img_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  // this first, then o
  Perm operator*(const Perm& o) const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[i] = o.img_[img_[i]];
    return r;
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<point>(i);
    return r;
  }

  Perm pow(long long k) const {
    Perm base = k < 0 ? inverse() : *this;
    unsigned long long e = k < 0 ? static_cast<unsigned long long>(-(k + 1)) + 1 : static_cast<unsigned long long>(k);
    Perm r(img_.size());
    while (e) {
      if (e & 1) r = r * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return r;
  }

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  // canonical element order
  bool operator<(const Perm& o) const { return img_ < o.img_; }

  std::vector<std::vector<point>> cycles() const {
    std::vector<std::vector<point>> out;
    std::vector<char> seen(img_.size(), 0);
    for (point i = 0; i < img_.size(); ++i) {
      if (seen[i] || img_[i] == i) continue;
      std::vector<point> c;
      for (point x = i; !seen[x]; x = img_[x]) {
        seen[x] = 1;
        c.push_back(x);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  std::uint64_t order() const {
    std::uint64_t l = 1;
    for (const auto& c : cycles()) {
      std::uint64_t g = std::gcd(l, static_cast<std::uint64_t>(c.size()));
      std::uint64_t m = c.size() / g;
      if (l > UINT64_MAX / m) throw resource_bound("element order overflows 64 bits");
      l *= m;
    }
    return l;
  }

  // smallest moved point, or degree() when identity
  point first_moved() const {
    for (point i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return i;
    return static_cast<point>(img_.size());
  }

  std::string str() const {
    auto cs = cycles();
    if (cs.empty()) return "()";
    std::ostringstream os;
    for (const auto& c : cs) {
      os << '(';
      for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i] + 1;
      os << ')';
    }
    return os.str();
  }

 private:
  std::vector<point> img_;
};

// x^g = g^-1 x g
inline Perm conj(const Perm& x, const Perm& g) { return g.inverse() * x * g; }

// [x,y] = x^-1 y^-1 x y
inline Perm comm(const Perm& x, const Perm& y) { return x.inverse() * y.inverse() * x * y; }

struct perm_hash {
  std::size_t operator()(const Perm& p) const {
    std::size_t h = 1469598103934665603ull;
    for (point x : p.images()) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

}  // namespace remak
