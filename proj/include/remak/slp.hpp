#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "perm.hpp"

namespace remak {

// Straight-line program. Each step references generators or earlier steps;
// the value is the last step, and an empty program is the identity.
struct SlpStep {
  enum class Op : std::uint8_t { gen, mul, inv, pow };
  Op op;
  std::uint32_t a = 0, b = 0;
  std::int64_t k = 0;
};

class Slp {
 public:
  Slp() = default;
  explicit Slp(std::vector<SlpStep> steps) : steps_(std::move(steps)) {}

  static Slp generator(std::uint32_t i) { return Slp({{SlpStep::Op::gen, i, 0, 0}}); }

  const std::vector<SlpStep>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }

  std::uint32_t push(SlpStep s) {
    steps_.push_back(s);
    return static_cast<std::uint32_t>(steps_.size() - 1);
  }
  std::uint32_t gen(std::uint32_t i) { return push({SlpStep::Op::gen, i, 0, 0}); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) { return push({SlpStep::Op::mul, a, b, 0}); }
  std::uint32_t inv(std::uint32_t a) { return push({SlpStep::Op::inv, a, 0, 0}); }
  std::uint32_t pow(std::uint32_t a, std::int64_t k) { return push({SlpStep::Op::pow, a, 0, k}); }

  // Generic evaluation: T needs copy, mul(T,T), inv(T).
  template <class T, class Mul, class Inv>
  T eval(const std::vector<T>& gens, const T& id, Mul mul, Inv inv) const {
    if (steps_.empty()) return id;
    std::vector<T> v;
    v.reserve(steps_.size());
    for (const auto& s : steps_) {
      switch (s.op) {
        case SlpStep::Op::gen:
          if (s.a >= gens.size()) throw invalid_input("slp references a missing generator");
          v.push_back(gens[s.a]);
          break;
        case SlpStep::Op::mul: v.push_back(mul(v.at(s.a), v.at(s.b))); break;
        case SlpStep::Op::inv: v.push_back(inv(v.at(s.a))); break;
        case SlpStep::Op::pow: {
          T base = s.k < 0 ? inv(v.at(s.a)) : v.at(s.a);
          unsigned long long e = s.k < 0 ? static_cast<unsigned long long>(-s.k) : static_cast<unsigned long long>(s.k);
          T r = id;
          while (e) {
            if (e & 1) r = mul(r, base);
            e >>= 1;
            if (e) base = mul(base, base);
          }
          v.push_back(std::move(r));
          break;
        }
      }
    }
    return v.back();
  }

  Perm eval(const std::vector<Perm>& gens, std::size_t degree) const {
    return eval<Perm>(
        gens, Perm::identity(degree), [](const Perm& x, const Perm& y) { return x * y; },
        [](const Perm& x) { return x.inverse(); });
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      const auto& s = steps_[i];
      os << (i ? "; " : "") << 'r' << i << '=';
      switch (s.op) {
        case SlpStep::Op::gen: os << 'x' << s.a + 1; break;
        case SlpStep::Op::mul: os << 'r' << s.a << "*r" << s.b; break;
        case SlpStep::Op::inv: os << 'r' << s.a << "^-1"; break;
        case SlpStep::Op::pow: os << 'r' << s.a << '^' << s.k; break;
      }
    }
    return os.str();
  }

 private:
  std::vector<SlpStep> steps_;
};

}  // namespace remak
