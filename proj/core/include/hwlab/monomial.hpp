#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hwlab {

// Exponent vector of a monomial in a fixed list of variables.
using Expo = std::vector<int>;

inline Expo expo_mul(const Expo& a, const Expo& b) {
  Expo r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline bool expo_divides(const Expo& a, const Expo& b) {  // a | b
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Expo expo_pow(const Expo& a, int k) {
  Expo r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return r;
}

inline int expo_total(const Expo& a) { return std::accumulate(a.begin(), a.end(), 0); }

// Graded lexicographic order (total degree, then lex).
inline bool expo_less(const Expo& a, const Expo& b) {
  int ta = expo_total(a), tb = expo_total(b);
  if (ta != tb) return ta < tb;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Ideal generated by monomials; supports membership and power.
class MonomialIdeal {
 public:
  MonomialIdeal() : nvars_(0) {}
  MonomialIdeal(int nvars, std::vector<Expo> gens) : nvars_(nvars), gens_(std::move(gens)) {
    for (const auto& g : gens_)
      if (static_cast<int>(g.size()) != nvars_) throw std::invalid_argument("ideal generator arity");
    minimalize();
  }

  int nvars() const { return nvars_; }
  const std::vector<Expo>& gens() const { return gens_; }

  bool contains(const Expo& m) const {
    for (const auto& g : gens_)
      if (expo_divides(g, m)) return true;
    return false;
  }

  // I^k, generated by k-fold products of generators.
  MonomialIdeal power(int k) const {
    if (k <= 0) throw std::invalid_argument("ideal power must be positive");
    std::vector<Expo> cur = {Expo(nvars_, 0)};
    for (int i = 0; i < k; ++i) {
      std::vector<Expo> next;
      for (const auto& a : cur)
        for (const auto& g : gens_) next.push_back(expo_mul(a, g));
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      cur = std::move(next);
    }
    return MonomialIdeal(nvars_, cur);
  }

 private:
  void minimalize() {
    std::vector<Expo> keep;
    for (size_t i = 0; i < gens_.size(); ++i) {
      bool redundant = false;
      for (size_t j = 0; j < gens_.size() && !redundant; ++j)
        if (j != i && expo_divides(gens_[j], gens_[i]) &&
            !(gens_[i] == gens_[j] && j > i))
          redundant = true;
      if (!redundant) keep.push_back(gens_[i]);
    }
    std::sort(keep.begin(), keep.end(), expo_less);
    gens_ = std::move(keep);
  }

  int nvars_;
  std::vector<Expo> gens_;
};

}  // namespace hwlab
