#pragma once

#include <functional>
#include <map>
#include <vector>

#include "hwlab/numeric.hpp"

namespace hwlab {

// Sparse multivariate polynomial over Z; monomials are exponent vectors.
class ZPoly {
 public:
  ZPoly() : nvars_(0) {}
  explicit ZPoly(int nvars) : nvars_(nvars) {}
  static ZPoly variable(int nvars, int k, int e = 1);
  static ZPoly constant(int nvars, Int c);

  int nvars() const { return nvars_; }
  const std::map<std::vector<int>, Int>& terms() const { return t_; }
  size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }

  void add_term(const std::vector<int>& e, const Int& c);

  ZPoly operator+(const ZPoly& o) const;
  ZPoly operator-(const ZPoly& o) const;
  ZPoly operator-() const;
  ZPoly operator*(const ZPoly& o) const;
  ZPoly scaled(const Int& c) const;
  // Exact scalar division; throws on nonzero remainder.
  ZPoly divexact_scalar(const Int& c) const;
  // Power with a term-count guard (SpanTooLarge protection).
  ZPoly pow(unsigned e, size_t guard = 2000000) const;
  bool operator==(const ZPoly& o) const { return nvars_ == o.nvars_ && t_ == o.t_; }

  // Renumber variables: new poly over new_nvars with var k -> varmap[k].
  ZPoly reindex(const std::vector<int>& varmap, int new_nvars) const;

  // Evaluate in a commutative ring R with embed: Int -> R.
  template <typename R>
  R eval(const std::vector<R>& args, const std::function<R(const Int&)>& embed) const {
    R acc = embed(0);
    for (const auto& [e, c] : t_) {
      R term = embed(c);
      for (int k = 0; k < nvars_; ++k) {
        if (e[k] == 0) continue;
        R b = args[k];
        unsigned ex = static_cast<unsigned>(e[k]);
        R pw = embed(1);
        while (ex) {
          if (ex & 1u) pw = pw * b;
          b = b * b;
          ex >>= 1u;
        }
        term = term * pw;
      }
      acc = acc + term;
    }
    return acc;
  }

  Int eval_int(const std::vector<Int>& args) const;

 private:
  int nvars_;
  std::map<std::vector<int>, Int> t_;
};

inline ZPoly ZPoly::variable(int nvars, int k, int e) {
  ZPoly p(nvars);
  std::vector<int> m(nvars, 0);
  m[k] = e;
  p.t_[m] = 1;
  return p;
}

inline ZPoly ZPoly::constant(int nvars, Int c) {
  ZPoly p(nvars);
  if (c != 0) p.t_[std::vector<int>(nvars, 0)] = std::move(c);
  return p;
}

inline void ZPoly::add_term(const std::vector<int>& e, const Int& c) {
  Int& slot = t_[e];
  slot += c;
  if (slot == 0) t_.erase(e);
}

inline ZPoly ZPoly::operator+(const ZPoly& o) const {
  ZPoly r = *this;
  for (const auto& [e, c] : o.t_) r.add_term(e, c);
  return r;
}

inline ZPoly ZPoly::operator-(const ZPoly& o) const {
  ZPoly r = *this;
  for (const auto& [e, c] : o.t_) r.add_term(e, -c);
  return r;
}

inline ZPoly ZPoly::operator-() const {
  ZPoly r(nvars_);
  for (const auto& [e, c] : t_) r.t_[e] = -c;
  return r;
}

inline ZPoly ZPoly::operator*(const ZPoly& o) const {
  ZPoly r(nvars_);
  for (const auto& [e1, c1] : t_)
    for (const auto& [e2, c2] : o.t_) {
      std::vector<int> e(nvars_);
      for (int k = 0; k < nvars_; ++k) e[k] = e1[k] + e2[k];
      r.add_term(e, c1 * c2);
    }
  return r;
}

inline ZPoly ZPoly::scaled(const Int& c) const {
  if (c == 0) return ZPoly(nvars_);
  ZPoly r(nvars_);
  for (const auto& [e, cc] : t_) r.t_[e] = cc * c;
  return r;
}

inline ZPoly ZPoly::divexact_scalar(const Int& c) const {
  ZPoly r(nvars_);
  for (const auto& [e, cc] : t_) r.t_[e] = divexact(cc, c);
  return r;
}

inline ZPoly ZPoly::pow(unsigned e, size_t guard) const {
  ZPoly r = ZPoly::constant(nvars_, 1);
  ZPoly b = *this;
  while (e) {
    if (e & 1u) {
      r = r * b;
      if (r.size() > guard) throw std::domain_error("SpanTooLarge: polynomial power blow-up");
    }
    e >>= 1u;
    if (e) {
      b = b * b;
      if (b.size() > guard) throw std::domain_error("SpanTooLarge: polynomial power blow-up");
    }
  }
  return r;
}

inline ZPoly ZPoly::reindex(const std::vector<int>& varmap, int new_nvars) const {
  ZPoly r(new_nvars);
  for (const auto& [e, c] : t_) {
    std::vector<int> m(new_nvars, 0);
    for (int k = 0; k < nvars_; ++k)
      if (e[k] != 0) m[varmap[k]] += e[k];
    r.add_term(m, c);
  }
  return r;
}

inline Int ZPoly::eval_int(const std::vector<Int>& args) const {
  Int acc = 0;
  for (const auto& [e, c] : t_) {
    Int term = c;
    for (int k = 0; k < nvars_; ++k)
      if (e[k] != 0) term *= ipow(args[k], static_cast<unsigned>(e[k]));
    acc += term;
  }
  return acc;
}

}  // namespace hwlab
