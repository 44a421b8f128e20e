#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hwlab/monomial.hpp"
#include "hwlab/numeric.hpp"
#include "hwlab/zpoly.hpp"

namespace hwlab {

// One layer of a canonical de Rham-Witt term over F_p[x_0..x_{m-1}], attached to
// one variable X:
//   Int(j)   :  ... * [X]^j                    (j >= 0)
//   Edge(j)  :  ... * [X]^{j-1} d[X]           (j >= 1)
//   V(i,j)   :  V^i( ... * [X]^j )             (i >= 1, j >= 1, p does not divide j)
//   DV(i,j)  :  dV^i( ... * [X]^j )            (same constraints)
// Layers are indexed by variable, variable m-1 outermost. V/DV drop the level of
// everything inside by i. The leaf holds a unit of Z/p^{leaf level}.
struct LayerOp {
  enum Kind : std::uint8_t { Int = 0, Edge = 1, V = 2, DV = 3 };
  std::uint8_t kind = Int;
  std::int32_t i = 0;
  std::int64_t j = 0;
  auto operator<=>(const LayerOp&) const = default;
};

using TermKey = std::vector<LayerOp>;
using DrwElem = std::map<TermKey, std::int64_t>;

// Per-variable weight num / p^{den} of a term, kept in lowest terms
// (den == 0 or p does not divide num; num == 0 forces den == 0).
struct WeightEntry {
  std::int64_t num = 0;
  int den = 0;
  auto operator<=>(const WeightEntry&) const = default;
};
using WeightVector = std::vector<WeightEntry>;

WeightEntry weight_reduce(WeightEntry w, int p);
WeightVector weight_sum(const WeightVector& a, const WeightVector& b, int p);
// Multiply every entry by p^e (e may be negative).
WeightVector weight_scale_p(const WeightVector& a, int p, int e);

// Exact element calculus in W_r Omega^*_{F_p[x_0..x_{m-1}]} in the canonical form
// above. All operations take the level r of their input explicitly.
class DrwEngine {
 public:
  DrwEngine(int p, int nvars);

  int p() const { return p_; }
  int nvars() const { return nvars_; }

  static int term_degree(const TermKey& t);
  int leaf_level(const TermKey& t, int r) const;  // r minus all V/DV drops
  void validate_term(const TermKey& t, int r) const;

  DrwElem normalize(const DrwElem& raw, int r) const;
  DrwElem add(const DrwElem& a, const DrwElem& b, int r) const;
  DrwElem sub(const DrwElem& a, const DrwElem& b, int r) const;
  DrwElem scale(const Int& c, const DrwElem& a, int r) const;
  DrwElem mul(const DrwElem& a, const DrwElem& b, int r) const;
  DrwElem d(const DrwElem& a, int r) const;
  DrwElem F(const DrwElem& a, int r) const;    // level r -> r-1
  DrwElem R(const DrwElem& a, int r) const;    // level r -> r-1
  DrwElem V(const DrwElem& a, int r) const;    // level r -> r+1
  DrwElem phi(const DrwElem& a, int r) const;  // Frobenius endo, level r -> r

  DrwElem iter_F(const DrwElem& a, int r, int times) const;
  DrwElem iter_V(const DrwElem& a, int r, int times) const;
  DrwElem iter_R(const DrwElem& a, int r, int times) const;

  // c * [x^e] (Teichmueller of the monomial, scaled by the integer c).
  DrwElem int_mono(const Int& c, const Expo& e, int r) const;
  // Teichmueller scalar lift tau(c) in Z/p^m: c^{p^{m-1}} mod p^m.
  std::int64_t teich_scalar(std::int64_t c, int leaf) const;
  // [c * x^e]: Teichmueller of the scaled monomial.
  DrwElem teich_mono(std::int64_t c, const Expo& e, int r) const;
  // [x^e]^{j...}d[x_k]-style basic form: [x^e] * d[x_{k1}] ^ ... (k's distinct,
  // e_k >= 1 for each k in K, exponent e_k used as [x_k]^{e_k - 1} d[x_k]).
  DrwElem basic_form(const Int& c, const Expo& e, const std::vector<int>& K, int r) const;

  // Ghost component k of a degree-0 element: a polynomial over Z in the x's.
  ZPoly ghost(const DrwElem& a, int r, int k) const;

  // Per-variable weight of a term: Int(j)/Edge(j) count j, V^i/dV^i count j/p^i
  // and divide everything inside by p^i.
  WeightVector weight(const TermKey& t) const;
  // Common weight of all terms, when the element is homogeneous (zero -> nullopt).
  std::optional<WeightVector> homogeneous_weight(const DrwElem& a) const;

  bool eq(const DrwElem& a, const DrwElem& b, int r) const;
  static bool is_zero(const DrwElem& a) { return a.empty(); }
  std::string str(const DrwElem& a) const;

 private:
  int p_, nvars_;

  // Layer-local recursion helpers; keys of length nl, outermost layer nl-1.
  DrwElem add_raw(DrwElem a, const DrwElem& b) const;
  DrwElem scale_raw(std::int64_t c, const DrwElem& a) const;
  DrwElem mul_in(const DrwElem& a, const DrwElem& b, int nl, int r) const;
  DrwElem mul_term(const TermKey& s, const TermKey& t, int nl, int r) const;
  DrwElem d_in(const DrwElem& a, int nl, int r) const;
  DrwElem d_term(const TermKey& t, int nl, int r) const;
  DrwElem F_in(const DrwElem& a, int nl, int r) const;
  DrwElem V_in(const DrwElem& a, int nl, int r) const;
  DrwElem R_in(const DrwElem& a, int nl, int r) const;
  DrwElem phi_in(const DrwElem& a, int nl, int r) const;

  // V^i(w * [X]^j) with w at level r, X the layer nl-1 variable; result level r+i.
  DrwElem mkV(int i, const DrwElem& w, std::int64_t j, int nl, int r) const;
  // V^i(w * [X]^{l-1} d[X]), result level r+i.
  DrwElem mkVE(int i, const DrwElem& w, std::int64_t l, int nl, int r) const;

  // Prefix every term of inner with the given outermost op (raw, no normalize).
  static DrwElem prefixed(const LayerOp& op, const DrwElem& inner);

  ZPoly ghost_term(const TermKey& t, std::int64_t c, int nl, int k) const;
};

}  // namespace hwlab
