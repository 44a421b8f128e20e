#pragma once

#include <vector>

#include "hwlab/witt.hpp"

namespace hwlab {

// Finite set of positive integers closed under divisors.
struct TruncationSet {
  std::vector<int> elems;  // sorted ascending

  explicit TruncationSet(std::vector<int> e);
  bool contains(int k) const;
  // S/m = {s : s*m in S}.
  TruncationSet quotient(int m) const;
};

TruncationSet full_truncation(int n);  // {1, ..., n}

// Big Witt vectors 𝕎_{s-1}(F_p), realised through the isomorphism
//   gamma: (w_1..w_{s-1}) -> prod_i (1 + w_i t^i)
// onto the principal units of F_p[t]/t^s. Arithmetic is transported from the
// unit group; the p-typical decomposition comes from BigWittUnits.
class BigWitt {
 public:
  using Vec = std::vector<int>;  // coords w_1..w_{s-1}, values mod p

  BigWitt(int p, int s);  // s >= 2

  int p() const { return p_; }
  int s() const { return s_; }
  const MonomialAlgebra& alg() const { return units_.alg(); }
  const BigWittUnits& units() const { return units_; }
  TruncationSet truncation() const { return full_truncation(s_ - 1); }

  Vec zero() const { return Vec(static_cast<std::size_t>(s_ - 1), 0); }
  Vec single(int i, int c) const;  // V_i[c]

  AlgElem gamma(const Vec& w) const;
  Vec gamma_inv(const AlgElem& u) const;  // u a principal unit

  Vec add(const Vec& a, const Vec& b) const;
  // Exponents over the p-typical components (index matching units().ds()).
  std::vector<Int> decompose(const Vec& w) const;
  Vec from_decomposition(const std::vector<Int>& e) const;

  // gamma bijective onto principal units (verified on all elements for s <= 8)
  // and the component decomposition certified.
  bool certified() const { return certified_; }

 private:
  int p_, s_;
  BigWittUnits units_;
  bool certified_ = false;
};

// Generating set of W_r(I) inside W_r(A), with a span certificate.
struct WittIdealGens {
  std::vector<WittRing::Vec> gens;  // V^i([c*mu]), mu an I-monomial
  Subgroup span;                    // additive span in the presentation
  bool certified = false;           // span == {vectors with all coords in I}
};

// Guard: the span certificate is only attempted when |A|^r <= 10^6; above that
// the generators are returned with certified == false.
WittIdealGens witt_ideal(const WittRing& W, const MonomialIdeal& J);

// Search for M >= N with W_r(I^M) contained in the W_r(A)-ideal generated by
// the Teichmueller lifts [g^N] of the ideal generators, checked vector by
// vector; also samples the easy inclusion W_r(I)^N <= W_r(I^N).
struct IntertwineWitness {
  int N = 0;
  int M = -1;
  bool found = false;
  int certified_gens = 0;   // membership certificates at the found M
  int easy_products = 0;    // random N-fold products verified in W_r(I^N)
  bool easy_inclusion = false;
};

IntertwineWitness intertwine_witness(const WittRing& W, const MonomialIdeal& I, int N, int bound,
                                     Rng& rng);

}  // namespace hwlab
