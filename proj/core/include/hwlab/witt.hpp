#pragma once

#include <map>
#include <memory>
#include <vector>

#include "hwlab/abgroup.hpp"
#include "hwlab/algebra.hpp"
#include "hwlab/wittuniv.hpp"

namespace hwlab {

// Element of Z[x]/(monomial ideal lift): integer coefficients on the standard
// monomial basis of A. Used for exact ghost-component oracles.
class ZAlgElem {
 public:
  ZAlgElem() : A_(nullptr) {}
  explicit ZAlgElem(const MonomialAlgebra* A) : A_(A) {}
  static ZAlgElem scalar(const MonomialAlgebra* A, Int c);
  static ZAlgElem lift(const AlgElem& e);  // canonical coefficients in [0, p)

  const MonomialAlgebra* alg() const { return A_; }
  const std::map<int, Int>& coeffs() const { return c_; }
  void add_coeff(int idx, const Int& c);

  ZAlgElem operator+(const ZAlgElem& o) const;
  ZAlgElem operator-(const ZAlgElem& o) const;
  ZAlgElem operator*(const ZAlgElem& o) const;
  ZAlgElem scaled(const Int& c) const;
  ZAlgElem pow(unsigned e) const;
  bool operator==(const ZAlgElem& o) const { return c_ == o.c_; }

  AlgElem mod_p() const;
  bool divisible_by(const Int& m) const;
  ZAlgElem divexact_by(const Int& m) const;

 private:
  const MonomialAlgebra* A_;
  std::map<int, Int> c_;
};

// Truncated p-typical Witt vectors W_r(A) with exact arithmetic through the
// universal polynomials, plus the finite presentation by generators V^i[mu].
class WittRing {
 public:
  using Vec = std::vector<AlgElem>;  // length r

  WittRing(const MonomialAlgebra& A, int r, std::shared_ptr<WittUniv> univ);

  const MonomialAlgebra& alg() const { return *A_; }
  int r() const { return r_; }
  WittUniv& univ() const { return *univ_; }

  Vec zero() const;
  Vec one() const;
  Vec teich(const AlgElem& a) const;  // [a]
  Vec add(const Vec& a, const Vec& b) const;
  Vec neg(const Vec& a) const;
  Vec sub(const Vec& a, const Vec& b) const;
  Vec mul(const Vec& a, const Vec& b) const;
  Vec scalar_mult(Int c, const Vec& a) const;
  Vec pow(const Vec& a, unsigned e) const;

  Vec V(const Vec& lower) const;  // W_{r-1} -> W_r (also accepts length r, truncating)
  Vec F(const Vec& a) const;      // W_r -> W_{r-1}
  Vec R(const Vec& a) const;      // W_r -> W_{r-1}

  Vec random_vec(Rng& rng) const;
  bool in_ideal(const Vec& a, const MonomialIdeal& J) const;  // coords in J
  Vec random_ideal_vec(const MonomialIdeal& J, Rng& rng) const;

  // Ghost components of an integer lift, w_0..w_{r-1}, exact over Z[x]/~I.
  std::vector<ZAlgElem> ghost(const std::vector<ZAlgElem>& lift) const;
  static std::vector<ZAlgElem> lift_vec(const Vec& a);

  // --- finite presentation ---
  // Generators e_{(i,mu)} = V^i([mu]), i < r, mu a basis monomial (including 1).
  // Relations: p e_{(i,mu)} = e_{(i+1, mu^p)} (right side omitted when mu^p in I
  // or i = r-1).
  const FinAb& pres() const { return *grp_; }
  std::shared_ptr<FinAb> pres_ptr() const { return grp_; }
  int gen_id(int i, int mu) const { return i * A_->dim() + mu; }
  int gen_level(int g) const { return g / A_->dim(); }
  int gen_mono(int g) const { return g % A_->dim(); }

  Row coords(const Vec& w) const;    // greedy expression over the generators
  Vec from_coords(const Row& x) const;
  Row mul_coords(const Row& x, const Row& y) const;  // induced ring structure

  // Subgroup W_r(J) spanned by e_{(i,mu)}, mu in J (J a monomial ideal in A).
  Subgroup ideal_subgroup(const MonomialIdeal& J) const;
  // Product subgroup S*T: spanned by pairwise products of generator lifts.
  Subgroup product_subgroup(const Subgroup& S, const Subgroup& T) const;

 private:
  const MonomialAlgebra* A_;
  int r_;
  std::shared_ptr<WittUniv> univ_;
  std::shared_ptr<FinAb> grp_;
  AlgElem embed_int(const Int& c) const;
};

// Structure maps between presentations at different levels (same algebra).
AbMap witt_map_R(const WittRing& from, const WittRing& to);  // W_r -> W_{r-1}
AbMap witt_map_F(const WittRing& from, const WittRing& to);  // W_r -> W_{r-1}
AbMap witt_map_V(const WittRing& from, const WittRing& to);  // W_{r-1} -> W_r

// Units (1 + t F_p[t]/t^s)^x with its decomposition into cyclic p-groups
// generated by 1 - t^d for d coprime to p, certified by full enumeration.
class BigWittUnits {
 public:
  BigWittUnits(int p, int s);

  const MonomialAlgebra& alg() const { return *A_; }
  const std::vector<int>& ds() const { return ds_; }
  int md(int d) const;                       // order of 1 - t^d is p^{m_d}
  Int group_order() const;                   // p^{s-1}
  bool decomposition_certified() const { return certified_; }

  AlgElem unit_from_exponents(const std::vector<Int>& e) const;
  std::vector<Int> dlog(const AlgElem& u) const;  // exponents mod p^{m_d}

 private:
  int p_, s_;
  std::unique_ptr<MonomialAlgebra> A_;
  std::vector<int> ds_;
  std::vector<int> md_;
  std::map<std::vector<int>, std::vector<Int>> table_;  // dense coeffs -> exponents
  bool certified_ = false;
  std::vector<int> key(const AlgElem& u) const;
};

}  // namespace hwlab
