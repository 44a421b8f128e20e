#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hwlab/monomial.hpp"
#include "hwlab/numeric.hpp"

namespace hwlab {

// A = F_p[x_1..x_m] / I for a monomial ideal I containing a pure power of every
// variable (that is exactly the Artinian condition for monomial ideals).
class MonomialAlgebra {
 public:
  MonomialAlgebra(int p, std::vector<std::string> vars, MonomialIdeal ideal);

  int p() const { return p_; }
  int nvars() const { return nvars_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const MonomialIdeal& ideal() const { return ideal_; }

  // Standard monomials (not in the ideal), graded-lex sorted; basis[0] = 1.
  const std::vector<Expo>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int basis_index(const Expo& m) const;  // -1 when m lies in the ideal
  // Least e with x_k^e in the ideal.
  int pure_power(int k) const { return pure_[k]; }
  // Least N with (augmentation ideal)^N = 0; nilpotency degree of (x_1..x_m).
  int nil_degree() const;
  // Maximal monomial ideal (x_1, .., x_m) as generators for W_r(I)-style uses.
  std::vector<Expo> maximal_ideal_monomials() const;  // basis members != 1

  bool same_as(const MonomialAlgebra& o) const {
    return p_ == o.p_ && vars_ == o.vars_ && ideal_.gens() == o.ideal_.gens();
  }

  std::string describe() const;

 private:
  int p_;
  int nvars_;
  std::vector<std::string> vars_;
  MonomialIdeal ideal_;
  std::vector<Expo> basis_;
  std::map<Expo, int> index_;
  std::vector<int> pure_;
};

// Element of A as a sparse combination of standard monomials, coefficients in [1, p).
class AlgElem {
 public:
  AlgElem() : A_(nullptr) {}
  explicit AlgElem(const MonomialAlgebra* A) : A_(A) {}
  static AlgElem monomial(const MonomialAlgebra* A, const Expo& m, int c = 1);
  static AlgElem scalar(const MonomialAlgebra* A, int c);

  const MonomialAlgebra* alg() const { return A_; }
  const std::map<int, int>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int coeff(int basis_idx) const;
  void set_coeff(int basis_idx, int c);  // c taken mod p

  AlgElem operator+(const AlgElem& o) const;
  AlgElem operator-(const AlgElem& o) const;
  AlgElem operator-() const;
  AlgElem operator*(const AlgElem& o) const;
  AlgElem scaled(int c) const;
  AlgElem pow(int e) const;
  AlgElem frobenius() const { return pow(A_->p()); }
  bool operator==(const AlgElem& o) const { return c_ == o.c_; }
  bool operator!=(const AlgElem& o) const { return c_ != o.c_; }
  bool operator<(const AlgElem& o) const { return c_ < o.c_; }

  // Unit iff the constant term is nonzero.
  bool is_unit() const;
  AlgElem inverse() const;

  // Constant term removed / constant term only.
  AlgElem augmentation_part() const;
  int constant_term() const { return coeff(0); }

  std::string str() const;

 private:
  const MonomialAlgebra* A_;
  std::map<int, int> c_;
};

// All elements of A (|A| = p^dim); guarded enumeration.
std::vector<AlgElem> all_elements(const MonomialAlgebra& A, std::int64_t guard = 200000);
// All units of A.
std::vector<AlgElem> all_units(const MonomialAlgebra& A, std::int64_t guard = 200000);
AlgElem random_element(const MonomialAlgebra& A, Rng& rng);
AlgElem random_unit(const MonomialAlgebra& A, Rng& rng);

// Convenience constructors for the two standard families.
MonomialAlgebra truncated_poly(int p, int s);                    // F_p[t]/t^s
MonomialAlgebra plane_algebra(int p, int a, int b);              // F_p[x,y]/(x^a, y^b)
MonomialAlgebra point_algebra(int p);                            // F_p itself

}  // namespace hwlab
