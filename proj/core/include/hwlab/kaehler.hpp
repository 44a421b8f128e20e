#pragma once

#include <map>
#include <vector>

#include "hwlab/abgroup.hpp"
#include "hwlab/algebra.hpp"

namespace hwlab {

// Modules of Kahler differentials Omega^n of an Artinian monomial algebra,
// presented as finite abelian groups with explicit generator bookkeeping.
// Generator (mu, K): basis monomial mu times dx_{k1} ^ .. ^ dx_{kn}, K sorted.
class KaehlerComplex {
 public:
  explicit KaehlerComplex(const MonomialAlgebra& A);
  KaehlerComplex(const KaehlerComplex&) = delete;
  KaehlerComplex& operator=(const KaehlerComplex&) = delete;

  const MonomialAlgebra& alg() const { return *A_; }
  int top_degree() const { return A_->nvars(); }

  struct Gen {
    int mu;
    std::vector<int> K;
  };

  const FinAb& omega(int n) const;
  const std::vector<Gen>& gens(int n) const;
  int gen_index(int n, int mu, const std::vector<int>& K) const;

  AbMap d(int n) const;  // exterior derivative omega(n) -> omega(n+1)

  // f * w for f in A, w a coordinate row of omega(n).
  Row mult_by(int n, const AlgElem& f, const Row& w) const;
  // w1 ^ w2 -> row of omega(n1+n2).
  Row wedge(int n1, const Row& w1, int n2, const Row& w2) const;
  // f dg_1 ^ ... ^ dg_n as a row of omega(n).
  Row encode_fdg(const AlgElem& f, const std::vector<AlgElem>& gs) const;
  Row encode_dmono(int n, int mu, const std::vector<int>& K) const;  // mu dx_K as row

  // Inverse Cartier on generators: mu dx_K -> mu^p prod_{k in K} x_k^{p-1} dx_K,
  // a row of omega(n) representing the class in omega(n)/d(omega(n-1)).
  Row cartier_inverse_gen(int n, int g) const;

 private:
  const MonomialAlgebra* A_;
  std::vector<std::vector<Gen>> gens_;
  std::vector<std::map<std::pair<int, std::vector<int>>, int>> index_;
  std::vector<FinAb> omega_;
  std::vector<AbMap> d_;
  void build();
};

// Sign of merging sorted disjoint index sets K and L (count of inversions).
int merge_sign(const std::vector<int>& K, const std::vector<int>& L);

}  // namespace hwlab
