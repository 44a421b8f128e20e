#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "hwlab/abgroup.hpp"
#include "hwlab/algebra.hpp"
#include "hwlab/drw.hpp"
#include "hwlab/kaehler.hpp"
#include "hwlab/witt.hpp"

namespace hwlab {

// Ground-level monomial content of a canonical term: per variable,
// (j - [layer is an edge]) * p^{sum of V/DV drops at layers inside this one}.
// Terms whose pooled exponent lands in the defining ideal die in the quotient;
// the remaining ones form the generator window.
Expo pooled_exponent(const TermKey& t, int p);

// Per-variable weight bound used while generating relations, with the
// self-certifying closure check (boundary shell reduces into the ideal).
struct WindowSpec {
  std::vector<std::int64_t> bound;
  bool closure_verified = false;
  int doublings = 0;
};

struct FinDrwGroup {
  int r = 0, n = 0;
  std::shared_ptr<FinAb> grp;
  std::vector<TermKey> dict;     // generator index -> canonical term
  std::map<TermKey, int> index;  // canonical term -> generator index
};

enum class FilKind { CANONICAL, P, V, CARTIER_B, CARTIER_Z };

// Witness data for the R - F surjectivity construction on relative groups.
struct RfRelativeWitness {
  bool not_relative = false;  // input survived in the reduced quotient
  int N = 0;                  // I^{p^N - 1} = 0
  int lift_level = 0;         // level of the intermediate lift
  DrwElem z;                  // at level r + 1
  bool cert_vanish = false;   // F^{r+N} of the lift dies at level r
  bool cert_rf = false;       // (R - F) z = omega in the level-r group
};

// Finite presentations of W_r Omega^n for an Artinian monomial algebra in at
// most two variables, with the structure maps, filtrations, Cartier ladder,
// unit/log data and R - F constructions. All results are cached; the lab owns
// every presented group, so returned references stay valid for its lifetime.
class DrwLab {
 public:
  DrwLab(const MonomialAlgebra& A, std::shared_ptr<WittUniv> univ);
  DrwLab(const DrwLab&) = delete;
  DrwLab& operator=(const DrwLab&) = delete;

  const MonomialAlgebra& alg() const { return *A_; }
  const DrwEngine& engine() const { return E_; }
  std::shared_ptr<WittUniv> univ() const { return univ_; }
  const WindowSpec& window_spec() const { return spec_; }
  std::int64_t nil_exponent(int v) const { return svec_[static_cast<std::size_t>(v)]; }

  // Presented group at level r >= 0, degree n (zero group when r = 0, n < 0 or
  // n > nvars). Builds and caches on first use; runs the degree-0 and level-1
  // anchor oracles when applicable.
  const FinDrwGroup& at(int r, int n);
  const FinAb& group(int r, int n) { return *at(r, n).grp; }

  // Coordinates of a canonical engine element; dropped terms must have pooled
  // exponent in the defining ideal (hard error otherwise).
  Row project(const DrwElem& a, int r, int n);
  DrwElem lift(const Row& x, int r, int n);

  const AbMap& mapR(int r, int n);    // (r, n) -> (r-1, n)
  const AbMap& mapF(int r, int n);    // (r, n) -> (r-1, n)
  const AbMap& mapV(int r, int n);    // (r, n) -> (r+1, n)
  const AbMap& mapD(int r, int n);    // (r, n) -> (r, n+1)
  const AbMap& mapPhi(int r, int n);  // endomorphism

  // Re-derives the relation lattice with caps inflated by `slack` (cross-check
  // helper; the built group used slack = 0).
  Mat relation_matrix(int r, int n, int slack);
  std::vector<TermKey> enumerate_belt(int r, int n,
                                      const std::vector<std::int64_t>& bound) const;

  // --- oracles ---
  const WittRing& witt(int r);
  const AbMap& to_witt_map(int r);    // group(r, 0) -> witt(r).pres()
  const AbMap& from_witt_map(int r);  // inverse direction
  const KaehlerComplex& kaehler();
  const AbMap& to_kaehler_map(int n);  // group(1, n) -> kaehler().omega(n)
  const AbMap& from_kaehler_map(int n);

  // --- filtrations; CARTIER kinds require r == 1 and use index i <= 3 ---
  Subgroup filtration(FilKind kind, int i, int r, int n);

  // --- level-1 Cartier ladder: B_0 = 0, Z_0 = all, X_{i+1} = pi_d^{-1}(C^{-1}(X_i)) ---
  const Subquotient& mod_d(int n);        // group(1, n) / image(d)
  const AbMap& mod_d_proj(int n);
  const AbMap& cartier_class_map(int n);  // C^{-1}: group(1, n) -> mod_d
  const Subquotient& cartier_piece(int n, int i);       // Z_i / B_i
  const AbMap& cartier_iterate_map(int n, int i);       // C^{-i}: group(1,n) -> Z_i/B_i
  const Subquotient& cartier_quot(int n, int i);        // group(1, n) / B_i
  const AbMap& cartier_pi_minus(int n, int i);  // pi_i - C^{-1}: G/B_i -> G/B_{i+1}

  // --- graded pieces of the canonical filtration ---
  const Subquotient& graded_piece(int r, int i, int q);  // Fil^i/Fil^{i+1} at (r, q)
  const AbMap& graded_piece_map(int r, int i, int q);    // group(1, q) -> graded piece

  // --- relative data against a further quotient of the same variables ---
  AbMap dict_projection(DrwLab& quot, int r, int n);
  Subgroup relative_subgroup(DrwLab& quot, int r, int n);
  Subquotient relative_presentation(DrwLab& quot, int r, int n);

  // --- units, log forms, reduced Frobenius, R - F constructions ---
  struct UnitGroup {
    std::vector<AlgElem> gens;
    std::shared_ptr<FinAb> grp;
    std::map<std::vector<int>, Row> table;  // element key -> exponents
    bool certified = false;                 // order == (p-1) p^{dim-1}
  };
  const UnitGroup& units();
  Row unit_coords(const AlgElem& u) const;  // exponents over the unit generators

  DrwElem teich_elem(const AlgElem& f, int r);  // [f], via the Witt bridge
  DrwElem dlog_elem(const AlgElem& u, int r);   // [u^{-1}] d[u]
  const AbMap& dlog_map(int r);                 // units().grp -> group(r, 1)
  Subgroup log_subgroup(int r, int n);

  const Subquotient& fbar_target(int r, int n);  // group(r,n)/image(d V^{r-1})
  const AbMap& fbar_proj(int r, int n);
  const AbMap& fbar(int r, int n);  // reduced Frobenius, with certificates

  // x' = -sum_{j=1..r} V^j R^{j-1} x at level r + 1; (R - F)(dx') = dx.
  DrwElem rf_preimage_of_dx(const DrwElem& x, int r);

  // z at level r + 1 with (R - F) z = omega, for omega in the relative part
  // against `quot`; follows the two-step lift through level 2r + N.
  RfRelativeWitness rf_relative_surjectivity(DrwLab& quot, const DrwElem& omega, int r,
                                             int n);

 private:
  MonomialAlgebra Aself_;
  const MonomialAlgebra* A_;  // = &Aself_; the lab owns its algebra copy
  std::shared_ptr<WittUniv> univ_;
  DrwEngine E_;
  MonomialIdeal J_;
  std::vector<std::int64_t> svec_;  // per-variable pure-power exponents
  WindowSpec spec_;

  std::map<std::pair<int, int>, FinDrwGroup> groups_;
  std::map<std::pair<int, int>, AbMap> mR_, mF_, mV_, mD_, mPhi_;
  std::map<int, std::unique_ptr<WittRing>> witt_;
  std::map<int, AbMap> toW_, fromW_, toK_, fromK_;
  std::unique_ptr<KaehlerComplex> kaehler_;
  std::map<int, Subquotient> modd_;
  std::map<int, AbMap> modd_proj_, cclass_, dlog_;
  std::map<std::pair<int, int>, Subgroup> cartB_, cartZ_;
  std::map<std::pair<int, int>, Subquotient> cpiece_, cquot_;
  std::map<std::pair<int, int>, AbMap> citer_, cpim_;
  std::map<std::tuple<int, int, int, int>, Subgroup> fil_;
  std::map<std::tuple<int, int, int>, Subquotient> graded_;
  std::map<std::tuple<int, int, int>, AbMap> graded_map_;
  std::optional<UnitGroup> units_;
  std::map<std::pair<int, int>, Subgroup> log_;
  std::map<std::pair<int, int>, Subquotient> fbar_tgt_;
  std::map<std::pair<int, int>, AbMap> fbar_proj_, fbar_;

  void check_shell(int r, int n);
  FinDrwGroup build(int r, int n);
  Mat relation_rows(int r, int n, int slack, const std::vector<TermKey>& dict,
                    const std::map<TermKey, int>& index);
  AbMap vchain(int from_r, int n, int times);  // V^times from level from_r
  void check_witt_anchor(int r);
  void check_kaehler_anchor(int n);
  AbMap term_map(int r, int n, int r2, int n2,
                 const std::function<DrwElem(const DrwElem&)>& op);
  Subgroup cartier_sub(bool wantZ, int i, int n);
  Mat cartier_amb_lift(int n);  // ambient rows of a lift of C^{-1} through mod_d
};

}  // namespace hwlab
