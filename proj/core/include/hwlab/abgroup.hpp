#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hwlab/snf.hpp"

namespace hwlab {

// Finitely presented abelian group Z^g / rowspan(rels).
class FinAb {
 public:
  FinAb() : g_(0) { init(); }
  FinAb(int gens, Mat rels);

  int ngens() const { return g_; }
  const Mat& lattice() const { return hnf_; }  // canonical HNF basis of relation lattice
  const std::vector<Int>& invariants() const { return inv_; }  // factors != 1, 0 per free rank
  bool finite() const { return free_rank_ == 0; }
  int free_rank() const { return free_rank_; }
  Int order() const;  // throws for infinite groups
  bool is_trivial() const { return finite() && order() == 1; }

  // Canonical form of a coordinate row (length g), in generator coordinates.
  Row normal_form(Row x) const;
  bool is_zero_elem(const Row& x) const;
  bool same_elem(const Row& x, const Row& y) const;

  // All elements in generator coordinates (finite groups, guarded).
  std::vector<Row> enumerate(const Int& guard = Int(200000)) const;
  Row random_elem(Rng& rng) const;

  std::string invariant_string() const;  // e.g. "Z/2 + Z/4"

 private:
  void init();
  int g_;
  Mat hnf_;
  SmithResult sm_;     // smith of hnf_
  std::vector<Int> dpad_;  // length g: invariant factor per smith coordinate (0 = free)
  std::vector<Int> inv_;
  int free_rank_ = 0;
};

// Homomorphism src -> tgt given on generators: row i of M = image of generator i.
struct AbMap {
  const FinAb* src = nullptr;
  const FinAb* tgt = nullptr;
  Mat M;

  Row apply(const Row& x) const { return row_mat_mul(x, M, tgt->ngens()); }
};

AbMap identity_map(const FinAb& G);
AbMap zero_map(const FinAb& src, const FinAb& tgt);
AbMap compose(const AbMap& f, const AbMap& g);  // apply f, then g
AbMap map_sum(const AbMap& f, const AbMap& g);
AbMap map_scale(const AbMap& f, const Int& c);
AbMap multiplication_map(const FinAb& G, const Int& c);
bool well_defined(const AbMap& f);
bool maps_equal(const AbMap& f, const AbMap& g);

// Subgroup of G spanned by given coordinate rows (plus relations of G implicitly).
struct Subgroup {
  const FinAb* amb = nullptr;
  Mat lat;  // canonical HNF of rows + ambient lattice
};

Subgroup span_subgroup(const FinAb& G, const Mat& rows);
Subgroup full_subgroup(const FinAb& G);
Subgroup zero_subgroup(const FinAb& G);
bool sub_contains(const Subgroup& S, const Row& x);
bool sub_leq(const Subgroup& S, const Subgroup& T);
bool sub_eq(const Subgroup& S, const Subgroup& T);
Subgroup sub_sum(const Subgroup& S, const Subgroup& T);
Subgroup preimage(const AbMap& f, const Subgroup& T);   // f^{-1}(T) in src
Subgroup image_subgroup(const AbMap& f);                // f(src) in tgt
Subgroup kernel_subgroup(const AbMap& f);
Subgroup sub_scale(const FinAb& G, const Subgroup& S, const Int& c);  // c * S
Subgroup sub_intersect(const Subgroup& S, const Subgroup& T);

// Presentation of the subquotient S/T together with lifts of its generators to G.
struct Subquotient {
  std::shared_ptr<FinAb> grp;
  Mat lifts;           // grp->ngens rows, each of length amb.ngens
  const FinAb* amb = nullptr;
  Mat kill;            // lattice defining T (rows in ambient coords, incl. ambient rels)
};

Subquotient present_subquotient(const FinAb& G, const Subgroup& S, const Subgroup& T);
Subquotient present_subgroup(const FinAb& G, const Subgroup& S);
Subquotient present_quotient(const FinAb& G, const Subgroup& T);

// Coordinates of ambient row x in the subquotient presentation (must lie in S).
std::optional<Row> subq_coords(const Subquotient& Q, const Row& x);

// Ambient -> subquotient projection; requires S to be the full ambient group
// (i.e. Q came from present_quotient).
AbMap quotient_projection(const Subquotient& Q);

// Map on subquotients induced by the ambient map f (must map S->S', T->T').
std::optional<AbMap> induced_map(const Subquotient& Q, const Subquotient& Qp, const AbMap& f);

// Kernel and cokernel as presented groups with structure maps.
struct KernelData {
  Subquotient pres;   // presentation of ker f as subquotient of src
};
struct CokernelData {
  std::shared_ptr<FinAb> grp;
  AbMap proj;  // tgt -> coker
};
KernelData kernel_data(const AbMap& f);
CokernelData cokernel_data(const AbMap& f);

// Homology ker(g)/im(f) at the middle of  A --f--> B --g--> C.
Subquotient homology(const AbMap& f, const AbMap& g);

struct ExactnessReport {
  bool composition_zero = false;
  bool exact = false;
  Int defect_order = 0;  // order of homology group (0 if infinite)
  std::string note;
};
ExactnessReport check_exact(const AbMap& f, const AbMap& g);

struct IsoReport {
  bool well_defined = false;
  bool injective = false;
  bool surjective = false;
  bool iso = false;
};
IsoReport check_iso(const AbMap& f);

}  // namespace hwlab
