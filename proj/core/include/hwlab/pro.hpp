#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hwlab/abgroup.hpp"

namespace hwlab {

// Tower of finitely presented abelian groups indexed 1..S. Only the one-step
// maps are stored; every transition t -> s is the composite of steps, so
// transitivity holds by construction.
struct ProGroup {
  std::vector<std::shared_ptr<FinAb>> levels;  // levels[s-1] = M_s
  std::vector<AbMap> steps;                    // steps[s-1] : M_{s+1} -> M_s

  int bound() const { return static_cast<int>(levels.size()); }
  const FinAb& level(int s) const { return *levels[static_cast<std::size_t>(s - 1)]; }
  AbMap transition(int t, int s) const;  // t >= s >= 1
};

// Validates shapes and well-definedness of every step.
ProGroup make_pro(std::vector<std::shared_ptr<FinAb>> levels, std::vector<AbMap> steps);

// Level maps f_s : M_s -> N_s; the squares against both towers' steps are
// verified on construction.
struct ProMap {
  const ProGroup* src = nullptr;
  const ProGroup* tgt = nullptr;
  std::vector<AbMap> level;  // level[s-1] = f_s
};

ProMap make_pro_map(const ProGroup& src, const ProGroup& tgt, std::vector<AbMap> level);

struct Witness {
  std::string part;  // "" | "ker" | "coker" | "homology"
  int s = 0;
  int t = -1;  // -1 = NOT_FOUND
  bool found() const { return t >= 0; }
};

struct WitnessReport {
  std::string claim;
  std::string grid;
  std::string kind;  // pro_zero | pro_iso | pro_exact
  int bound = 0;
  int prefix = 0;  // tested s <= prefix
  bool pass = false;
  bool monotone_checked = false;
  std::vector<Witness> witnesses;
  std::string detail;  // CompositionNonzero / defect element / NOT_FOUND notes

  std::string to_json() const;
  std::string to_csv() const;  // one row per (claim, part, s)
};

// Least t <= bound with transition t -> s zero, for each tested s. The tested
// prefix defaults to bound/2 so witnesses have room; pass prefix explicitly to
// override. Found witnesses are spot-checked for monotonicity at t+1.
WitnessReport pro_zero(const ProGroup& P, int prefix = 0, const std::string& claim = "");

// Kernel and cokernel towers of f, level-wise, each run through pro_zero.
WitnessReport pro_iso(const ProMap& f, int prefix = 0, const std::string& claim = "");

// Homology tower ker(g_s)/im(f_s) run through pro_zero. A nonzero composite
// g_s o f_s is reported as CompositionNonzero, not thrown.
WitnessReport pro_exact(const ProMap& f, const ProMap& g, int prefix = 0,
                        const std::string& claim = "");

// Derived towers. Transitions are induced by the ambient steps; induction
// failures (impossible when the inputs were validated) throw logic_error.
ProGroup kernel_tower(const ProMap& f);
ProGroup cokernel_tower(const ProMap& f);
ProGroup homology_tower(const ProMap& f, const ProMap& g);

// c-torsion subtower {x : cx = 0} with its level presentations kept so maps
// can be restricted to it.
struct TorsionData {
  ProGroup tower;
  std::vector<Subquotient> pres;  // per level, subquotient of P's level
};
TorsionData torsion_tower(const ProGroup& P, const Int& c);

// Restriction of f to the c-torsion towers built by torsion_tower.
ProMap torsion_map(const ProMap& f, const TorsionData& srcT, const TorsionData& tgtT);

}  // namespace hwlab
