#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "hwlab/pro.hpp"

using namespace hwlab;

namespace {

std::shared_ptr<FinAb> cyc(const Int& n) { return std::make_shared<FinAb>(1, Mat{{n}}); }

ProGroup constant_tower(std::shared_ptr<FinAb> G, int S) {
  std::vector<std::shared_ptr<FinAb>> levels(static_cast<std::size_t>(S), G);
  std::vector<AbMap> steps(static_cast<std::size_t>(S - 1), identity_map(*G));
  return make_pro(std::move(levels), std::move(steps));
}

ProGroup zero_tower(int S) {
  std::vector<std::shared_ptr<FinAb>> levels;
  for (int s = 0; s < S; ++s) levels.push_back(std::make_shared<FinAb>(0, Mat{}));
  std::vector<AbMap> steps;
  for (int s = 0; s + 1 < S; ++s)
    steps.push_back(zero_map(*levels[static_cast<std::size_t>(s + 1)],
                             *levels[static_cast<std::size_t>(s)]));
  return make_pro(std::move(levels), std::move(steps));
}

// M_s = Z/p^s with one-step map x -> px (multiply, then reduce). The
// transition t -> s is x -> p^{t-s} x, which kills Z/p^s exactly when
// t - s >= s, so the least pro-zero witness is t(s) = 2s.
ProGroup shrink_tower(int p, int S) {
  std::vector<std::shared_ptr<FinAb>> levels;
  for (int s = 1; s <= S; ++s) levels.push_back(cyc(ipow(Int(p), static_cast<unsigned>(s))));
  std::vector<AbMap> steps;
  for (int s = 1; s < S; ++s)
    steps.push_back(AbMap{levels[static_cast<std::size_t>(s)].get(),
                          levels[static_cast<std::size_t>(s - 1)].get(), Mat{{Int(p)}}});
  return make_pro(std::move(levels), std::move(steps));
}

ProMap scalar_endo(const ProGroup& P, const Int& c) {
  std::vector<AbMap> level;
  for (int s = 1; s <= P.bound(); ++s) level.push_back(multiplication_map(P.level(s), c));
  return make_pro_map(P, P, std::move(level));
}

template <typename F>
std::string thrown_with(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("pro_zero verdicts and witnesses") {
  int S = 8;

  // Constant nonzero tower: the identity transition never dies.
  ProGroup c = constant_tower(cyc(2), S);
  WitnessReport rc = pro_zero(c, 0, "constant Z/2");
  CHECK_FALSE(rc.pass);
  CHECK(rc.prefix == 4);
  CHECK(rc.witnesses[0].s == 1);
  CHECK_FALSE(rc.witnesses[0].found());
  CHECK(rc.detail.find("NOT_FOUND at s=1") != std::string::npos);

  // Zero tower: t(s) = s.
  WitnessReport rz = pro_zero(zero_tower(S), 0, "zero tower");
  CHECK(rz.pass);
  for (const auto& w : rz.witnesses) CHECK(w.t == w.s);

  // Shrinking tower: t(s) = 2s (see shrink_tower).
  for (int p : {2, 3}) {
    WitnessReport rs = pro_zero(shrink_tower(p, S), 0, "shrink");
    CHECK(rs.pass);
    CHECK(rs.monotone_checked);
    CHECK(rs.witnesses.size() == 4);
    for (const auto& w : rs.witnesses) CHECK(w.t == 2 * w.s);
  }
}

TEST_CASE("transitions compose transitively") {
  ProGroup P = shrink_tower(2, 8);
  AbMap direct = P.transition(6, 2);
  AbMap two_hop = compose(P.transition(6, 4), P.transition(4, 2));
  CHECK(maps_equal(direct, two_hop));
}

TEST_CASE("pro map construction rejects bad squares") {
  ProGroup P = shrink_tower(2, 4);
  ProGroup C = constant_tower(cyc(2), 4);
  // Reduction Z/2^s -> Z/2 commutes with the shrink steps only through zero
  // transitions on the target; against the constant tower the square breaks.
  std::vector<AbMap> level;
  for (int s = 1; s <= 4; ++s) level.push_back(AbMap{&P.level(s), &C.level(s), Mat{{Int(1)}}});
  std::string msg = thrown_with([&] { make_pro_map(P, C, std::move(level)); });
  CHECK(msg.find("squares") != std::string::npos);
}

TEST_CASE("pro_iso on identity, zero, and a gap-one inclusion") {
  int S = 8;
  ProGroup N = shrink_tower(2, S);

  WitnessReport rid = pro_iso(scalar_endo(N, 1), 0, "identity");
  CHECK(rid.pass);
  for (const auto& w : rid.witnesses) CHECK(w.t == w.s);

  ProGroup c = constant_tower(cyc(2), S);
  WitnessReport rzero = pro_iso(scalar_endo(c, 0), 0, "zero endo");
  CHECK_FALSE(rzero.pass);
  CHECK(rzero.detail.find("NOT_FOUND") != std::string::npos);

  // M_s = p Z/p^s included in N_s = Z/p^s: level-wise injective, cokernel
  // Z/p killed by one shrink step, so coker witnesses sit at t(s) = s + 1.
  std::vector<Subquotient> pres;
  std::vector<std::shared_ptr<FinAb>> mlevels;
  for (int s = 1; s <= S; ++s) {
    pres.push_back(present_subgroup(N.level(s), span_subgroup(N.level(s), Mat{{Int(2)}})));
    mlevels.push_back(pres.back().grp);
  }
  std::vector<AbMap> msteps;
  for (int s = 1; s < S; ++s) {
    auto m = induced_map(pres[static_cast<std::size_t>(s)], pres[static_cast<std::size_t>(s - 1)],
                         N.steps[static_cast<std::size_t>(s - 1)]);
    REQUIRE(m.has_value());
    msteps.push_back(*m);
  }
  ProGroup M = make_pro(mlevels, msteps);
  std::vector<AbMap> incl;
  for (int s = 1; s <= S; ++s) {
    const Subquotient& q = pres[static_cast<std::size_t>(s - 1)];
    incl.push_back(AbMap{q.grp.get(), &N.level(s), q.lifts});
  }
  ProMap f = make_pro_map(M, N, std::move(incl));
  WitnessReport rincl = pro_iso(f, 0, "gap-one inclusion");
  CHECK(rincl.pass);
  for (const auto& w : rincl.witnesses) {
    if (w.part == "ker") CHECK(w.t == w.s);
    if (w.part == "coker") CHECK(w.t == w.s + 1);
  }

  // A pro-isomorphism restricts to one on p-torsion towers within the bound.
  TorsionData mt = torsion_tower(M, 2);
  TorsionData nt = torsion_tower(N, 2);
  WitnessReport rtor = pro_iso(torsion_map(f, mt, nt), 0, "torsion restriction");
  CHECK(rtor.pass);

  // The p-torsion of the shrink tower itself is pro-zero with gap one.
  WitnessReport rtz = pro_zero(nt.tower, 0, "shrink torsion");
  CHECK(rtz.pass);
  for (const auto& w : rtz.witnesses) CHECK(w.t == w.s + 1);
}

TEST_CASE("pro_exact across a three-term fixture") {
  int S = 8;

  // Split constant sequence Z/2 -> Z/2 + Z/4 -> Z/4.
  auto B = std::make_shared<FinAb>(2, Mat{{Int(2), Int(0)}, {Int(0), Int(4)}});
  ProGroup TA = constant_tower(cyc(2), S);
  ProGroup TB = constant_tower(B, S);
  ProGroup TC = constant_tower(cyc(4), S);
  std::vector<AbMap> fl, gl;
  for (int s = 1; s <= S; ++s) {
    fl.push_back(AbMap{&TA.level(s), &TB.level(s), Mat{{Int(1), Int(0)}}});
    gl.push_back(AbMap{&TB.level(s), &TC.level(s), Mat{{Int(0)}, {Int(1)}}});
  }
  WitnessReport rsplit = pro_exact(make_pro_map(TA, TB, fl), make_pro_map(TB, TC, gl), 0, "split");
  CHECK(rsplit.pass);
  for (const auto& w : rsplit.witnesses) CHECK(w.t == w.s);

  // Shrink tower B, f = multiplication by p^2, g = reduction to Z/p with zero
  // steps. Level-wise homology ker(g)/im(f) = pZ/p^2 is nonzero, but one
  // shrink step lands it in p^2 Z: witnesses t(1) = 1 (B_1 has zero homology)
  // and t(s) = s + 1 for s >= 2. ker(f_s) = p^{s-2} Z/p^s dies with the same
  // gap: its generator maps to p^{2t-2-s} at level s, zero iff t >= s + 1.
  ProGroup P = shrink_tower(2, S);
  std::vector<std::shared_ptr<FinAb>> clevels(static_cast<std::size_t>(S), cyc(2));
  std::vector<AbMap> csteps(static_cast<std::size_t>(S - 1),
                            zero_map(*clevels[0], *clevels[0]));
  ProGroup C = make_pro(clevels, csteps);
  std::vector<AbMap> redl;
  for (int s = 1; s <= S; ++s) redl.push_back(AbMap{&P.level(s), &C.level(s), Mat{{Int(1)}}});
  ProMap f2 = scalar_endo(P, 4);
  ProMap g2 = make_pro_map(P, C, std::move(redl));
  WitnessReport rmid = pro_exact(f2, g2, 0, "middle");
  CHECK(rmid.pass);
  for (const auto& w : rmid.witnesses) CHECK(w.t == (w.s == 1 ? 1 : w.s + 1));
}

TEST_CASE("pro_exact failure modes") {
  int S = 6;
  ProGroup T = constant_tower(cyc(2), S);

  // Identity composed with identity is nonzero: reported, not thrown.
  ProMap idm = scalar_endo(T, 1);
  WitnessReport rcomp = pro_exact(idm, idm, 0, "composition");
  CHECK_FALSE(rcomp.pass);
  CHECK(rcomp.detail == "CompositionNonzero at s=1");

  // Zero maps through a nonzero constant tower: homology is the whole tower,
  // never killed; the report names a defect element.
  ProMap zm = scalar_endo(T, 0);
  WitnessReport rbroken = pro_exact(zm, zm, 0, "broken middle");
  CHECK_FALSE(rbroken.pass);
  CHECK(rbroken.detail.find("NOT_FOUND") != std::string::npos);
  CHECK(rbroken.detail.find("defect at s=1: [1]") != std::string::npos);
}

TEST_CASE("exactness at the outer positions of the gap fixture") {
  int S = 8;
  ProGroup P = shrink_tower(2, S);
  ProGroup Z = zero_tower(S);
  std::vector<AbMap> zl;
  for (int s = 1; s <= S; ++s) zl.push_back(zero_map(Z.level(s), P.level(s)));
  ProMap zin = make_pro_map(Z, P, std::move(zl));
  ProMap f = scalar_endo(P, 4);
  WitnessReport rleft = pro_exact(zin, f, 0, "left");
  CHECK(rleft.pass);
  for (const auto& w : rleft.witnesses) CHECK(w.t == w.s + 1);

  std::vector<std::shared_ptr<FinAb>> clevels(static_cast<std::size_t>(S), cyc(2));
  std::vector<AbMap> csteps(static_cast<std::size_t>(S - 1),
                            zero_map(*clevels[0], *clevels[0]));
  ProGroup C = make_pro(clevels, csteps);
  std::vector<AbMap> redl, outl;
  for (int s = 1; s <= S; ++s) {
    redl.push_back(AbMap{&P.level(s), &C.level(s), Mat{{Int(1)}}});
    outl.push_back(zero_map(C.level(s), Z.level(s)));
  }
  ProMap g = make_pro_map(P, C, std::move(redl));
  ProMap zout = make_pro_map(C, Z, std::move(outl));
  WitnessReport rright = pro_exact(g, zout, 0, "right");
  CHECK(rright.pass);
  for (const auto& w : rright.witnesses) CHECK(w.t == w.s);
}

TEST_CASE("reports serialize deterministically") {
  ProGroup P = shrink_tower(3, 8);
  WitnessReport a = pro_zero(P, 0, "replay");
  a.grid = "p=3";
  WitnessReport b = pro_zero(P, 0, "replay");
  b.grid = "p=3";
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_csv() == b.to_csv());

  auto j = nlohmann::json::parse(a.to_json());
  CHECK(j["claim"] == "replay");
  CHECK(j["grid"] == "p=3");
  CHECK(j["kind"] == "pro_zero");
  CHECK(j["bound"] == 8);
  CHECK(j["verdict"] == "PASS");
  CHECK(j["witnesses"].size() == 4);
  CHECK(j["witnesses"][0]["s"] == 1);
  CHECK(j["witnesses"][0]["t"] == 2);

  WitnessReport bad = pro_zero(constant_tower(cyc(2), 4), 0, "fail case");
  auto jb = nlohmann::json::parse(bad.to_json());
  CHECK(jb["verdict"] == "FAIL");
  CHECK(jb["witnesses"][0]["t"].is_null());
  CHECK(bad.to_csv().find("NOT_FOUND") != std::string::npos);
}
