#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hwlab/abgroup.hpp"
#include "hwlab/snf.hpp"

using namespace hwlab;

namespace {
Mat mk(std::vector<std::vector<long long>> rows) {
  Mat m;
  for (auto& r : rows) {
    Row rr;
    for (auto x : r) rr.push_back(Int(x));
    m.push_back(rr);
  }
  return m;
}
}  // namespace

TEST_CASE("smith: frozen oracles") {
  // Hand-computed: det = -8, gcd of entries 2, so invariant factors (2, 4).
  auto s = smith(mk({{2, 4}, {6, 8}}), 2);
  REQUIRE(s.diag.size() == 2);
  CHECK(s.diag[0] == 2);
  CHECK(s.diag[1] == 4);

  auto id = smith(mat_identity(3), 3);
  CHECK(id.diag == std::vector<Int>{1, 1, 1});

  auto z = smith(Mat(2, Row(2, 0)), 2);
  CHECK(z.diag == std::vector<Int>{0, 0});
}

TEST_CASE("smith: transforms are exact and unimodular") {
  Rng rng(12345);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = 1 + static_cast<int>(rng.below(5));
    int cols = 1 + static_cast<int>(rng.below(5));
    Mat m(rows, Row(cols, 0));
    for (auto& r : m)
      for (auto& x : r) x = Int(rng.range(-9, 9));
    auto s = smith(m, cols);
    // U*M*V == diag matrix
    Mat umv = mat_mul(mat_mul(s.U, m), s.V);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        Int expect = (i == j && i < static_cast<int>(s.diag.size())) ? s.diag[i] : Int(0);
        CHECK(umv[i][j] == expect);
      }
    // divisibility chain
    for (size_t i = 0; i + 1 < s.diag.size(); ++i)
      if (s.diag[i] != 0 && s.diag[i + 1] != 0) CHECK(s.diag[i + 1] % s.diag[i] == 0);
    // V*Vi == I
    CHECK(mat_mul(s.V, s.Vi) == mat_identity(cols));
    // U unimodular: hermite(U) == I
    CHECK(hermite(s.U, rows) == mat_identity(rows));
  }
}

TEST_CASE("hermite: canonical form and lattice invariance") {
  CHECK(hermite(mk({{2, 4}, {6, 8}}), 2) == mk({{2, 0}, {0, 4}}));
  CHECK(hermite(mk({{0, 0}}), 2) == Mat{});
  CHECK(hermite(mat_identity(4), 4) == mat_identity(4));

  Rng rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 1 + static_cast<int>(rng.below(5));
    int cols = 1 + static_cast<int>(rng.below(4));
    Mat m(rows, Row(cols, 0));
    for (auto& r : m)
      for (auto& x : r) x = Int(rng.range(-9, 9));
    Mat h = hermite(m, cols);
    // Same lattice both directions.
    EchelonSolver a(cols), b(cols);
    int id = 0;
    for (auto& r : h) a.add_row(r, id++);
    for (auto& r : m) b.add_row(r, id++);
    for (auto& r : m) CHECK(a.member(r));
    for (auto& r : h) CHECK(b.member(r));
    // Canonical under row shuffles.
    Mat mm = m;
    std::reverse(mm.begin(), mm.end());
    if (rows >= 2) {
      Row combo = mm[0];
      for (int j = 0; j < cols; ++j) combo[j] += 3 * mm[1][j];
      mm.push_back(combo);
    }
    CHECK(hermite(mm, cols) == h);
  }
}

TEST_CASE("echelon solver: explicit solutions") {
  EchelonSolver es(2);
  es.add_row(mk({{2, 0}})[0], 0);
  es.add_row(mk({{0, 2}})[0], 1);
  CHECK(!es.member(mk({{1, 1}})[0]));
  auto sol = es.solve(mk({{4, 6}})[0]);
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == 2);
  CHECK((*sol)[1] == 3);
}

TEST_CASE("left kernel and kernel lattice") {
  Mat lk = left_kernel(mk({{1}, {1}}), 1);
  CHECK(lk == mk({{1, -1}}));
  // {x : 2x in 4Z} = 2Z
  CHECK(kernel_lattice(mk({{2}}), mk({{4}}), 1) == mk({{2}}));
  // Random check: each produced row really kills the matrix.
  Rng rng(314);
  for (int trial = 0; trial < 30; ++trial) {
    int rows = 1 + static_cast<int>(rng.below(5));
    int cols = 1 + static_cast<int>(rng.below(4));
    Mat m(rows, Row(cols, 0));
    for (auto& r : m)
      for (auto& x : r) x = Int(rng.range(-6, 6));
    for (auto& k : left_kernel(m, cols)) {
      Row prod = row_mat_mul(k, m, cols);
      for (auto& x : prod) CHECK(x == 0);
    }
  }
}

TEST_CASE("finab: invariants and normal forms") {
  FinAb g(2, mk({{2, 0}, {0, 3}}));
  CHECK(g.finite());
  CHECK(g.order() == 6);
  CHECK(g.invariant_string() == "Z/6");

  FinAb z(1, {});
  CHECK(!z.finite());
  CHECK(z.free_rank() == 1);

  FinAb g3(3, mk({{2, 0, 0}, {0, 4, 0}, {0, 0, 8}}));
  CHECK(g3.order() == 64);
  CHECK(g3.invariants() == std::vector<Int>{2, 4, 8});

  // normal form respects relations
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    Row x(3);
    for (auto& v : x) v = Int(rng.range(-20, 20));
    Row shifted = x;
    shifted[0] += 2 * Int(rng.range(-3, 3));
    shifted[1] += 4 * Int(rng.range(-3, 3));
    shifted[2] += 8 * Int(rng.range(-3, 3));
    CHECK(g3.same_elem(x, shifted));
    CHECK(g3.normal_form(x) == g3.normal_form(shifted));
  }
  CHECK(g3.enumerate().size() == 64);
}

TEST_CASE("maps: kernel, image, cokernel orders multiply correctly") {
  FinAb z4(1, mk({{4}}));
  AbMap two = multiplication_map(z4, 2);
  CHECK(well_defined(two));
  auto k = kernel_data(two);
  CHECK(k.pres.grp->order() == 2);
  auto c = cokernel_data(two);
  CHECK(c.grp->order() == 2);
  auto rep = check_exact(two, two);
  CHECK(rep.composition_zero);
  CHECK(rep.exact);

  // Z/2 + Z/4, multiplication by 2: kernel and cokernel are Z/2 + Z/2.
  FinAb g(2, mk({{2, 0}, {0, 4}}));
  AbMap t2 = multiplication_map(g, 2);
  CHECK(kernel_data(t2).pres.grp->order() == 4);
  CHECK(cokernel_data(t2).grp->order() == 4);
  CHECK(kernel_data(t2).pres.grp->invariant_string() == "Z/2 + Z/2");

  // random well-defined maps: |ker| * |im| == |src|, |im| * |coker| == |tgt|
  Rng rng(2718);
  for (int trial = 0; trial < 25; ++trial) {
    int gs = 1 + static_cast<int>(rng.below(3));
    int gt = 1 + static_cast<int>(rng.below(3));
    Mat rs, rt;
    std::vector<Int> ds, dt;
    for (int i = 0; i < gs; ++i) {
      Row r(gs, 0);
      r[i] = ipow(Int(2), 1 + static_cast<unsigned>(rng.below(3)));
      ds.push_back(r[i]);
      rs.push_back(r);
    }
    for (int i = 0; i < gt; ++i) {
      Row r(gt, 0);
      r[i] = ipow(Int(2), 1 + static_cast<unsigned>(rng.below(3)));
      dt.push_back(r[i]);
      rt.push_back(r);
    }
    FinAb src(gs, rs), tgt(gt, rt);
    Mat M(gs, Row(gt, 0));
    for (int i = 0; i < gs; ++i)
      for (int j = 0; j < gt; ++j) {
        Int need = dt[j] / boost::multiprecision::gcd(ds[i], dt[j]);
        M[i][j] = need * Int(rng.range(0, 3));
      }
    AbMap f{&src, &tgt, M};
    REQUIRE(well_defined(f));
    Int ko = kernel_data(f).pres.grp->order();
    Subquotient im = present_subquotient(tgt, image_subgroup(f), zero_subgroup(tgt));
    Int io = im.grp->order();
    Int co = cokernel_data(f).grp->order();
    CHECK(ko * io == src.order());
    CHECK(io * co == tgt.order());
  }
}

TEST_CASE("subquotients: coordinates and induced maps") {
  // G = Z/8, S = 2G, T = 4G; S/T = Z/2 generated by 2.
  FinAb g(1, mk({{8}}));
  Subgroup S = span_subgroup(g, mk({{2}}));
  Subgroup T = span_subgroup(g, mk({{4}}));
  auto q = present_subquotient(g, S, T);
  CHECK(q.grp->order() == 2);
  auto c = subq_coords(q, mk({{6}})[0]);
  REQUIRE(c.has_value());
  CHECK(!q.grp->is_zero_elem(*c));
  auto c4 = subq_coords(q, mk({{4}})[0]);
  REQUIRE(c4.has_value());
  CHECK(q.grp->is_zero_elem(*c4));
  CHECK(!subq_coords(q, mk({{1}})[0]).has_value());

  // Induced multiplication-by-3 is identity on S/T; by 2 is zero.
  auto m3 = induced_map(q, q, multiplication_map(g, 3));
  REQUIRE(m3.has_value());
  CHECK(maps_equal(*m3, identity_map(*q.grp)));
  auto m2 = induced_map(q, q, multiplication_map(g, 2));
  REQUIRE(m2.has_value());
  CHECK(maps_equal(*m2, zero_map(*q.grp, *q.grp)));
}

TEST_CASE("exactness with defects") {
  // Z/4 --2--> Z/4 --4--> Z/4 has homology Z/... ker(4)=all, im(2)={0,2}: defect 2.
  FinAb z4(1, mk({{4}}));
  auto rep = check_exact(multiplication_map(z4, 2), multiplication_map(z4, 4));
  CHECK(rep.composition_zero);
  CHECK(!rep.exact);
  CHECK(rep.defect_order == 2);
}

TEST_CASE("iso check") {
  FinAb z6(1, mk({{6}}));
  FinAb z23(2, mk({{2, 0}, {0, 3}}));  // Z/2 + Z/3 = Z/6
  AbMap good{&z6, &z23, mk({{1, 1}})};
  auto rep = check_iso(good);
  CHECK(rep.well_defined);
  CHECK(rep.injective);
  CHECK(rep.surjective);
  CHECK(rep.iso);
  AbMap bad{&z6, &z23, mk({{1, 0}})};  // kills the Z/3 part
  auto repb = check_iso(bad);
  CHECK(repb.well_defined);
  CHECK(!repb.iso);
}
