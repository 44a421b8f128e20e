#include "hwlab/abgroup.hpp"

#include <sstream>
#include <stdexcept>

namespace hwlab {

FinAb::FinAb(int gens, Mat rels) : g_(gens) {
  hnf_ = hermite(std::move(rels), g_);
  init();
}

void FinAb::init() {
  sm_ = smith(hnf_, g_);
  int k = static_cast<int>(hnf_.size());
  dpad_.assign(g_, 0);
  for (int i = 0; i < static_cast<int>(sm_.diag.size()); ++i) dpad_[i] = sm_.diag[i];
  free_rank_ = 0;
  inv_.clear();
  for (int i = 0; i < g_; ++i) {
    if (dpad_[i] == 0) {
      ++free_rank_;
      inv_.push_back(0);
    } else if (dpad_[i] != 1) {
      inv_.push_back(dpad_[i]);
    }
  }
  (void)k;
}

Int FinAb::order() const {
  if (!finite()) throw std::domain_error("order of infinite group");
  Int o = 1;
  for (int i = 0; i < g_; ++i) o *= dpad_[i];
  return o;
}

Row FinAb::normal_form(Row x) const {
  Row y = row_mat_mul(x, sm_.V, g_);
  for (int i = 0; i < g_; ++i)
    if (dpad_[i] != 0) y[i] = modnorm(y[i], dpad_[i]);
  return row_mat_mul(y, sm_.Vi, g_);
}

bool FinAb::is_zero_elem(const Row& x) const {
  Row y = row_mat_mul(x, sm_.V, g_);
  for (int i = 0; i < g_; ++i) {
    if (dpad_[i] == 0) {
      if (y[i] != 0) return false;
    } else if (y[i] % dpad_[i] != 0) {
      return false;
    }
  }
  return true;
}

bool FinAb::same_elem(const Row& x, const Row& y) const {
  Row d(g_);
  for (int i = 0; i < g_; ++i) d[i] = x[i] - y[i];
  return is_zero_elem(d);
}

std::vector<Row> FinAb::enumerate(const Int& guard) const {
  if (!finite()) throw std::domain_error("enumerate of infinite group");
  if (order() > guard) throw std::domain_error("TooLargeToVerify: group enumeration over guard");
  std::vector<Row> out;
  Row y(g_, 0);
  while (true) {
    out.push_back(normal_form(row_mat_mul(y, sm_.Vi, g_)));
    int i = 0;
    while (i < g_ && y[i] == dpad_[i] - 1) y[i++] = 0;
    if (i == g_) break;
    ++y[i];
  }
  return out;
}

Row FinAb::random_elem(Rng& rng) const {
  Row y(g_, 0);
  for (int i = 0; i < g_; ++i)
    if (dpad_[i] > 1)
      y[i] = Int(rng.below(static_cast<std::int64_t>(dpad_[i] > 1000000 ? 1000000 : dpad_[i])));
  return normal_form(row_mat_mul(y, sm_.Vi, g_));
}

std::string FinAb::invariant_string() const {
  if (inv_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : inv_) {
    if (!first) os << " + ";
    first = false;
    if (d == 0)
      os << "Z";
    else
      os << "Z/" << d;
  }
  return os.str();
}

AbMap identity_map(const FinAb& G) { return {&G, &G, mat_identity(G.ngens())}; }

AbMap zero_map(const FinAb& src, const FinAb& tgt) {
  return {&src, &tgt, Mat(src.ngens(), Row(tgt.ngens(), 0))};
}

AbMap compose(const AbMap& f, const AbMap& g) {
  if (f.tgt != g.src) throw std::invalid_argument("LevelMismatch: compose endpoints");
  return {f.src, g.tgt, mat_mul(f.M, g.M)};
}

AbMap map_sum(const AbMap& f, const AbMap& g) {
  AbMap r = f;
  for (size_t i = 0; i < r.M.size(); ++i)
    for (size_t j = 0; j < r.M[i].size(); ++j) r.M[i][j] += g.M[i][j];
  return r;
}

AbMap map_scale(const AbMap& f, const Int& c) {
  AbMap r = f;
  for (auto& row : r.M)
    for (auto& x : row) x *= c;
  return r;
}

AbMap multiplication_map(const FinAb& G, const Int& c) {
  AbMap r = identity_map(G);
  for (auto& row : r.M)
    for (auto& x : row) x *= c;
  return r;
}

bool well_defined(const AbMap& f) {
  EchelonSolver es(f.tgt->ngens());
  int id = 0;
  for (const auto& r : f.tgt->lattice()) es.add_row(r, id++);
  for (const auto& r : f.src->lattice())
    if (!es.member(f.apply(r))) return false;
  return true;
}

bool maps_equal(const AbMap& f, const AbMap& g) {
  if (f.src != g.src || f.tgt != g.tgt) return false;
  for (int i = 0; i < f.src->ngens(); ++i) {
    Row d(f.tgt->ngens());
    for (int j = 0; j < f.tgt->ngens(); ++j) d[j] = f.M[i][j] - g.M[i][j];
    if (!f.tgt->is_zero_elem(d)) return false;
  }
  return true;
}

Subgroup span_subgroup(const FinAb& G, const Mat& rows) {
  return {&G, hermite(mat_stack(rows, G.lattice()), G.ngens())};
}

Subgroup full_subgroup(const FinAb& G) { return span_subgroup(G, mat_identity(G.ngens())); }

Subgroup zero_subgroup(const FinAb& G) { return span_subgroup(G, {}); }

bool sub_contains(const Subgroup& S, const Row& x) {
  EchelonSolver es(S.amb->ngens());
  int id = 0;
  for (const auto& r : S.lat) es.add_row(r, id++);
  return es.member(x);
}

bool sub_leq(const Subgroup& S, const Subgroup& T) {
  EchelonSolver es(T.amb->ngens());
  int id = 0;
  for (const auto& r : T.lat) es.add_row(r, id++);
  for (const auto& r : S.lat)
    if (!es.member(r)) return false;
  return true;
}

bool sub_eq(const Subgroup& S, const Subgroup& T) { return S.lat == T.lat; }

Subgroup sub_sum(const Subgroup& S, const Subgroup& T) {
  return {S.amb, hermite(mat_stack(S.lat, T.lat), S.amb->ngens())};
}

Subgroup preimage(const AbMap& f, const Subgroup& T) {
  Mat pre = kernel_lattice(f.M, T.lat, f.tgt->ngens());
  return span_subgroup(*f.src, pre);
}

Subgroup image_subgroup(const AbMap& f) { return span_subgroup(*f.tgt, f.M); }

Subgroup kernel_subgroup(const AbMap& f) { return preimage(f, zero_subgroup(*f.tgt)); }

Subgroup sub_scale(const FinAb& G, const Subgroup& S, const Int& c) {
  Mat rows;
  for (const auto& r : S.lat) {
    Row rr = r;
    for (auto& x : rr) x *= c;
    rows.push_back(std::move(rr));
  }
  return span_subgroup(G, rows);
}

Subgroup sub_intersect(const Subgroup& S, const Subgroup& T) {
  if (S.amb != T.amb) throw std::invalid_argument("sub_intersect: ambient mismatch");
  int cols = S.amb->ngens();
  Mat ker = kernel_lattice(S.lat, T.lat, cols);  // x with x * S.lat in T.lat
  Mat rows;
  for (const auto& x : ker) rows.push_back(row_mat_mul(x, S.lat, cols));
  return span_subgroup(*S.amb, rows);
}

Subquotient present_subquotient(const FinAb& G, const Subgroup& S, const Subgroup& T) {
  Mat big = hermite(mat_stack(S.lat, T.lat), G.ngens());
  Mat kill = hermite(mat_stack(T.lat, G.lattice()), G.ngens());
  Mat rels = kernel_lattice(big, kill, G.ngens());
  Subquotient q;
  q.grp = std::make_shared<FinAb>(static_cast<int>(big.size()), rels);
  q.lifts = big;
  q.amb = &G;
  q.kill = kill;
  return q;
}

Subquotient present_subgroup(const FinAb& G, const Subgroup& S) {
  return present_subquotient(G, S, zero_subgroup(G));
}

Subquotient present_quotient(const FinAb& G, const Subgroup& T) {
  return present_subquotient(G, full_subgroup(G), T);
}

std::optional<Row> subq_coords(const Subquotient& Q, const Row& x) {
  int n = static_cast<int>(Q.lifts.size());
  EchelonSolver es(Q.amb->ngens());
  // Kill rows first (free to use, discarded), then generator lifts with tracked ids.
  for (size_t i = 0; i < Q.kill.size(); ++i) es.add_row(Q.kill[i], n + static_cast<int>(i));
  for (int i = 0; i < n; ++i) es.add_row(Q.lifts[i], i);
  auto sol = es.solve(x);
  if (!sol) return std::nullopt;
  Row out(n, 0);
  for (auto& [id, c] : *sol)
    if (id < n) out[id] = c;
  return Q.grp->normal_form(out);
}

AbMap quotient_projection(const Subquotient& Q) {
  AbMap f{Q.amb, Q.grp.get(), {}};
  int n = Q.amb->ngens();
  for (int k = 0; k < n; ++k) {
    Row e(n, 0);
    e[k] = 1;
    auto c = subq_coords(Q, e);
    if (!c) throw std::invalid_argument("quotient_projection: not a full-ambient subquotient");
    f.M.push_back(*c);
  }
  return f;
}

std::optional<AbMap> induced_map(const Subquotient& Q, const Subquotient& Qp, const AbMap& f) {
  if (Q.amb != f.src || Qp.amb != f.tgt) throw std::invalid_argument("LevelMismatch: induced_map");
  AbMap r{Q.grp.get(), Qp.grp.get(), {}};
  for (const auto& lift : Q.lifts) {
    auto c = subq_coords(Qp, f.apply(lift));
    if (!c) return std::nullopt;
    r.M.push_back(*c);
  }
  if (!well_defined(r)) return std::nullopt;
  return r;
}

KernelData kernel_data(const AbMap& f) {
  Subgroup k = kernel_subgroup(f);
  return {present_subgroup(*f.src, k)};
}

CokernelData cokernel_data(const AbMap& f) {
  CokernelData c;
  c.grp = std::make_shared<FinAb>(f.tgt->ngens(), mat_stack(f.tgt->lattice(), f.M));
  c.proj = {f.tgt, c.grp.get(), mat_identity(f.tgt->ngens())};
  return c;
}

Subquotient homology(const AbMap& f, const AbMap& g) {
  if (f.tgt != g.src) throw std::invalid_argument("LevelMismatch: homology endpoints");
  Subgroup Z = kernel_subgroup(g);
  Subgroup B = image_subgroup(f);
  return present_subquotient(*f.tgt, Z, B);
}

ExactnessReport check_exact(const AbMap& f, const AbMap& g) {
  ExactnessReport rep;
  AbMap gf = compose(f, g);
  rep.composition_zero = true;
  for (const auto& row : gf.M)
    if (!g.tgt->is_zero_elem(row)) {
      rep.composition_zero = false;
      break;
    }
  Subquotient H = homology(f, g);
  if (H.grp->finite()) {
    rep.defect_order = H.grp->order();
    rep.exact = rep.composition_zero && rep.defect_order == 1;
  } else {
    rep.defect_order = 0;
    rep.exact = false;
  }
  if (!rep.exact) rep.note = "homology " + H.grp->invariant_string();
  return rep;
}

IsoReport check_iso(const AbMap& f) {
  IsoReport r;
  r.well_defined = well_defined(f);
  if (!r.well_defined) return r;
  Subgroup k = kernel_subgroup(f);
  r.injective = sub_leq(k, zero_subgroup(*f.src));
  Subgroup im = image_subgroup(f);
  r.surjective = sub_eq(im, full_subgroup(*f.tgt));
  r.iso = r.injective && r.surjective;
  return r;
}

}  // namespace hwlab
