#include "hwlab/drwgroup.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hwlab/numeric.hpp"
#include "hwlab/snf.hpp"

namespace hwlab {

namespace {

// Buffered relation accumulator: keeps a running Hermite base, pre-reduces
// incoming rows against its staircase and re-normalizes in batches.
struct RowAccum {
  int cols;
  Mat base;
  std::vector<int> piv;
  Mat buf;

  explicit RowAccum(int c) : cols(c) {}

  void refresh_pivots() {
    piv.clear();
    for (const auto& row : base) {
      int c = 0;
      while (c < cols && row[static_cast<std::size_t>(c)] == 0) ++c;
      piv.push_back(c);
    }
  }

  void flush() {
    if (buf.empty()) return;
    for (auto& row : base) buf.push_back(std::move(row));
    base = hermite(buf, cols);
    buf.clear();
    refresh_pivots();
  }

  void add(Row row) {
    for (std::size_t k = 0; k < base.size(); ++k) {
      int c = piv[k];
      if (c >= cols || row[static_cast<std::size_t>(c)] == 0) continue;
      Int q = row[static_cast<std::size_t>(c)] / base[k][static_cast<std::size_t>(c)];
      if (q == 0) continue;
      for (int j = c; j < cols; ++j)
        row[static_cast<std::size_t>(j)] -= q * base[k][static_cast<std::size_t>(j)];
    }
    for (const auto& x : row)
      if (x != 0) {
        buf.push_back(std::move(row));
        if (buf.size() >= 512) flush();
        return;
      }
  }

  Mat result() {
    flush();
    return base;
  }
};

Row project_into(const DrwEngine& E, const MonomialIdeal& J,
                 const std::map<TermKey, int>& index, int ngens, const DrwElem& a, int n) {
  Row x(static_cast<std::size_t>(ngens), Int(0));
  for (const auto& [t, c] : a) {
    if (DrwEngine::term_degree(t) != n)
      throw std::invalid_argument("projection: degree mismatch");
    auto it = index.find(t);
    if (it != index.end()) {
      x[static_cast<std::size_t>(it->second)] += c;
      continue;
    }
    if (!J.contains(pooled_exponent(t, E.p())))
      throw std::domain_error("OracleMismatch: live canonical term fell outside the window");
  }
  return x;
}

}  // namespace

Expo pooled_exponent(const TermKey& t, int p) {
  Expo out(t.size(), 0);
  std::int64_t mult = 1;
  bool seen_dv = false;
  for (std::size_t v = 0; v < t.size(); ++v) {
    const LayerOp& op = t[v];
    std::int64_t base = op.j - (op.kind == LayerOp::Edge ? 1 : 0);
    std::int64_t e = base * mult;
    // A power pushed through an inner dV can lose one exponent to the Leibniz
    // branch where the d lands on it; an Edge carries its own d and is immune.
    if (seen_dv && op.kind != LayerOp::Edge && e > 0) e -= 1;
    out[v] = static_cast<int>(e);
    if (op.kind == LayerOp::V || op.kind == LayerOp::DV)
      mult *= ipow64(p, static_cast<unsigned>(op.i));
    if (op.kind == LayerOp::DV) seen_dv = true;
  }
  return out;
}

DrwLab::DrwLab(const MonomialAlgebra& A, std::shared_ptr<WittUniv> univ)
    : Aself_(A), A_(&Aself_), univ_(std::move(univ)), E_(A.p(), A.nvars()), J_(A.ideal()) {
  if (A.nvars() > 2)
    throw std::invalid_argument("drw groups: supported for at most two variables");
  for (int v = 0; v < A.nvars(); ++v) svec_.push_back(A.pure_power(v));
  spec_.bound.assign(svec_.begin(), svec_.end());
  for (auto& b : spec_.bound) b += 1;
}

// Every term surviving the pooled-exponent filter must sit inside the weight
// box; if one shows up in the outer shell the window is too small and gets
// doubled (self-certifying bound).
void DrwLab::check_shell(int r, int n) {
  for (;;) {
    bool ok = true;
    for (const auto& t : enumerate_belt(r, n, spec_.bound)) {
      if (J_.contains(pooled_exponent(t, E_.p()))) continue;
      WeightVector w = E_.weight(t);
      for (int v = 0; v < E_.nvars() && ok; ++v) {
        auto sv = static_cast<std::size_t>(v);
        if (w[sv].num > svec_[sv] * ipow64(E_.p(), static_cast<unsigned>(w[sv].den)))
          ok = false;
      }
      if (!ok) break;
    }
    if (ok) {
      spec_.closure_verified = true;
      return;
    }
    if (spec_.doublings >= 3)
      throw std::domain_error("OracleMismatch: window closure failed after three doublings");
    for (auto& b : spec_.bound) b *= 2;
    ++spec_.doublings;
  }
}

std::vector<TermKey> DrwLab::enumerate_belt(int r, int n,
                                            const std::vector<std::int64_t>& bound) const {
  std::vector<TermKey> out;
  if (r < 1 || n < 0 || n > E_.nvars()) return out;
  int m = E_.nvars();
  int p = E_.p();
  TermKey cur(static_cast<std::size_t>(m));
  // Outermost variable first; D = accumulated V/DV drops of the outer layers,
  // level = remaining level inside them.
  std::function<void(int, int, int, int)> rec = [&](int v, int D, int level, int deg) {
    if (deg > n) return;
    if (v < 0) {
      if (deg == n) out.push_back(cur);
      return;
    }
    auto sv = static_cast<std::size_t>(v);
    std::int64_t cap = bound[sv] * ipow64(p, static_cast<unsigned>(D));
    for (std::int64_t j = 0; j <= cap; ++j) {
      cur[sv] = LayerOp{LayerOp::Int, 0, j};
      rec(v - 1, D, level, deg);
    }
    for (std::int64_t j = 1; j <= cap; ++j) {
      cur[sv] = LayerOp{LayerOp::Edge, 0, j};
      rec(v - 1, D, level, deg + 1);
    }
    for (int i = 1; i <= level - 1; ++i) {
      std::int64_t capv = bound[sv] * ipow64(p, static_cast<unsigned>(D + i));
      for (std::int64_t j = 1; j <= capv; ++j) {
        if (j % p == 0) continue;
        cur[sv] = LayerOp{LayerOp::V, i, j};
        rec(v - 1, D + i, level - i, deg);
        cur[sv] = LayerOp{LayerOp::DV, i, j};
        rec(v - 1, D + i, level - i, deg + 1);
      }
    }
  };
  rec(m - 1, 0, r, 0);
  std::sort(out.begin(), out.end());
  return out;
}

FinDrwGroup DrwLab::build(int r, int n) {
  FinDrwGroup G;
  G.r = r;
  G.n = n;
  if (r < 1 || n < 0 || n > E_.nvars()) {
    G.grp = std::make_shared<FinAb>(0, Mat{});
    return G;
  }
  check_shell(r, n);
  for (const auto& t : enumerate_belt(r, n, spec_.bound)) {
    if (J_.contains(pooled_exponent(t, E_.p()))) continue;
    G.index.emplace(t, static_cast<int>(G.dict.size()));
    G.dict.push_back(t);
  }
  Mat rels = relation_rows(r, n, 0, G.dict, G.index);
  G.grp = std::make_shared<FinAb>(static_cast<int>(G.dict.size()), rels);
  return G;
}

// Relations of the presented group: leaf-level torsion plus the projections of
// V^i([x^mu]) * omega and d V^i([x^mu]) * omega' for ideal monomials mu and
// belt terms omega. Two reductions keep the family small: mu with all
// exponents divisible by p and mu/p still in the ideal folds to p times the
// (i-1, mu/p) generator, and mu with a p^i-th power of a variable to spare is
// absorbed into the term side.
Mat DrwLab::relation_rows(int r, int n, int slack, const std::vector<TermKey>& dict,
                          const std::map<TermKey, int>& index) {
  int p = E_.p();
  int m = E_.nvars();
  int g = static_cast<int>(dict.size());
  RowAccum acc(g);

  for (int k = 0; k < g; ++k) {
    Row row(static_cast<std::size_t>(g), Int(0));
    row[static_cast<std::size_t>(k)] =
        ipow(Int(p), static_cast<unsigned>(E_.leaf_level(dict[static_cast<std::size_t>(k)], r)));
    acc.add(std::move(row));
  }

  std::vector<std::int64_t> B(svec_);
  for (auto& b : B) b += slack;

  auto beltN = enumerate_belt(r, n, B);
  auto beltN1 = enumerate_belt(r, n - 1, B);
  auto weights_of = [&](const std::vector<TermKey>& ts) {
    std::vector<WeightVector> w;
    w.reserve(ts.size());
    for (const auto& t : ts) w.push_back(E_.weight(t));
    return w;
  };
  auto wN = weights_of(beltN);
  auto wN1 = weights_of(beltN1);

  // w(gen) + w(omega) <= B componentwise; heavier products die entirely.
  auto fits = [&](const WeightVector& wg, const WeightVector& wo) {
    for (int v = 0; v < m; ++v) {
      auto sv = static_cast<std::size_t>(v);
      std::int64_t lhs = wg[sv].num * ipow64(p, static_cast<unsigned>(wo[sv].den)) +
                         wo[sv].num * ipow64(p, static_cast<unsigned>(wg[sv].den));
      if (lhs > B[sv] * ipow64(p, static_cast<unsigned>(wg[sv].den + wo[sv].den))) return false;
    }
    return true;
  };

  for (int i = 0; i < r; ++i) {
    std::int64_t pi = ipow64(p, static_cast<unsigned>(i));
    std::vector<std::int64_t> cap(static_cast<std::size_t>(m));
    for (int v = 0; v < m; ++v) cap[static_cast<std::size_t>(v)] = B[static_cast<std::size_t>(v)] * pi;

    Expo mu(static_cast<std::size_t>(m), 0);
    for (;;) {
      bool usable = J_.contains(mu);
      if (usable && i >= 1) {
        bool allp = true;
        Expo mup(mu);
        for (int v = 0; v < m && allp; ++v) {
          auto sv = static_cast<std::size_t>(v);
          if (mu[sv] % p) allp = false;
          else mup[sv] = mu[sv] / p;
        }
        if (allp && J_.contains(mup)) usable = false;
      }
      if (usable) {
        for (int v = 0; v < m && usable; ++v) {
          auto sv = static_cast<std::size_t>(v);
          if (mu[sv] >= pi) {
            Expo red(mu);
            red[sv] -= static_cast<int>(pi);
            if (J_.contains(red)) usable = false;
          }
        }
      }
      if (usable) {
        DrwElem gmu = E_.iter_V(E_.int_mono(1, mu, r - i), r - i, i);
        if (!gmu.empty()) {
          auto wg = E_.homogeneous_weight(gmu);
          DrwElem dgmu = E_.d(gmu, r);
          for (std::size_t k = 0; k < beltN.size(); ++k) {
            if (!fits(*wg, wN[k])) continue;
            DrwElem prod = E_.mul(gmu, DrwElem{{beltN[k], 1}}, r);
            if (prod.empty()) continue;
            acc.add(project_into(E_, J_, index, g, prod, n));
          }
          if (!dgmu.empty())
            for (std::size_t k = 0; k < beltN1.size(); ++k) {
              if (!fits(*wg, wN1[k])) continue;
              DrwElem prod = E_.mul(dgmu, DrwElem{{beltN1[k], 1}}, r);
              if (prod.empty()) continue;
              acc.add(project_into(E_, J_, index, g, prod, n));
            }
        }
      }
      int v = 0;
      while (v < m && mu[static_cast<std::size_t>(v)] ==
                          static_cast<int>(cap[static_cast<std::size_t>(v)])) {
        mu[static_cast<std::size_t>(v)] = 0;
        ++v;
      }
      if (v == m) break;
      ++mu[static_cast<std::size_t>(v)];
    }
    if (m == 0) break;
  }
  return acc.result();
}

const FinDrwGroup& DrwLab::at(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = groups_.find(key);
  if (it != groups_.end()) return it->second;
  FinDrwGroup built = build(r, n);
  const FinDrwGroup& slot = groups_.emplace(key, std::move(built)).first->second;
  if (r >= 1 && n >= 0 && n <= E_.nvars()) {
    if (n == 0) check_witt_anchor(r);
    if (r == 1) check_kaehler_anchor(n);
  }
  return slot;
}

Row DrwLab::project(const DrwElem& a, int r, int n) {
  const auto& G = at(r, n);
  return project_into(E_, J_, G.index, G.grp->ngens(), a, n);
}

DrwElem DrwLab::lift(const Row& x, int r, int n) {
  const auto& G = at(r, n);
  Row nf = G.grp->normal_form(x);
  DrwElem out;
  for (std::size_t k = 0; k < nf.size(); ++k)
    if (nf[k] != 0) out.emplace(G.dict[k], nf[k].convert_to<std::int64_t>());
  return E_.normalize(out, r);
}

AbMap DrwLab::term_map(int r, int n, int r2, int n2,
                       const std::function<DrwElem(const DrwElem&)>& op) {
  const auto& S = at(r, n);
  const auto& T = at(r2, n2);
  Mat M;
  M.reserve(S.dict.size());
  for (const auto& t : S.dict)
    M.push_back(project_into(E_, J_, T.index, T.grp->ngens(), op(DrwElem{{t, 1}}), n2));
  AbMap f{S.grp.get(), T.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: structure map not well-defined on relations");
  return f;
}

const AbMap& DrwLab::mapR(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = mR_.find(key);
  if (it != mR_.end()) return it->second;
  AbMap f = (r <= 1) ? zero_map(group(r, n), group(r - 1, n))
                     : term_map(r, n, r - 1, n, [&](const DrwElem& a) { return E_.R(a, r); });
  return mR_.emplace(key, std::move(f)).first->second;
}

const AbMap& DrwLab::mapF(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = mF_.find(key);
  if (it != mF_.end()) return it->second;
  AbMap f = (r <= 1) ? zero_map(group(r, n), group(r - 1, n))
                     : term_map(r, n, r - 1, n, [&](const DrwElem& a) { return E_.F(a, r); });
  return mF_.emplace(key, std::move(f)).first->second;
}

const AbMap& DrwLab::mapV(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = mV_.find(key);
  if (it != mV_.end()) return it->second;
  AbMap f = term_map(r, n, r + 1, n, [&](const DrwElem& a) { return E_.V(a, r); });
  return mV_.emplace(key, std::move(f)).first->second;
}

const AbMap& DrwLab::mapD(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = mD_.find(key);
  if (it != mD_.end()) return it->second;
  AbMap f = term_map(r, n, r, n + 1, [&](const DrwElem& a) { return E_.d(a, r); });
  return mD_.emplace(key, std::move(f)).first->second;
}

const AbMap& DrwLab::mapPhi(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = mPhi_.find(key);
  if (it != mPhi_.end()) return it->second;
  AbMap f = term_map(r, n, r, n, [&](const DrwElem& a) { return E_.phi(a, r); });
  return mPhi_.emplace(key, std::move(f)).first->second;
}

Mat DrwLab::relation_matrix(int r, int n, int slack) {
  const auto& G = at(r, n);
  return relation_rows(r, n, slack, G.dict, G.index);
}

const WittRing& DrwLab::witt(int r) {
  auto it = witt_.find(r);
  if (it != witt_.end()) return *it->second;
  return *witt_.emplace(r, std::make_unique<WittRing>(*A_, r, univ_)).first->second;
}

const AbMap& DrwLab::to_witt_map(int r) {
  auto it = toW_.find(r);
  if (it != toW_.end()) return it->second;
  const auto& G = at(r, 0);
  const WittRing& W = witt(r);
  Mat M;
  M.reserve(G.dict.size());
  for (const auto& t : G.dict) {
    int b = 0;
    for (const auto& op : t)
      if (op.kind == LayerOp::V) b += op.i;
    int mu = A_->basis_index(pooled_exponent(t, E_.p()));
    if (mu < 0) throw std::domain_error("OracleMismatch: window term with dead pooled monomial");
    Row row(static_cast<std::size_t>(W.pres().ngens()), Int(0));
    row[static_cast<std::size_t>(W.gen_id(b, mu))] = 1;
    M.push_back(std::move(row));
  }
  AbMap f{G.grp.get(), &W.pres(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: degree-0 comparison map not well-defined");
  return toW_.emplace(r, std::move(f)).first->second;
}

const AbMap& DrwLab::from_witt_map(int r) {
  auto it = fromW_.find(r);
  if (it != fromW_.end()) return it->second;
  const auto& G = at(r, 0);
  const WittRing& W = witt(r);
  Mat M;
  M.reserve(static_cast<std::size_t>(W.pres().ngens()));
  for (int gid = 0; gid < W.pres().ngens(); ++gid) {
    int i = W.gen_level(gid);
    const Expo& mu = A_->basis()[static_cast<std::size_t>(W.gen_mono(gid))];
    DrwElem e = E_.iter_V(E_.int_mono(1, mu, r - i), r - i, i);
    M.push_back(project_into(E_, J_, G.index, G.grp->ngens(), e, 0));
  }
  AbMap f{&W.pres(), G.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: degree-0 comparison inverse not well-defined");
  return fromW_.emplace(r, std::move(f)).first->second;
}

void DrwLab::check_witt_anchor(int r) {
  const auto& G = at(r, 0);
  const WittRing& W = witt(r);
  const AbMap& toW = to_witt_map(r);
  const AbMap& fromW = from_witt_map(r);
  if (!check_iso(toW).iso)
    throw std::domain_error("OracleMismatch: degree-0 group differs from the Witt presentation");
  if (!maps_equal(compose(toW, fromW), identity_map(*G.grp)) ||
      !maps_equal(compose(fromW, toW), identity_map(W.pres())))
    throw std::domain_error("OracleMismatch: degree-0 comparison maps are not mutually inverse");
  if (G.grp->order() != ipow(Int(E_.p()), static_cast<unsigned>(r * A_->dim())))
    throw std::domain_error("OracleMismatch: degree-0 group order");
  Rng rng(1000003u * static_cast<unsigned>(E_.p()) + 101u * static_cast<unsigned>(r) +
          static_cast<unsigned>(A_->dim()));
  for (int trial = 0; trial < 8; ++trial) {
    Row x = G.grp->random_elem(rng);
    Row y = G.grp->random_elem(rng);
    DrwElem prod = E_.mul(lift(x, r, 0), lift(y, r, 0), r);
    Row lhs = toW.apply(project(prod, r, 0));
    Row rhs = W.mul_coords(toW.apply(x), toW.apply(y));
    if (!W.pres().same_elem(lhs, rhs))
      throw std::domain_error("OracleMismatch: degree-0 ring structure disagrees");
  }
}

const KaehlerComplex& DrwLab::kaehler() {
  if (!kaehler_) kaehler_ = std::make_unique<KaehlerComplex>(*A_);
  return *kaehler_;
}

const AbMap& DrwLab::to_kaehler_map(int n) {
  auto it = toK_.find(n);
  if (it != toK_.end()) return it->second;
  const auto& G = at(1, n);
  const KaehlerComplex& K = kaehler();
  int m = E_.nvars();
  Mat M;
  M.reserve(G.dict.size());
  for (const auto& t : G.dict) {
    Expo mu(static_cast<std::size_t>(m), 0);
    std::vector<AlgElem> gs;
    for (int v = 0; v < m; ++v) {
      const LayerOp& op = t[static_cast<std::size_t>(v)];
      if (op.kind == LayerOp::Edge) {
        mu[static_cast<std::size_t>(v)] = static_cast<int>(op.j - 1);
        Expo ev(static_cast<std::size_t>(m), 0);
        ev[static_cast<std::size_t>(v)] = 1;
        gs.push_back(AlgElem::monomial(A_, ev));
      } else {
        mu[static_cast<std::size_t>(v)] = static_cast<int>(op.j);
      }
    }
    M.push_back(K.encode_fdg(AlgElem::monomial(A_, mu), gs));
  }
  AbMap f{G.grp.get(), &K.omega(n), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: level-1 comparison map not well-defined");
  return toK_.emplace(n, std::move(f)).first->second;
}

const AbMap& DrwLab::from_kaehler_map(int n) {
  auto it = fromK_.find(n);
  if (it != fromK_.end()) return it->second;
  const auto& G = at(1, n);
  const KaehlerComplex& K = kaehler();
  Mat M;
  M.reserve(K.gens(n).size());
  for (const auto& kg : K.gens(n)) {
    Expo e = A_->basis()[static_cast<std::size_t>(kg.mu)];
    for (int k : kg.K) e[static_cast<std::size_t>(k)] += 1;
    DrwElem form = E_.basic_form(1, e, kg.K, 1);
    M.push_back(project_into(E_, J_, G.index, G.grp->ngens(), form, n));
  }
  AbMap f{&K.omega(n), G.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: level-1 comparison inverse not well-defined");
  return fromK_.emplace(n, std::move(f)).first->second;
}

void DrwLab::check_kaehler_anchor(int n) {
  const auto& G = at(1, n);
  const KaehlerComplex& K = kaehler();
  const AbMap& toK = to_kaehler_map(n);
  const AbMap& fromK = from_kaehler_map(n);
  if (!check_iso(toK).iso)
    throw std::domain_error("OracleMismatch: level-1 group differs from Kahler differentials");
  if (!maps_equal(compose(toK, fromK), identity_map(*G.grp)) ||
      !maps_equal(compose(fromK, toK), identity_map(K.omega(n))))
    throw std::domain_error("OracleMismatch: level-1 comparison maps are not mutually inverse");
  if (n < E_.nvars()) {
    if (!maps_equal(compose(mapD(1, n), to_kaehler_map(n + 1)), compose(toK, K.d(n))))
      throw std::domain_error("OracleMismatch: level-1 comparison does not intertwine d");
  }
}

AbMap DrwLab::vchain(int from_r, int n, int times) {
  AbMap f = identity_map(group(from_r, n));
  for (int l = from_r; l < from_r + times; ++l) f = compose(f, mapV(l, n));
  return f;
}

Subgroup DrwLab::filtration(FilKind kind, int i, int r, int n) {
  auto key = std::make_tuple(static_cast<int>(kind), i, r, n);
  auto it = fil_.find(key);
  if (it != fil_.end()) return it->second;
  const FinAb& G = group(r, n);
  Subgroup res;
  if (kind == FilKind::CARTIER_B || kind == FilKind::CARTIER_Z) {
    if (r != 1) throw std::invalid_argument("Cartier filtration lives at level 1");
    if (i < 0) throw std::invalid_argument("Cartier filtration index");
    res = cartier_sub(kind == FilKind::CARTIER_Z, i, n);
  } else if (i <= 0) {
    res = full_subgroup(G);
  } else if (i >= r) {
    res = zero_subgroup(G);
  } else if (kind == FilKind::CANONICAL) {
    AbMap f = mapR(r, n);
    for (int l = r - 1; l > i; --l) f = compose(f, mapR(l, n));
    res = kernel_subgroup(f);
  } else if (kind == FilKind::P) {
    res = kernel_subgroup(
        multiplication_map(G, ipow(Int(E_.p()), static_cast<unsigned>(r - i))));
  } else {
    res = image_subgroup(vchain(r - i, n, i));
    if (n >= 1)
      res = sub_sum(res, image_subgroup(compose(vchain(r - i, n - 1, i), mapD(r, n - 1))));
  }
  return fil_.emplace(key, std::move(res)).first->second;
}

const Subquotient& DrwLab::fbar_target(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = fbar_tgt_.find(key);
  if (it != fbar_tgt_.end()) return it->second;
  const FinAb& G = group(r, n);
  Subgroup T = (n >= 1)
                   ? image_subgroup(compose(vchain(1, n - 1, r - 1), mapD(r, n - 1)))
                   : zero_subgroup(G);
  return fbar_tgt_.emplace(key, present_quotient(G, T)).first->second;
}

const AbMap& DrwLab::fbar_proj(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = fbar_proj_.find(key);
  if (it != fbar_proj_.end()) return it->second;
  AbMap f = quotient_projection(fbar_target(r, n));
  return fbar_proj_.emplace(key, std::move(f)).first->second;
}

const Subquotient& DrwLab::mod_d(int n) { return fbar_target(1, n); }

const AbMap& DrwLab::mod_d_proj(int n) { return fbar_proj(1, n); }

const AbMap& DrwLab::cartier_class_map(int n) {
  auto it = cclass_.find(n);
  if (it != cclass_.end()) return it->second;
  at(1, n);
  const KaehlerComplex& K = kaehler();
  int kg = K.omega(n).ngens();
  Mat CK;
  CK.reserve(static_cast<std::size_t>(kg));
  for (int g = 0; g < kg; ++g) CK.push_back(K.cartier_inverse_gen(n, g));
  AbMap ck{&K.omega(n), &K.omega(n), CK};
  AbMap f = compose(compose(compose(to_kaehler_map(n), ck), from_kaehler_map(n)),
                    mod_d_proj(n));
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: inverse Cartier does not respect relations");
  return cclass_.emplace(n, std::move(f)).first->second;
}

Subgroup DrwLab::cartier_sub(bool wantZ, int i, int n) {
  auto& cache = wantZ ? cartZ_ : cartB_;
  auto key = std::make_pair(i, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const FinAb& G = group(1, n);
  Subgroup res;
  if (i == 0) {
    res = wantZ ? full_subgroup(G) : zero_subgroup(G);
  } else {
    Subgroup prev = cartier_sub(wantZ, i - 1, n);
    const AbMap& C = cartier_class_map(n);
    Mat rows;
    rows.reserve(prev.lat.size());
    for (const auto& x : prev.lat) rows.push_back(C.apply(x));
    res = preimage(mod_d_proj(n), span_subgroup(*mod_d(n).grp, rows));
  }
  return cache.emplace(key, std::move(res)).first->second;
}

Mat DrwLab::cartier_amb_lift(int n) {
  const AbMap& C = cartier_class_map(n);
  const Subquotient& Q = mod_d(n);
  Mat L;
  L.reserve(C.M.size());
  for (const auto& row : C.M) L.push_back(row_mat_mul(row, Q.lifts, Q.amb->ngens()));
  return L;
}

const Subquotient& DrwLab::cartier_piece(int n, int i) {
  auto key = std::make_pair(n, i);
  auto it = cpiece_.find(key);
  if (it != cpiece_.end()) return it->second;
  const FinAb& G = group(1, n);
  Subquotient Q = present_subquotient(G, cartier_sub(true, i, n), cartier_sub(false, i, n));
  return cpiece_.emplace(key, std::move(Q)).first->second;
}

const AbMap& DrwLab::cartier_iterate_map(int n, int i) {
  auto key = std::make_pair(n, i);
  auto it = citer_.find(key);
  if (it != citer_.end()) return it->second;
  const auto& G = at(1, n);
  const Subquotient& piece = cartier_piece(n, i);
  Mat L = cartier_amb_lift(n);
  int ng = G.grp->ngens();
  Mat M;
  M.reserve(static_cast<std::size_t>(ng));
  for (int k = 0; k < ng; ++k) {
    Row x(static_cast<std::size_t>(ng), Int(0));
    x[static_cast<std::size_t>(k)] = 1;
    for (int step = 0; step < i; ++step) x = row_mat_mul(x, L, ng);
    auto c = subq_coords(piece, x);
    if (!c)
      throw std::domain_error("OracleMismatch: iterated inverse Cartier escapes the cycles");
    M.push_back(*c);
  }
  AbMap f{G.grp.get(), piece.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: iterated inverse Cartier not well-defined");
  return citer_.emplace(key, std::move(f)).first->second;
}

const Subquotient& DrwLab::cartier_quot(int n, int i) {
  auto key = std::make_pair(n, i);
  auto it = cquot_.find(key);
  if (it != cquot_.end()) return it->second;
  const FinAb& G = group(1, n);
  Subquotient Q = present_quotient(G, cartier_sub(false, i, n));
  return cquot_.emplace(key, std::move(Q)).first->second;
}

const AbMap& DrwLab::cartier_pi_minus(int n, int i) {
  auto key = std::make_pair(n, i);
  auto it = cpim_.find(key);
  if (it != cpim_.end()) return it->second;
  const FinAb& G = group(1, n);
  Mat L = cartier_amb_lift(n);
  int ng = G.ngens();
  Mat M;
  M.reserve(static_cast<std::size_t>(ng));
  for (int k = 0; k < ng; ++k) {
    Row row(static_cast<std::size_t>(ng), Int(0));
    row[static_cast<std::size_t>(k)] = 1;
    for (int j = 0; j < ng; ++j)
      row[static_cast<std::size_t>(j)] -= L[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    M.push_back(std::move(row));
  }
  AbMap amb{&G, &G, M};
  auto f = induced_map(cartier_quot(n, i), cartier_quot(n, i + 1), amb);
  if (!f)
    throw std::domain_error("OracleMismatch: pi - C^{-1} does not descend to the quotients");
  return cpim_.emplace(key, std::move(*f)).first->second;
}

const Subquotient& DrwLab::graded_piece(int r, int i, int q) {
  auto key = std::make_tuple(r, i, q);
  auto it = graded_.find(key);
  if (it != graded_.end()) return it->second;
  const FinAb& G = group(r, q);
  Subquotient Q = present_subquotient(G, filtration(FilKind::CANONICAL, i, r, q),
                                      filtration(FilKind::CANONICAL, i + 1, r, q));
  return graded_.emplace(key, std::move(Q)).first->second;
}

const AbMap& DrwLab::graded_piece_map(int r, int i, int q) {
  auto key = std::make_tuple(r, i, q);
  auto it = graded_map_.find(key);
  if (it != graded_map_.end()) return it->second;
  const auto& G1 = at(1, q);
  const auto& Gr = at(r, q);
  const Subquotient& piece = graded_piece(r, i, q);
  Int pi = ipow(Int(E_.p()), static_cast<unsigned>(i));
  Mat M;
  M.reserve(G1.dict.size());
  for (const auto& t : G1.dict) {
    auto pos = Gr.index.find(t);
    if (pos == Gr.index.end())
      throw std::domain_error("OracleMismatch: level-1 window does not nest into level r");
    Row x(static_cast<std::size_t>(Gr.grp->ngens()), Int(0));
    x[static_cast<std::size_t>(pos->second)] = pi;
    auto c = subq_coords(piece, x);
    if (!c)
      throw std::domain_error("OracleMismatch: p^i image misses the canonical filtration step");
    M.push_back(*c);
  }
  AbMap f{G1.grp.get(), piece.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: graded piece map not well-defined");
  return graded_map_.emplace(key, std::move(f)).first->second;
}

AbMap DrwLab::dict_projection(DrwLab& quot, int r, int n) {
  if (quot.A_->p() != A_->p() || quot.A_->nvars() != A_->nvars())
    throw std::invalid_argument("dict_projection: incompatible algebras");
  for (const auto& g : J_.gens())
    if (!quot.J_.contains(g))
      throw std::invalid_argument("dict_projection: target is not a further quotient");
  const auto& S = at(r, n);
  const auto& T = quot.at(r, n);
  Mat M;
  M.reserve(S.dict.size());
  for (const auto& t : S.dict) M.push_back(quot.project(DrwElem{{t, 1}}, r, n));
  AbMap f{S.grp.get(), T.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: quotient projection not well-defined");
  return f;
}

Subgroup DrwLab::relative_subgroup(DrwLab& quot, int r, int n) {
  return kernel_subgroup(dict_projection(quot, r, n));
}

Subquotient DrwLab::relative_presentation(DrwLab& quot, int r, int n) {
  const FinAb& G = group(r, n);
  return present_subgroup(G, relative_subgroup(quot, r, n));
}

}  // namespace hwlab
