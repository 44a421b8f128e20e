#include <stdexcept>
#include <utility>
#include <vector>

#include "hwlab/drwgroup.hpp"
#include "hwlab/numeric.hpp"
#include "hwlab/snf.hpp"

namespace hwlab {

namespace {

std::vector<int> unit_key(const MonomialAlgebra& A, const AlgElem& u) {
  std::vector<int> k(static_cast<std::size_t>(A.dim()), 0);
  for (const auto& [i, c] : u.coeffs()) k[static_cast<std::size_t>(i)] = c;
  return k;
}

}  // namespace

const DrwLab::UnitGroup& DrwLab::units() {
  if (units_) return *units_;
  UnitGroup U;
  int p = E_.p();
  if (p >= 3)
    U.gens.push_back(AlgElem::scalar(
        A_, static_cast<int>(smallest_primitive_root(static_cast<unsigned>(p)))));
  for (const auto& mu : A_->maximal_ideal_monomials())
    U.gens.push_back(AlgElem::scalar(A_, 1) + AlgElem::monomial(A_, mu));
  int ng = static_cast<int>(U.gens.size());

  // Breadth-first closure of the generators with Schreier relations.
  EchelonSolver rels(ng);
  std::vector<AlgElem> queue;
  AlgElem one = AlgElem::scalar(A_, 1);
  U.table.emplace(unit_key(*A_, one), Row(static_cast<std::size_t>(ng), Int(0)));
  queue.push_back(one);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    AlgElem u = queue[head];
    Row x = U.table.at(unit_key(*A_, u));
    for (int j = 0; j < ng; ++j) {
      AlgElem w = u * U.gens[static_cast<std::size_t>(j)];
      Row y = x;
      y[static_cast<std::size_t>(j)] += 1;
      auto key = unit_key(*A_, w);
      auto it = U.table.find(key);
      if (it == U.table.end()) {
        U.table.emplace(std::move(key), std::move(y));
        queue.push_back(w);
      } else {
        Row rel = y;
        for (std::size_t k = 0; k < rel.size(); ++k) rel[k] -= it->second[k];
        rels.add_row(std::move(rel), 0);
      }
    }
  }
  U.grp = std::make_shared<FinAb>(ng, rels.basis());
  Int expect = Int(p - 1) * ipow(Int(p), static_cast<unsigned>(A_->dim() - 1));
  U.certified = U.grp->order() == expect && Int(U.table.size()) == expect;
  if (!U.certified)
    throw std::domain_error("OracleMismatch: unit group certification failed");
  units_ = std::move(U);
  return *units_;
}

Row DrwLab::unit_coords(const AlgElem& u) const {
  if (!units_) throw std::logic_error("unit_coords: units() not built yet");
  auto it = units_->table.find(unit_key(*A_, u));
  if (it == units_->table.end()) throw std::invalid_argument("unit_coords: not a unit");
  return it->second;
}

DrwElem DrwLab::teich_elem(const AlgElem& f, int r) {
  const WittRing& W = witt(r);
  Row c = W.coords(W.teich(f));
  DrwElem out;
  for (int gid = 0; gid < W.pres().ngens(); ++gid) {
    const Int& cg = c[static_cast<std::size_t>(gid)];
    if (cg == 0) continue;
    int i = W.gen_level(gid);
    const Expo& mu = A_->basis()[static_cast<std::size_t>(W.gen_mono(gid))];
    out = E_.add(out, E_.iter_V(E_.int_mono(cg, mu, r - i), r - i, i), r);
  }
  return out;
}

DrwElem DrwLab::dlog_elem(const AlgElem& u, int r) {
  return E_.mul(teich_elem(u.inverse(), r), E_.d(teich_elem(u, r), r), r);
}

const AbMap& DrwLab::dlog_map(int r) {
  auto it = dlog_.find(r);
  if (it != dlog_.end()) return it->second;
  const UnitGroup& U = units();
  const auto& G = at(r, 1);
  Mat M;
  M.reserve(U.gens.size());
  for (const auto& g : U.gens) M.push_back(project(dlog_elem(g, r), r, 1));
  AbMap f{U.grp.get(), G.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: dlog is not well-defined on the unit relations");
  return dlog_.emplace(r, std::move(f)).first->second;
}

Subgroup DrwLab::log_subgroup(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = log_.find(key);
  if (it != log_.end()) return it->second;
  const FinAb& G = group(r, n);
  Mat rows;
  if (n == 0) {
    rows.push_back(project(E_.int_mono(1, Expo(static_cast<std::size_t>(E_.nvars()), 0), r), r, 0));
  } else {
    const UnitGroup& U = units();
    int ng = static_cast<int>(U.gens.size());
    std::vector<DrwElem> dl;
    dl.reserve(U.gens.size());
    for (const auto& g : U.gens) dl.push_back(dlog_elem(g, r));
    std::vector<int> tup(static_cast<std::size_t>(n), 0);
    for (;;) {
      DrwElem prod = dl.empty() ? DrwElem{} : dl[static_cast<std::size_t>(tup[0])];
      for (int k = 1; k < n && !prod.empty(); ++k)
        prod = E_.mul(prod, dl[static_cast<std::size_t>(tup[static_cast<std::size_t>(k)])], r);
      if (!prod.empty()) rows.push_back(project(prod, r, n));
      int v = 0;
      while (v < n && tup[static_cast<std::size_t>(v)] == ng - 1) {
        tup[static_cast<std::size_t>(v)] = 0;
        ++v;
      }
      if (v == n || ng == 0) break;
      ++tup[static_cast<std::size_t>(v)];
    }
  }
  return log_.emplace(key, span_subgroup(G, rows)).first->second;
}

// Reduced Frobenius: lift along R by reading the same canonical key one level
// up, apply F, project modulo d V^{r-1}. Certified by the relation check and by
// F killing the two kinds of R-kernel generators.
const AbMap& DrwLab::fbar(int r, int n) {
  auto key = std::make_pair(r, n);
  auto it = fbar_.find(key);
  if (it != fbar_.end()) return it->second;
  const auto& G = at(r, n);
  const Subquotient& Q = fbar_target(r, n);
  const AbMap& piQ = fbar_proj(r, n);
  Mat M;
  M.reserve(G.dict.size());
  for (const auto& t : G.dict)
    M.push_back(piQ.apply(project(E_.F(DrwElem{{t, 1}}, r + 1), r, n)));
  AbMap f{G.grp.get(), Q.grp.get(), M};
  if (!well_defined(f))
    throw std::domain_error("OracleMismatch: reduced Frobenius not well-defined");
  for (const auto& x : at(1, n).dict) {
    DrwElem vx = E_.iter_V(DrwElem{{x, 1}}, 1, r);
    if (!Q.grp->is_zero_elem(piQ.apply(project(E_.F(vx, r + 1), r, n))))
      throw std::domain_error("OracleMismatch: reduced Frobenius depends on the V-part of a lift");
  }
  if (n >= 1) {
    for (const auto& y : at(1, n - 1).dict) {
      DrwElem dvy = E_.d(E_.iter_V(DrwElem{{y, 1}}, 1, r), r + 1);
      if (!Q.grp->is_zero_elem(piQ.apply(project(E_.F(dvy, r + 1), r, n))))
        throw std::domain_error("OracleMismatch: reduced Frobenius depends on the dV-part of a lift");
    }
  }
  if (groups_.count(std::make_pair(r + 1, n))) {
    if (!maps_equal(compose(mapR(r + 1, n), f), compose(mapF(r + 1, n), piQ)))
      throw std::domain_error("OracleMismatch: reduced Frobenius square with R and F");
  }
  return fbar_.emplace(key, std::move(f)).first->second;
}

DrwElem DrwLab::rf_preimage_of_dx(const DrwElem& x, int r) {
  if (x.empty()) return {};
  int n = DrwEngine::term_degree(x.begin()->first);
  DrwElem xp;
  for (int j = 1; j <= r; ++j) {
    DrwElem rj = E_.iter_R(x, r, j - 1);
    xp = E_.add(xp, E_.iter_V(rj, r - j + 1, j), r + 1);
  }
  xp = E_.scale(-1, xp, r + 1);
  DrwElem dxp = E_.d(xp, r + 1);
  DrwElem lhs = E_.sub(E_.sub(E_.R(dxp, r + 1), E_.F(dxp, r + 1), r), E_.d(x, r), r);
  if (!group(r, n + 1).is_zero_elem(project(lhs, r, n + 1)))
    throw std::domain_error("OracleMismatch: (R - F) d-preimage certificate failed");
  return xp;
}

RfRelativeWitness DrwLab::rf_relative_surjectivity(DrwLab& quot, const DrwElem& omega, int r,
                                                   int n) {
  RfRelativeWitness wit;
  if (!quot.group(r, n).is_zero_elem(quot.project(omega, r, n))) {
    wit.not_relative = true;
    return wit;
  }
  const auto& G = at(r, n);
  int g = G.grp->ngens();
  int p = E_.p();
  int m = E_.nvars();
  const MonomialIdeal& I = quot.J_;

  int k0 = 1;
  for (;; ++k0) {
    bool dead = true;
    MonomialIdeal Ik = I.power(k0);
    for (const auto& mg : Ik.gens())
      if (!J_.contains(mg)) {
        dead = false;
        break;
      }
    if (dead) break;
    if (k0 > 64) throw std::logic_error("rf_relative_surjectivity: ideal power bound");
  }
  int N = 0;
  std::int64_t pn = 1;
  while (pn - 1 < k0) {
    pn *= p;
    ++N;
  }
  int L = 2 * r + N;
  wit.N = N;
  wit.lift_level = L;

  // Solve omega over the relative ideal family at level r, tracking which
  // generator products contribute.
  struct Desc {
    int i;
    Expo mu;
    TermKey om;
    bool dee;
  };
  std::vector<Desc> descs;
  EchelonSolver es(g);
  for (const auto& lrow : G.grp->lattice()) es.add_row(lrow, -1);

  auto beltN = enumerate_belt(r, n, svec_);
  auto beltN1 = enumerate_belt(r, n - 1, svec_);
  auto weights_of = [&](const std::vector<TermKey>& ts) {
    std::vector<WeightVector> w;
    w.reserve(ts.size());
    for (const auto& t : ts) w.push_back(E_.weight(t));
    return w;
  };
  auto wN = weights_of(beltN);
  auto wN1 = weights_of(beltN1);
  auto fits = [&](const WeightVector& wg, const WeightVector& wo) {
    for (int v = 0; v < m; ++v) {
      auto sv = static_cast<std::size_t>(v);
      std::int64_t lhs = wg[sv].num * ipow64(p, static_cast<unsigned>(wo[sv].den)) +
                         wo[sv].num * ipow64(p, static_cast<unsigned>(wg[sv].den));
      if (lhs > svec_[sv] * ipow64(p, static_cast<unsigned>(wg[sv].den + wo[sv].den)))
        return false;
    }
    return true;
  };

  for (int i = 0; i < r; ++i) {
    std::int64_t pi = ipow64(p, static_cast<unsigned>(i));
    Expo mu(static_cast<std::size_t>(m), 0);
    for (;;) {
      bool usable = I.contains(mu) && !J_.contains(mu);
      if (usable && i >= 1) {
        bool allp = true;
        Expo mup(mu);
        for (int v = 0; v < m && allp; ++v) {
          auto sv = static_cast<std::size_t>(v);
          if (mu[sv] % p) allp = false;
          else mup[sv] = mu[sv] / p;
        }
        if (allp && I.contains(mup)) usable = false;
      }
      if (usable) {
        for (int v = 0; v < m && usable; ++v) {
          auto sv = static_cast<std::size_t>(v);
          if (mu[sv] >= pi) {
            Expo red(mu);
            red[sv] -= static_cast<int>(pi);
            if (I.contains(red)) usable = false;
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
            Row row = project(prod, r, n);
            int id = static_cast<int>(descs.size());
            descs.push_back(Desc{i, mu, beltN[k], false});
            es.add_row(std::move(row), id);
          }
          if (!dgmu.empty())
            for (std::size_t k = 0; k < beltN1.size(); ++k) {
              if (!fits(*wg, wN1[k])) continue;
              DrwElem prod = E_.mul(dgmu, DrwElem{{beltN1[k], 1}}, r);
              if (prod.empty()) continue;
              Row row = project(prod, r, n);
              int id = static_cast<int>(descs.size());
              descs.push_back(Desc{i, mu, beltN1[k], true});
              es.add_row(std::move(row), id);
            }
        }
      }
      int v = 0;
      while (v < m && mu[static_cast<std::size_t>(v)] ==
                          static_cast<int>(svec_[static_cast<std::size_t>(v)] * pi)) {
        mu[static_cast<std::size_t>(v)] = 0;
        ++v;
      }
      if (v == m) break;
      ++mu[static_cast<std::size_t>(v)];
    }
    if (m == 0) break;
  }

  auto sol = es.solve(project(omega, r, n));
  if (!sol)
    throw std::domain_error("OracleMismatch: relative class not spanned by the ideal family");

  Int pL = ipow(Int(p), static_cast<unsigned>(L));
  DrwElem ot;
  for (const auto& [id, c] : *sol) {
    if (id < 0) continue;
    Int cc = modnorm(c, pL);
    if (cc == 0) continue;
    const Desc& dsc = descs[static_cast<std::size_t>(id)];
    DrwElem gm = E_.iter_V(E_.int_mono(1, dsc.mu, L - dsc.i), L - dsc.i, dsc.i);
    if (dsc.dee) gm = E_.d(gm, L);
    DrwElem prod = E_.mul(gm, DrwElem{{dsc.om, 1}}, L);
    ot = E_.add(ot, E_.scale(cc, prod, L), L);
  }

  wit.cert_vanish = G.grp->is_zero_elem(project(E_.iter_F(ot, L, r + N), r, n));

  DrwElem z;
  for (int j = 0; j <= r + N - 1; ++j) {
    DrwElem rj = E_.iter_R(ot, L, j);
    z = E_.add(z, E_.iter_F(rj, L - j, r + N - 1 - j), r + 1);
  }
  wit.z = z;
  DrwElem rfz = E_.sub(E_.sub(E_.R(z, r + 1), E_.F(z, r + 1), r), omega, r);
  wit.cert_rf = G.grp->is_zero_elem(project(rfz, r, n));
  if (!wit.cert_vanish || !wit.cert_rf)
    throw std::domain_error("OracleMismatch: R - F relative surjectivity certificates failed");
  return wit;
}

}  // namespace hwlab
