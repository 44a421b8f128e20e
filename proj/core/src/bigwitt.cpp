#include "hwlab/bigwitt.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hwlab {

TruncationSet::TruncationSet(std::vector<int> e) : elems(std::move(e)) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  for (int k : elems) {
    if (k <= 0) throw std::invalid_argument("truncation set needs positive entries");
    for (int d = 1; d <= k; ++d)
      if (k % d == 0 && !std::binary_search(elems.begin(), elems.end(), d))
        throw std::invalid_argument("truncation set not divisor-closed");
  }
}

bool TruncationSet::contains(int k) const {
  return std::binary_search(elems.begin(), elems.end(), k);
}

TruncationSet TruncationSet::quotient(int m) const {
  if (m <= 0) throw std::invalid_argument("quotient by nonpositive integer");
  std::vector<int> q;
  for (int k : elems)
    if (k % m == 0) q.push_back(k / m);
  return TruncationSet(std::move(q));
}

TruncationSet full_truncation(int n) {
  std::vector<int> e(static_cast<std::size_t>(std::max(n, 0)));
  for (int k = 1; k <= n; ++k) e[static_cast<std::size_t>(k - 1)] = k;
  return TruncationSet(std::move(e));
}

BigWitt::BigWitt(int p, int s) : p_(p), s_(s), units_(p, s) {
  if (s_ > 8) return;  // grid never needs a certificate beyond this
  // gamma is injective on all p^{s-1} vectors and hits every principal unit.
  std::set<std::vector<int>> seen;
  Vec w = zero();
  Int count = 0;
  while (true) {
    AlgElem u = gamma(w);
    std::vector<int> k(static_cast<std::size_t>(alg().dim()), 0);
    for (const auto& [i, c] : u.coeffs()) k[static_cast<std::size_t>(i)] = c;
    if (!seen.insert(k).second) return;  // collision: leave uncertified
    if (gamma_inv(u) != w) return;
    ++count;
    std::size_t i = 0;
    while (i < w.size() && w[i] == p_ - 1) w[i++] = 0;
    if (i == w.size()) break;
    ++w[i];
  }
  certified_ = count == ipow(Int(p_), static_cast<unsigned>(s_ - 1)) &&
               units_.decomposition_certified();
}

BigWitt::Vec BigWitt::single(int i, int c) const {
  if (i < 1 || i > s_ - 1) throw std::out_of_range("big Witt coordinate");
  Vec w = zero();
  w[static_cast<std::size_t>(i - 1)] = static_cast<int>(modnorm64(c, p_));
  return w;
}

AlgElem BigWitt::gamma(const Vec& w) const {
  if (static_cast<int>(w.size()) != s_ - 1) throw std::invalid_argument("big Witt arity");
  AlgElem acc = AlgElem::scalar(&alg(), 1);
  for (int i = 1; i <= s_ - 1; ++i) {
    int c = static_cast<int>(modnorm64(w[static_cast<std::size_t>(i - 1)], p_));
    if (c == 0) continue;
    acc = acc * (AlgElem::scalar(&alg(), 1) + AlgElem::monomial(&alg(), {i}, c));
  }
  return acc;
}

BigWitt::Vec BigWitt::gamma_inv(const AlgElem& u) const {
  if (u.constant_term() != 1) throw std::domain_error("gamma_inv: not a principal unit");
  AlgElem cur = u;
  Vec w = zero();
  for (int i = 1; i <= s_ - 1; ++i) {
    int c = cur.coeff(alg().basis_index({i}));
    if (c == 0) continue;
    w[static_cast<std::size_t>(i - 1)] = c;
    cur = cur * (AlgElem::scalar(&alg(), 1) + AlgElem::monomial(&alg(), {i}, c)).inverse();
  }
  if (!(cur - AlgElem::scalar(&alg(), 1)).is_zero())
    throw std::logic_error("gamma_inv peeling failed");
  return w;
}

BigWitt::Vec BigWitt::add(const Vec& a, const Vec& b) const {
  return gamma_inv(gamma(a) * gamma(b));
}

std::vector<Int> BigWitt::decompose(const Vec& w) const { return units_.dlog(gamma(w)); }

BigWitt::Vec BigWitt::from_decomposition(const std::vector<Int>& e) const {
  return gamma_inv(units_.unit_from_exponents(e));
}

WittIdealGens witt_ideal(const WittRing& W, const MonomialIdeal& J) {
  const MonomialAlgebra& A = W.alg();
  WittIdealGens out;
  int nIdeal = 0;
  for (int mu = 0; mu < A.dim(); ++mu)
    if (J.contains(A.basis()[mu])) ++nIdeal;
  for (int i = 0; i < W.r(); ++i)
    for (int mu = 0; mu < A.dim(); ++mu) {
      if (!J.contains(A.basis()[mu])) continue;
      for (int c = 1; c < A.p(); ++c) {
        WittRing::Vec g = W.teich(AlgElem::monomial(&A, A.basis()[mu], c));
        for (int k = 0; k < i; ++k) g = W.V(g);
        out.gens.push_back(std::move(g));
      }
    }
  out.span = W.ideal_subgroup(J);
  Int sizeWr = ipow(ipow(Int(A.p()), static_cast<unsigned>(A.dim())), static_cast<unsigned>(W.r()));
  if (sizeWr > 1000000) return out;  // SpanTooLarge: unverified
  // Order: |W_r(I)| = |I|^r with |I| = p^{#ideal basis monomials}.
  Int want = ipow(Int(A.p()), static_cast<unsigned>(W.r() * nIdeal));
  Subquotient S = present_subgroup(W.pres(), out.span);
  if (!S.grp->finite() || S.grp->order() != want) return out;
  // Every listed generator lies in the span and has all coordinates in the ideal.
  for (const auto& g : out.gens) {
    if (!W.in_ideal(g, J)) return out;
    if (!sub_contains(out.span, W.coords(g))) return out;
  }
  // Spot-check: random coordinate-wise members land in the span.
  Rng rng(913 * A.p() + 17 * W.r() + nIdeal);
  for (int it = 0; it < 20; ++it) {
    WittRing::Vec v = W.random_ideal_vec(J, rng);
    if (!sub_contains(out.span, W.coords(v))) return out;
  }
  out.certified = true;
  return out;
}

IntertwineWitness intertwine_witness(const WittRing& W, const MonomialIdeal& I, int N, int bound,
                                     Rng& rng) {
  if (N < 1 || bound < N) throw std::invalid_argument("intertwine_witness parameters");
  const MonomialAlgebra& A = W.alg();
  IntertwineWitness out;
  out.N = N;
  if (I.gens().empty()) {  // zero ideal: everything is vacuous
    out.M = N;
    out.found = true;
    out.easy_inclusion = true;
    return out;
  }
  // Target: the W_r(A)-ideal generated by the [g^N], as an additive subgroup.
  Mat rows;
  for (const auto& g : I.gens()) {
    WittRing::Vec tg = W.teich(AlgElem::monomial(&A, expo_pow(g, N)));
    for (int e = 0; e < W.pres().ngens(); ++e) {
      Row unit(W.pres().ngens(), 0);
      unit[e] = 1;
      rows.push_back(W.coords(W.mul(W.from_coords(unit), tg)));
    }
  }
  Subgroup target = span_subgroup(W.pres(), rows);
  // Easy inclusion W_r(I)^N <= W_r(I^N), sampled.
  MonomialIdeal IN = I.power(N);
  out.easy_inclusion = true;
  for (int it = 0; it < 100; ++it) {
    WittRing::Vec prod = W.one();
    for (int k = 0; k < N; ++k) prod = W.mul(prod, W.random_ideal_vec(I, rng));
    if (!W.in_ideal(prod, IN)) {
      out.easy_inclusion = false;
      break;
    }
    ++out.easy_products;
  }
  for (int M = N; M <= bound; ++M) {
    MonomialIdeal IM = I.power(M);
    bool all = true;
    int cert = 0;
    for (int i = 0; i < W.r() && all; ++i)
      for (int mu = 0; mu < A.dim() && all; ++mu) {
        if (!IM.contains(A.basis()[mu])) continue;
        Row x(W.pres().ngens(), 0);
        x[W.gen_id(i, mu)] = 1;
        if (sub_contains(target, x))
          ++cert;
        else
          all = false;
      }
    if (all) {
      out.M = M;
      out.found = true;
      out.certified_gens = cert;
      return out;
    }
  }
  return out;  // WitnessNotFound below the bound
}

}  // namespace hwlab
