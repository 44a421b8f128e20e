#include "hwlab/kaehler.hpp"

#include <algorithm>
#include <stdexcept>

namespace hwlab {

int merge_sign(const std::vector<int>& K, const std::vector<int>& L) {
  int inv = 0;
  for (int k : K)
    for (int l : L)
      if (l < k) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

namespace {
std::vector<std::vector<int>> subsets_of_size(int m, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int k = start; k < m; ++k) {
      cur.push_back(k);
      self(self, k + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Insert k into sorted K; returns {sign, merged} or sign 0 when k already present.
std::pair<int, std::vector<int>> insert_index(int k, const std::vector<int>& K) {
  std::vector<int> merged;
  int before = 0;
  for (int l : K) {
    if (l == k) return {0, {}};
    if (l < k) ++before;
  }
  merged = K;
  merged.insert(std::upper_bound(merged.begin(), merged.end(), k), k);
  return {(before % 2 == 0) ? 1 : -1, merged};
}
}  // namespace

KaehlerComplex::KaehlerComplex(const MonomialAlgebra& A) : A_(&A) { build(); }

void KaehlerComplex::build() {
  int m = A_->nvars();
  int dim = A_->dim();
  gens_.resize(m + 1);
  index_.resize(m + 1);
  for (int n = 0; n <= m; ++n) {
    for (const auto& K : subsets_of_size(m, n))
      for (int mu = 0; mu < dim; ++mu) {
        index_[n][{mu, K}] = static_cast<int>(gens_[n].size());
        gens_[n].push_back({mu, K});
      }
  }

  int p = A_->p();
  omega_.reserve(m + 1);
  for (int n = 0; n <= m; ++n) {
    int g = static_cast<int>(gens_[n].size());
    Mat rels;
    for (int i = 0; i < g; ++i) {
      Row r(g, 0);
      r[i] = p;
      rels.push_back(std::move(r));
    }
    // d(ideal gen) ^ dx_L, multiplied by each basis monomial.
    if (n >= 1) {
      for (const auto& e : A_->ideal().gens())
        for (const auto& L : subsets_of_size(m, n - 1))
          for (int nu = 0; nu < dim; ++nu) {
            Row r(g, 0);
            bool any = false;
            for (int k = 0; k < m; ++k) {
              if (e[k] % p == 0) continue;
              auto [sgn, K] = insert_index(k, L);
              if (sgn == 0) continue;
              Expo mono = expo_mul(A_->basis()[nu], e);
              mono[k] -= 1;
              int idx = A_->basis_index(mono);
              if (idx < 0) continue;
              r[gen_index(n, idx, K)] += sgn * (e[k] % p);
              any = true;
            }
            if (any) rels.push_back(std::move(r));
          }
    }
    omega_.emplace_back(g, rels);
  }

  for (int n = 0; n < m; ++n) {
    AbMap dn{&omega_[n], &omega_[n + 1], Mat(gens_[n].size(), Row(gens_[n + 1].size(), 0))};
    for (size_t i = 0; i < gens_[n].size(); ++i) {
      const Gen& gen = gens_[n][i];
      const Expo& mu = A_->basis()[gen.mu];
      for (int k = 0; k < m; ++k) {
        if (mu[k] % p == 0) continue;
        auto [sgn, K] = insert_index(k, gen.K);
        if (sgn == 0) continue;
        Expo mono = mu;
        mono[k] -= 1;
        int idx = A_->basis_index(mono);
        if (idx < 0) throw std::logic_error("divisor of basis monomial not basis");
        dn.M[i][gen_index(n + 1, idx, K)] += sgn * (mu[k] % p);
      }
    }
    d_.push_back(std::move(dn));
  }
}

const FinAb& KaehlerComplex::omega(int n) const {
  if (n < 0 || n > top_degree()) throw std::out_of_range("omega degree");
  return omega_[n];
}

const std::vector<KaehlerComplex::Gen>& KaehlerComplex::gens(int n) const { return gens_[n]; }

int KaehlerComplex::gen_index(int n, int mu, const std::vector<int>& K) const {
  auto it = index_[n].find({mu, K});
  if (it == index_[n].end()) throw std::out_of_range("kaehler generator");
  return it->second;
}

AbMap KaehlerComplex::d(int n) const {
  if (n < 0) throw std::out_of_range("d degree");
  if (n >= top_degree()) return zero_map(omega_[top_degree()], omega_[top_degree()]);
  return d_[n];
}

Row KaehlerComplex::mult_by(int n, const AlgElem& f, const Row& w) const {
  int g = static_cast<int>(gens_[n].size());
  Row out(g, 0);
  const auto& B = A_->basis();
  for (int i = 0; i < g; ++i) {
    if (w[i] == 0) continue;
    const Gen& gen = gens_[n][i];
    for (auto& [j, c] : f.coeffs()) {
      int idx = A_->basis_index(expo_mul(B[j], B[gen.mu]));
      if (idx < 0) continue;
      out[gen_index(n, idx, gen.K)] += w[i] * c;
    }
  }
  return out;
}

Row KaehlerComplex::wedge(int n1, const Row& w1, int n2, const Row& w2) const {
  int n = n1 + n2;
  if (n > top_degree()) return Row(0);
  Row out(gens_[n].size(), 0);
  const auto& B = A_->basis();
  for (size_t i = 0; i < gens_[n1].size(); ++i) {
    if (w1[i] == 0) continue;
    for (size_t j = 0; j < gens_[n2].size(); ++j) {
      if (w2[j] == 0) continue;
      const Gen& a = gens_[n1][i];
      const Gen& b = gens_[n2][j];
      bool disjoint = true;
      for (int k : a.K)
        if (std::binary_search(b.K.begin(), b.K.end(), k)) disjoint = false;
      if (!disjoint) continue;
      int idx = A_->basis_index(expo_mul(B[a.mu], B[b.mu]));
      if (idx < 0) continue;
      std::vector<int> K = a.K;
      K.insert(K.end(), b.K.begin(), b.K.end());
      std::sort(K.begin(), K.end());
      out[gen_index(n, idx, K)] += Int(merge_sign(a.K, b.K)) * w1[i] * w2[j];
    }
  }
  return out;
}

Row KaehlerComplex::encode_dmono(int n, int mu, const std::vector<int>& K) const {
  Row r(gens_[n].size(), 0);
  r[gen_index(n, mu, K)] = 1;
  return r;
}

Row KaehlerComplex::encode_fdg(const AlgElem& f, const std::vector<AlgElem>& gs) const {
  int n = static_cast<int>(gs.size());
  if (n > top_degree()) throw std::invalid_argument("form degree above top");
  // Start with f as a 0-form row, wedge in each dg.
  Row acc(gens_[0].size(), 0);
  for (auto& [j, c] : f.coeffs()) acc[gen_index(0, j, {})] = c;
  int deg = 0;
  for (const auto& gel : gs) {
    // dg as a 1-form row.
    Row dg(gens_[1].size(), 0);
    const auto& B = A_->basis();
    int p = A_->p();
    for (auto& [j, c] : gel.coeffs()) {
      const Expo& mu = B[j];
      for (int k = 0; k < A_->nvars(); ++k) {
        if (mu[k] % p == 0) continue;
        Expo mono = mu;
        mono[k] -= 1;
        int idx = A_->basis_index(mono);
        if (idx < 0) continue;
        dg[gen_index(1, idx, {k})] += Int(c) * (mu[k] % p);
      }
    }
    acc = wedge(deg, acc, 1, dg);
    deg += 1;
  }
  return acc;
}

Row KaehlerComplex::cartier_inverse_gen(int n, int g) const {
  const Gen& gen = gens_[n][g];
  const Expo& mu = A_->basis()[gen.mu];
  int p = A_->p();
  Expo target = expo_pow(mu, p);
  for (int k : gen.K) target[k] += p - 1;
  Row out(gens_[n].size(), 0);
  int idx = A_->basis_index(target);
  if (idx >= 0) out[gen_index(n, idx, gen.K)] = 1;
  return out;
}

}  // namespace hwlab
