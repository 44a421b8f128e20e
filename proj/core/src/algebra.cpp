#include "hwlab/algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hwlab {

MonomialAlgebra::MonomialAlgebra(int p, std::vector<std::string> vars, MonomialIdeal ideal)
    : p_(p), nvars_(static_cast<int>(vars.size())), vars_(std::move(vars)), ideal_(std::move(ideal)) {
  if (p_ < 2) throw std::invalid_argument("p must be a prime >= 2");
  for (int q = 2; q * q <= p_; ++q)
    if (p_ % q == 0) throw std::invalid_argument("p must be prime");
  if (ideal_.nvars() != nvars_) throw std::invalid_argument("ideal arity mismatch");
  {
    std::set<std::string> seen;
    for (const auto& v : vars_)
      if (!seen.insert(v).second)
        throw std::invalid_argument("DuplicateGenerator: variable '" + v + "' repeated");
  }

  pure_.assign(nvars_, -1);
  for (const auto& g : ideal_.gens()) {
    int nz = -1;
    bool pure = true;
    for (int k = 0; k < nvars_; ++k)
      if (g[k] > 0) {
        if (nz >= 0) pure = false;
        nz = k;
      }
    if (pure && nz >= 0 && (pure_[nz] < 0 || g[nz] < pure_[nz])) pure_[nz] = g[nz];
  }
  for (int k = 0; k < nvars_; ++k)
    if (pure_[k] < 0)
      throw std::invalid_argument("NotArtinian: no pure power of variable '" + vars_[k] +
                                  "' lies in the ideal");

  // Enumerate standard monomials inside the box prod [0, pure_k).
  std::vector<int> cur(nvars_, 0);
  while (true) {
    Expo m(cur.begin(), cur.end());
    if (!ideal_.contains(m)) basis_.push_back(m);
    int k = 0;
    while (k < nvars_ && cur[k] == pure_[k] - 1) cur[k++] = 0;
    if (k == nvars_) break;
    ++cur[k];
  }
  std::sort(basis_.begin(), basis_.end(), expo_less);
  for (int i = 0; i < static_cast<int>(basis_.size()); ++i) index_[basis_[i]] = i;
}

int MonomialAlgebra::basis_index(const Expo& m) const {
  auto it = index_.find(m);
  if (it != index_.end()) return it->second;
  if (!ideal_.contains(m)) throw std::logic_error("monomial outside box but not in ideal");
  return -1;
}

int MonomialAlgebra::nil_degree() const {
  int best = 0;
  for (const auto& m : basis_) best = std::max(best, expo_total(m));
  return best + 1;
}

std::vector<Expo> MonomialAlgebra::maximal_ideal_monomials() const {
  std::vector<Expo> out;
  for (const auto& m : basis_)
    if (expo_total(m) > 0) out.push_back(m);
  return out;
}

std::string MonomialAlgebra::describe() const {
  std::ostringstream os;
  os << "F_" << p_ << "[";
  for (int k = 0; k < nvars_; ++k) os << (k ? "," : "") << vars_[k];
  os << "]/(";
  bool first = true;
  for (const auto& g : ideal_.gens()) {
    if (!first) os << ",";
    first = false;
    bool any = false;
    for (int k = 0; k < nvars_; ++k)
      if (g[k] > 0) {
        if (any) os << "*";
        any = true;
        os << vars_[k];
        if (g[k] > 1) os << "^" << g[k];
      }
    if (!any) os << "1";
  }
  os << ")";
  return os.str();
}

AlgElem AlgElem::monomial(const MonomialAlgebra* A, const Expo& m, int c) {
  AlgElem e(A);
  int idx = A->basis_index(m);
  if (idx >= 0) e.set_coeff(idx, c);
  return e;
}

AlgElem AlgElem::scalar(const MonomialAlgebra* A, int c) {
  AlgElem e(A);
  e.set_coeff(0, c);
  return e;
}

int AlgElem::coeff(int basis_idx) const {
  auto it = c_.find(basis_idx);
  return it == c_.end() ? 0 : it->second;
}

void AlgElem::set_coeff(int basis_idx, int c) {
  c = static_cast<int>(modnorm64(c, A_->p()));
  if (c == 0)
    c_.erase(basis_idx);
  else
    c_[basis_idx] = c;
}

AlgElem AlgElem::operator+(const AlgElem& o) const {
  AlgElem r = *this;
  for (auto& [i, c] : o.c_) r.set_coeff(i, r.coeff(i) + c);
  return r;
}

AlgElem AlgElem::operator-(const AlgElem& o) const {
  AlgElem r = *this;
  for (auto& [i, c] : o.c_) r.set_coeff(i, r.coeff(i) - c);
  return r;
}

AlgElem AlgElem::operator-() const {
  AlgElem r(A_);
  for (auto& [i, c] : c_) r.set_coeff(i, -c);
  return r;
}

AlgElem AlgElem::operator*(const AlgElem& o) const {
  AlgElem r(A_);
  const auto& B = A_->basis();
  for (auto& [i, ci] : c_)
    for (auto& [j, cj] : o.c_) {
      int k = A_->basis_index(expo_mul(B[i], B[j]));
      if (k >= 0) r.set_coeff(k, r.coeff(k) + ci * cj);
    }
  return r;
}

AlgElem AlgElem::scaled(int c) const {
  AlgElem r(A_);
  for (auto& [i, ci] : c_) r.set_coeff(i, ci * c);
  return r;
}

AlgElem AlgElem::pow(int e) const {
  AlgElem r = AlgElem::scalar(A_, 1);
  AlgElem b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool AlgElem::is_unit() const { return coeff(0) != 0; }

AlgElem AlgElem::inverse() const {
  if (!is_unit()) throw std::domain_error("inverse of non-unit");
  int c0 = coeff(0);
  int c0inv = static_cast<int>(modinv64(c0, A_->p()));
  // u = c0(1 + w) with w nilpotent: u^-1 = c0^-1 * sum (-w)^k.
  AlgElem w = augmentation_part().scaled(c0inv);
  AlgElem acc = AlgElem::scalar(A_, 1);
  AlgElem term = AlgElem::scalar(A_, 1);
  for (int k = 0; k < A_->nil_degree(); ++k) {
    term = (-term) * w;
    if (term.is_zero()) break;
    acc = acc + term;
  }
  return acc.scaled(c0inv);
}

AlgElem AlgElem::augmentation_part() const {
  AlgElem r = *this;
  r.set_coeff(0, 0);
  return r;
}

std::string AlgElem::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [i, c] : c_) {
    if (!first) os << " + ";
    first = false;
    const Expo& m = A_->basis()[i];
    if (c != 1 || expo_total(m) == 0) os << c;
    bool needstar = (c != 1);
    for (int k = 0; k < A_->nvars(); ++k)
      if (m[k] > 0) {
        if (needstar || k > 0) os << "*";
        needstar = false;
        os << A_->vars()[k];
        if (m[k] > 1) os << "^" << m[k];
      }
  }
  return os.str();
}

std::vector<AlgElem> all_elements(const MonomialAlgebra& A, std::int64_t guard) {
  Int total = ipow(Int(A.p()), static_cast<unsigned>(A.dim()));
  if (total > guard) throw std::domain_error("TooLargeToVerify: element enumeration over guard");
  std::vector<AlgElem> out;
  std::vector<int> cur(A.dim(), 0);
  while (true) {
    AlgElem e(&A);
    for (int i = 0; i < A.dim(); ++i) e.set_coeff(i, cur[i]);
    out.push_back(e);
    int k = 0;
    while (k < A.dim() && cur[k] == A.p() - 1) cur[k++] = 0;
    if (k == A.dim()) break;
    ++cur[k];
  }
  return out;
}

std::vector<AlgElem> all_units(const MonomialAlgebra& A, std::int64_t guard) {
  std::vector<AlgElem> out;
  for (auto& e : all_elements(A, guard))
    if (e.is_unit()) out.push_back(e);
  return out;
}

AlgElem random_element(const MonomialAlgebra& A, Rng& rng) {
  AlgElem e(&A);
  for (int i = 0; i < A.dim(); ++i) e.set_coeff(i, static_cast<int>(rng.below(A.p())));
  return e;
}

AlgElem random_unit(const MonomialAlgebra& A, Rng& rng) {
  AlgElem e = random_element(A, rng);
  e.set_coeff(0, 1 + static_cast<int>(rng.below(A.p() - 1)));
  return e;
}

MonomialAlgebra truncated_poly(int p, int s) {
  return MonomialAlgebra(p, {"t"}, MonomialIdeal(1, {{s}}));
}

MonomialAlgebra plane_algebra(int p, int a, int b) {
  return MonomialAlgebra(p, {"x", "y"}, MonomialIdeal(2, {{a, 0}, {0, b}}));
}

MonomialAlgebra point_algebra(int p) { return MonomialAlgebra(p, {}, MonomialIdeal(0, {})); }

}  // namespace hwlab
