#include "hwlab/witt.hpp"

#include <algorithm>
#include <stdexcept>

namespace hwlab {

ZAlgElem ZAlgElem::scalar(const MonomialAlgebra* A, Int c) {
  ZAlgElem e(A);
  if (c != 0) e.c_[0] = std::move(c);
  return e;
}

ZAlgElem ZAlgElem::lift(const AlgElem& e) {
  ZAlgElem z(e.alg());
  for (auto& [i, c] : e.coeffs()) z.c_[i] = c;
  return z;
}

void ZAlgElem::add_coeff(int idx, const Int& c) {
  Int& slot = c_[idx];
  slot += c;
  if (slot == 0) c_.erase(idx);
}

ZAlgElem ZAlgElem::operator+(const ZAlgElem& o) const {
  ZAlgElem r = *this;
  for (auto& [i, c] : o.c_) r.add_coeff(i, c);
  return r;
}

ZAlgElem ZAlgElem::operator-(const ZAlgElem& o) const {
  ZAlgElem r = *this;
  for (auto& [i, c] : o.c_) r.add_coeff(i, -c);
  return r;
}

ZAlgElem ZAlgElem::operator*(const ZAlgElem& o) const {
  ZAlgElem r(A_);
  const auto& B = A_->basis();
  for (auto& [i, ci] : c_)
    for (auto& [j, cj] : o.c_) {
      int k = A_->basis_index(expo_mul(B[i], B[j]));
      if (k >= 0) r.add_coeff(k, ci * cj);
    }
  return r;
}

ZAlgElem ZAlgElem::scaled(const Int& c) const {
  ZAlgElem r(A_);
  if (c == 0) return r;
  for (auto& [i, ci] : c_) r.c_[i] = ci * c;
  return r;
}

ZAlgElem ZAlgElem::pow(unsigned e) const {
  ZAlgElem r = ZAlgElem::scalar(A_, 1);
  ZAlgElem b = *this;
  while (e) {
    if (e & 1u) r = r * b;
    b = b * b;
    e >>= 1u;
  }
  return r;
}

AlgElem ZAlgElem::mod_p() const {
  AlgElem r(A_);
  for (auto& [i, c] : c_) r.set_coeff(i, static_cast<int>(modnorm(c, A_->p())));
  return r;
}

bool ZAlgElem::divisible_by(const Int& m) const {
  for (auto& [i, c] : c_)
    if (c % m != 0) return false;
  return true;
}

ZAlgElem ZAlgElem::divexact_by(const Int& m) const {
  ZAlgElem r(A_);
  for (auto& [i, c] : c_) r.c_[i] = divexact(c, m);
  return r;
}

WittRing::WittRing(const MonomialAlgebra& A, int r, std::shared_ptr<WittUniv> univ)
    : A_(&A), r_(r), univ_(std::move(univ)) {
  if (r_ < 1) throw std::invalid_argument("Witt length must be >= 1");
  if (univ_->p() != A_->p()) throw std::invalid_argument("LevelMismatch: prime of universal table");
  // Build the presentation.
  int d = A_->dim();
  int g = r_ * d;
  Mat rels;
  for (int i = 0; i < r_; ++i)
    for (int mu = 0; mu < d; ++mu) {
      Row row(g, 0);
      row[gen_id(i, mu)] = A_->p();
      if (i + 1 < r_) {
        int mp = A_->basis_index(expo_pow(A_->basis()[mu], A_->p()));
        if (mp >= 0) row[gen_id(i + 1, mp)] -= 1;
      }
      rels.push_back(std::move(row));
    }
  grp_ = std::make_shared<FinAb>(g, rels);
}

AlgElem WittRing::embed_int(const Int& c) const {
  return AlgElem::scalar(A_, static_cast<int>(modnorm(c, A_->p())));
}

WittRing::Vec WittRing::zero() const { return Vec(r_, AlgElem(A_)); }

WittRing::Vec WittRing::one() const { return teich(AlgElem::scalar(A_, 1)); }

WittRing::Vec WittRing::teich(const AlgElem& a) const {
  Vec v(r_, AlgElem(A_));
  v[0] = a;
  return v;
}

WittRing::Vec WittRing::add(const Vec& a, const Vec& b) const {
  if (static_cast<int>(a.size()) != r_ || static_cast<int>(b.size()) != r_)
    throw std::invalid_argument("LevelMismatch: Witt vector length");
  Vec out(r_, AlgElem(A_));
  std::function<AlgElem(const Int&)> embed = [this](const Int& c) { return embed_int(c); };
  for (int n = 0; n < r_; ++n) {
    std::vector<AlgElem> args(a.begin(), a.begin() + n + 1);
    args.insert(args.end(), b.begin(), b.begin() + n + 1);
    out[n] = univ_->sum(n).eval<AlgElem>(args, embed);
  }
  return out;
}

WittRing::Vec WittRing::neg(const Vec& a) const {
  if (static_cast<int>(a.size()) != r_)
    throw std::invalid_argument("LevelMismatch: Witt vector length");
  Vec out(r_, AlgElem(A_));
  std::function<AlgElem(const Int&)> embed = [this](const Int& c) { return embed_int(c); };
  for (int n = 0; n < r_; ++n) {
    std::vector<AlgElem> args(a.begin(), a.begin() + n + 1);
    out[n] = univ_->neg(n).eval<AlgElem>(args, embed);
  }
  return out;
}

WittRing::Vec WittRing::sub(const Vec& a, const Vec& b) const { return add(a, neg(b)); }

WittRing::Vec WittRing::mul(const Vec& a, const Vec& b) const {
  if (static_cast<int>(a.size()) != r_ || static_cast<int>(b.size()) != r_)
    throw std::invalid_argument("LevelMismatch: Witt vector length");
  Vec out(r_, AlgElem(A_));
  std::function<AlgElem(const Int&)> embed = [this](const Int& c) { return embed_int(c); };
  for (int n = 0; n < r_; ++n) {
    std::vector<AlgElem> args(a.begin(), a.begin() + n + 1);
    args.insert(args.end(), b.begin(), b.begin() + n + 1);
    out[n] = univ_->prod(n).eval<AlgElem>(args, embed);
  }
  return out;
}

WittRing::Vec WittRing::scalar_mult(Int c, const Vec& a) const {
  Vec base = a;
  if (c < 0) {
    base = neg(base);
    c = -c;
  }
  Vec acc = zero();
  while (c > 0) {
    if ((c & 1) != 0) acc = add(acc, base);
    c >>= 1;
    if (c > 0) base = add(base, base);
  }
  return acc;
}

WittRing::Vec WittRing::pow(const Vec& a, unsigned e) const {
  Vec acc = one();
  Vec base = a;
  while (e) {
    if (e & 1u) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1u;
  }
  return acc;
}

WittRing::Vec WittRing::V(const Vec& lower) const {
  Vec out(r_, AlgElem(A_));
  for (int i = 0; i + 1 < r_ && i < static_cast<int>(lower.size()); ++i) out[i + 1] = lower[i];
  return out;
}

WittRing::Vec WittRing::F(const Vec& a) const {
  if (static_cast<int>(a.size()) != r_)
    throw std::invalid_argument("LevelMismatch: Witt vector length");
  Vec out;  // empty (= W_0) when r = 1
  for (int i = 0; i + 1 < r_; ++i) out.push_back(a[i].frobenius());
  return out;
}

WittRing::Vec WittRing::R(const Vec& a) const {
  if (static_cast<int>(a.size()) != r_)
    throw std::invalid_argument("LevelMismatch: Witt vector length");
  return Vec(a.begin(), a.end() - 1);
}

WittRing::Vec WittRing::random_vec(Rng& rng) const {
  Vec v;
  for (int i = 0; i < r_; ++i) v.push_back(random_element(*A_, rng));
  return v;
}

bool WittRing::in_ideal(const Vec& a, const MonomialIdeal& J) const {
  for (const auto& coord : a)
    for (auto& [i, c] : coord.coeffs())
      if (!J.contains(A_->basis()[i])) return false;
  return true;
}

WittRing::Vec WittRing::random_ideal_vec(const MonomialIdeal& J, Rng& rng) const {
  Vec v(r_, AlgElem(A_));
  for (int i = 0; i < r_; ++i)
    for (int mu = 0; mu < A_->dim(); ++mu)
      if (J.contains(A_->basis()[mu]))
        v[i].set_coeff(mu, static_cast<int>(rng.below(A_->p())));
  return v;
}

std::vector<ZAlgElem> WittRing::ghost(const std::vector<ZAlgElem>& lift) const {
  std::vector<ZAlgElem> out;
  const MonomialAlgebra* A = lift.empty() ? A_ : lift[0].alg();
  for (size_t n = 0; n < lift.size(); ++n) {
    ZAlgElem w = ZAlgElem::scalar(A, 0);
    for (size_t i = 0; i <= n; ++i)
      w = w + lift[i]
                  .pow(static_cast<unsigned>(ipow64(A->p(), static_cast<unsigned>(n - i))))
                  .scaled(ipow(Int(A->p()), static_cast<unsigned>(i)));
    out.push_back(w);
  }
  return out;
}

std::vector<ZAlgElem> WittRing::lift_vec(const Vec& a) {
  std::vector<ZAlgElem> out;
  for (const auto& c : a) out.push_back(ZAlgElem::lift(c));
  return out;
}

Row WittRing::coords(const Vec& w) const {
  Row x(grp_->ngens(), 0);
  Vec cur = w;
  for (int i = 0; i < r_; ++i) {
    // Peel coordinate i term by term with c * V^i([mu]).
    auto terms = cur[i].coeffs();  // copy: cur changes below
    for (auto& [mu, c] : terms) {
      x[gen_id(i, mu)] += c;
      Vec vi = teich(AlgElem::monomial(A_, A_->basis()[mu]));
      for (int k = 0; k < i; ++k) vi = V(vi);
      cur = sub(cur, scalar_mult(c, vi));
    }
  }
  for (const auto& coord : cur)
    if (!coord.is_zero()) throw std::logic_error("greedy Witt expression failed to terminate");
  return grp_->normal_form(x);
}

WittRing::Vec WittRing::from_coords(const Row& x) const {
  Vec acc = zero();
  for (int i = 0; i < r_; ++i)
    for (int mu = 0; mu < A_->dim(); ++mu) {
      Int c = x[gen_id(i, mu)];
      if (c == 0) continue;
      Vec vi = teich(AlgElem::monomial(A_, A_->basis()[mu]));
      for (int k = 0; k < i; ++k) vi = V(vi);
      acc = add(acc, scalar_mult(c, vi));
    }
  return acc;
}

Row WittRing::mul_coords(const Row& x, const Row& y) const {
  return coords(mul(from_coords(x), from_coords(y)));
}

Subgroup WittRing::ideal_subgroup(const MonomialIdeal& J) const {
  Mat rows;
  for (int i = 0; i < r_; ++i)
    for (int mu = 0; mu < A_->dim(); ++mu)
      if (J.contains(A_->basis()[mu])) {
        Row row(grp_->ngens(), 0);
        row[gen_id(i, mu)] = 1;
        rows.push_back(std::move(row));
      }
  return span_subgroup(*grp_, rows);
}

Subgroup WittRing::product_subgroup(const Subgroup& S, const Subgroup& T) const {
  Mat rows;
  for (const auto& a : S.lat)
    for (const auto& b : T.lat) rows.push_back(coords(mul(from_coords(a), from_coords(b))));
  return span_subgroup(*grp_, rows);
}

AbMap witt_map_R(const WittRing& from, const WittRing& to) {
  if (!from.alg().same_as(to.alg()) || to.r() != from.r() - 1)
    throw std::invalid_argument("LevelMismatch: witt_map_R");
  AbMap f{&from.pres(), &to.pres(), Mat(from.pres().ngens(), Row(to.pres().ngens(), 0))};
  for (int g = 0; g < from.pres().ngens(); ++g) {
    int i = from.gen_level(g), mu = from.gen_mono(g);
    if (i < to.r()) f.M[g][to.gen_id(i, mu)] = 1;
  }
  return f;
}

AbMap witt_map_F(const WittRing& from, const WittRing& to) {
  if (!from.alg().same_as(to.alg()) || to.r() != from.r() - 1)
    throw std::invalid_argument("LevelMismatch: witt_map_F");
  const MonomialAlgebra& A = from.alg();
  AbMap f{&from.pres(), &to.pres(), Mat(from.pres().ngens(), Row(to.pres().ngens(), 0))};
  for (int g = 0; g < from.pres().ngens(); ++g) {
    int i = from.gen_level(g), mu = from.gen_mono(g);
    if (i == 0) {
      int mp = A.basis_index(expo_pow(A.basis()[mu], A.p()));
      if (mp >= 0) f.M[g][to.gen_id(0, mp)] = 1;
    } else if (i - 1 < to.r()) {
      f.M[g][to.gen_id(i - 1, mu)] = A.p();
    }
  }
  return f;
}

AbMap witt_map_V(const WittRing& from, const WittRing& to) {
  if (!from.alg().same_as(to.alg()) || to.r() != from.r() + 1)
    throw std::invalid_argument("LevelMismatch: witt_map_V");
  AbMap f{&from.pres(), &to.pres(), Mat(from.pres().ngens(), Row(to.pres().ngens(), 0))};
  for (int g = 0; g < from.pres().ngens(); ++g) {
    int i = from.gen_level(g), mu = from.gen_mono(g);
    if (i + 1 < to.r()) f.M[g][to.gen_id(i + 1, mu)] = 1;
  }
  return f;
}

BigWittUnits::BigWittUnits(int p, int s) : p_(p), s_(s) {
  if (s_ < 2) throw std::invalid_argument("BigWittUnits needs s >= 2");
  A_ = std::make_unique<MonomialAlgebra>(truncated_poly(p, s));
  for (int d = 1; d <= s_ - 1; ++d)
    if (d % p_ != 0) {
      ds_.push_back(d);
      int m = 0;
      std::int64_t v = d;
      while (v <= s_ - 1) {
        ++m;
        v *= p_;
      }
      md_.push_back(m);
    }
  // Enumerate all products of generators; certify the decomposition is bijective.
  std::vector<Int> bounds;
  Int total = 1;
  for (int m : md_) {
    bounds.push_back(ipow(Int(p_), static_cast<unsigned>(m)));
    total *= bounds.back();
  }
  Int expected = ipow(Int(p_), static_cast<unsigned>(s_ - 1));
  if (total != expected)
    throw std::logic_error("big Witt order bookkeeping failed");
  std::vector<Int> e(ds_.size(), 0);
  while (true) {
    AlgElem u = unit_from_exponents(e);
    auto k = key(u);
    if (table_.count(k)) throw std::logic_error("big Witt decomposition not injective");
    table_[k] = e;
    size_t i = 0;
    while (i < e.size() && e[i] == bounds[i] - 1) e[i++] = 0;
    if (i == e.size()) break;
    ++e[i];
  }
  certified_ = (Int(static_cast<std::int64_t>(table_.size())) == expected);
}

int BigWittUnits::md(int d) const {
  for (size_t i = 0; i < ds_.size(); ++i)
    if (ds_[i] == d) return md_[i];
  throw std::out_of_range("d not coprime to p or out of range");
}

Int BigWittUnits::group_order() const { return ipow(Int(p_), static_cast<unsigned>(s_ - 1)); }

AlgElem BigWittUnits::unit_from_exponents(const std::vector<Int>& e) const {
  AlgElem acc = AlgElem::scalar(A_.get(), 1);
  for (size_t i = 0; i < ds_.size(); ++i) {
    // (1 - t^d)^{e_i}
    AlgElem base = AlgElem::scalar(A_.get(), 1) - AlgElem::monomial(A_.get(), {ds_[i]});
    Int ei = modnorm(e[i], ipow(Int(p_), static_cast<unsigned>(md_[i])));
    unsigned ex = static_cast<unsigned>(ei);
    AlgElem pw = AlgElem::scalar(A_.get(), 1);
    AlgElem b = base;
    while (ex) {
      if (ex & 1u) pw = pw * b;
      b = b * b;
      ex >>= 1u;
    }
    acc = acc * pw;
  }
  return acc;
}

std::vector<Int> BigWittUnits::dlog(const AlgElem& u) const {
  auto it = table_.find(key(u));
  if (it == table_.end()) throw std::domain_error("dlog: not a principal unit of this truncation");
  return it->second;
}

std::vector<int> BigWittUnits::key(const AlgElem& u) const {
  std::vector<int> k(A_->dim(), 0);
  for (auto& [i, c] : u.coeffs()) k[i] = c;
  return k;
}

}  // namespace hwlab
