#include "hwlab/drw.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hwlab {

DrwEngine::DrwEngine(int p, int nvars) : p_(p), nvars_(nvars) {
  if (p < 2 || nvars < 0) throw std::invalid_argument("DrwEngine parameters");
}

int DrwEngine::term_degree(const TermKey& t) {
  int d = 0;
  for (const auto& op : t)
    if (op.kind == LayerOp::Edge || op.kind == LayerOp::DV) ++d;
  return d;
}

int DrwEngine::leaf_level(const TermKey& t, int r) const {
  int level = r;
  for (const auto& op : t)
    if (op.kind == LayerOp::V || op.kind == LayerOp::DV) level -= op.i;
  return level;
}

void DrwEngine::validate_term(const TermKey& t, int r) const {
  if (static_cast<int>(t.size()) != nvars_) throw std::invalid_argument("term arity");
  int level = r;  // walk outermost -> innermost
  for (int v = nvars_ - 1; v >= 0; --v) {
    const LayerOp& op = t[v];
    switch (op.kind) {
      case LayerOp::Int:
        if (op.j < 0 || op.i != 0) throw std::invalid_argument("Int layer");
        break;
      case LayerOp::Edge:
        if (op.j < 1 || op.i != 0) throw std::invalid_argument("Edge layer");
        break;
      case LayerOp::V:
      case LayerOp::DV:
        if (op.i < 1 || op.i > level - 1) throw std::invalid_argument("V/DV level out of range");
        if (op.j < 1 || op.j % p_ == 0) throw std::invalid_argument("V/DV exponent not p-coprime");
        level -= op.i;
        break;
      default:
        throw std::invalid_argument("unknown layer kind");
    }
  }
  if (level < 1) throw std::invalid_argument("leaf level below 1");
}

DrwElem DrwEngine::normalize(const DrwElem& raw, int r) const {
  DrwElem out;
  for (const auto& [t, c] : raw) {
    std::int64_t m = ipow64(p_, static_cast<unsigned>(leaf_level(t, r)));
    std::int64_t cc = modnorm64(c, m);
    if (cc != 0) out[t] = cc;
  }
  return out;
}

DrwElem DrwEngine::add_raw(DrwElem a, const DrwElem& b) const {
  for (const auto& [t, c] : b) {
    auto& slot = a[t];
    slot += c;
    if (slot == 0) a.erase(t);
  }
  return a;
}

DrwElem DrwEngine::scale_raw(std::int64_t c, const DrwElem& a) const {
  DrwElem out;
  if (c == 0) return out;
  for (const auto& [t, cc] : a) out[t] = cc * c;
  return out;
}

DrwElem DrwEngine::add(const DrwElem& a, const DrwElem& b, int r) const {
  return normalize(add_raw(a, b), r);
}

DrwElem DrwEngine::sub(const DrwElem& a, const DrwElem& b, int r) const {
  return normalize(add_raw(a, scale_raw(-1, b)), r);
}

DrwElem DrwEngine::scale(const Int& c, const DrwElem& a, int r) const {
  Int cr = modnorm(c, ipow(Int(p_), static_cast<unsigned>(r)));
  return normalize(scale_raw(static_cast<std::int64_t>(cr), a), r);
}

DrwElem DrwEngine::prefixed(const LayerOp& op, const DrwElem& inner) {
  DrwElem out;
  for (const auto& [t, c] : inner) {
    TermKey k = t;
    k.push_back(op);
    out[k] = c;
  }
  return out;
}

// ---------- d ----------

DrwElem DrwEngine::d(const DrwElem& a, int r) const { return normalize(d_in(a, nvars_, r), r); }

DrwElem DrwEngine::d_in(const DrwElem& a, int nl, int r) const {
  const std::int64_t m = ipow64(p_, static_cast<unsigned>(r));
  DrwElem out;
  for (const auto& [t, c] : a)
    out = add_raw(out, scale_raw(modnorm64(c, m), d_term(t, nl, r)));
  return out;
}

DrwElem DrwEngine::d_term(const TermKey& t, int nl, int r) const {
  if (nl == 0) return {};  // d kills W_r(F_p)
  LayerOp op = t[nl - 1];
  TermKey inner(t.begin(), t.begin() + (nl - 1));
  DrwElem ie{{inner, 1}};
  DrwElem out;
  switch (op.kind) {
    case LayerOp::Int: {
      out = prefixed(op, d_in(ie, nl - 1, r));
      if (op.j >= 1) {
        int sgn = (term_degree(inner) % 2 == 0) ? 1 : -1;
        out = add_raw(out, scale_raw(sgn * op.j, prefixed({LayerOp::Edge, 0, op.j}, ie)));
      }
      return out;
    }
    case LayerOp::Edge:
      return prefixed(op, d_in(ie, nl - 1, r));
    case LayerOp::V: {
      TermKey k = t;
      k[nl - 1].kind = LayerOp::DV;
      return DrwElem{{k, 1}};
    }
    case LayerOp::DV:
      return {};
  }
  return {};
}

// ---------- R ----------

DrwElem DrwEngine::R(const DrwElem& a, int r) const { return normalize(R_in(a, nvars_, r), r - 1); }

DrwElem DrwEngine::R_in(const DrwElem& a, int /*nl*/, int r) const {
  DrwElem out;
  for (const auto& [t, c] : a) {
    int level = r - 1;
    bool alive = true;
    for (int v = nvars_ - 1; v >= 0 && alive; --v) {
      const LayerOp& op = t[v];
      if (op.kind == LayerOp::V || op.kind == LayerOp::DV) {
        if (op.i > level - 1) alive = false;
        level -= op.i;
      }
    }
    if (alive && level >= 1) out[t] += c;
  }
  return out;
}

// ---------- F ----------

DrwElem DrwEngine::F(const DrwElem& a, int r) const {
  if (r < 2) throw std::invalid_argument("LevelMismatch: F needs r >= 2");
  return normalize(F_in(a, nvars_, r), r - 1);
}

DrwElem DrwEngine::F_in(const DrwElem& a, int nl, int r) const {
  const std::int64_t m = ipow64(p_, static_cast<unsigned>(r));
  DrwElem out;
  for (const auto& [t, c0] : a) {
    const std::int64_t c = modnorm64(c0, m);
    if (nl == 0) {  // leaf: reduction Z/p^r -> Z/p^{r-1}
      out = add_raw(out, DrwElem{{t, c}});
      continue;
    }
    LayerOp op = t[nl - 1];
    TermKey inner(t.begin(), t.begin() + (nl - 1));
    DrwElem ie{{inner, 1}};
    DrwElem piece;
    switch (op.kind) {
      case LayerOp::Int:
        piece = prefixed({LayerOp::Int, 0, p_ * op.j}, F_in(ie, nl - 1, r));
        break;
      case LayerOp::Edge:
        piece = prefixed({LayerOp::Edge, 0, p_ * op.j}, F_in(ie, nl - 1, r));
        break;
      case LayerOp::V:
        if (op.i >= 2)
          piece = scale_raw(p_, prefixed({LayerOp::V, op.i - 1, op.j}, ie));
        else
          piece = scale_raw(p_, prefixed({LayerOp::Int, 0, op.j}, ie));
        break;
      case LayerOp::DV:
        if (op.i >= 2) {
          piece = prefixed({LayerOp::DV, op.i - 1, op.j}, ie);
        } else {
          // F dV = d on the inner part b[X]^j at level r-1.
          TermKey asInt = t;
          asInt[nl - 1] = {LayerOp::Int, 0, op.j};
          piece = d_term(asInt, nl, r - 1);
        }
        break;
    }
    out = add_raw(out, scale_raw(c, piece));
  }
  return out;
}

// ---------- V ----------

DrwElem DrwEngine::V(const DrwElem& a, int r) const { return normalize(V_in(a, nvars_, r), r + 1); }

DrwElem DrwEngine::V_in(const DrwElem& a, int nl, int r) const {
  const std::int64_t m = ipow64(p_, static_cast<unsigned>(r));
  DrwElem out;
  for (const auto& [t, c0] : a) {
    const std::int64_t c = modnorm64(c0, m);
    if (nl == 0) {  // leaf: multiplication by p
      out = add_raw(out, DrwElem{{t, p_ * c}});
      continue;
    }
    LayerOp op = t[nl - 1];
    TermKey inner(t.begin(), t.begin() + (nl - 1));
    DrwElem ie{{inner, 1}};
    DrwElem piece;
    switch (op.kind) {
      case LayerOp::Int:
        piece = mkV(1, ie, op.j, nl, r);
        break;
      case LayerOp::Edge:
        piece = mkVE(1, ie, op.j, nl, r);
        break;
      case LayerOp::V:
        piece = prefixed({LayerOp::V, op.i + 1, op.j}, ie);
        break;
      case LayerOp::DV:
        piece = scale_raw(p_, prefixed({LayerOp::DV, op.i + 1, op.j}, ie));
        break;
    }
    out = add_raw(out, scale_raw(c, piece));
  }
  return out;
}

DrwElem DrwEngine::mkV(int i, const DrwElem& w, std::int64_t j, int nl, int r) const {
  if (w.empty()) return {};
  if (i == 0) return prefixed({LayerOp::Int, 0, j}, w);
  if (j == 0) {
    DrwElem inner = w;
    for (int k = 0; k < i; ++k) inner = V_in(inner, nl - 1, r + k);
    return prefixed({LayerOp::Int, 0, 0}, inner);
  }
  if (j % p_ == 0) return mkV(i - 1, V_in(w, nl - 1, r), j / p_, nl, r + 1);
  return normalize(prefixed({LayerOp::V, i, j}, w), r + i);
}

DrwElem DrwEngine::mkVE(int i, const DrwElem& z, std::int64_t l, int nl, int r) const {
  if (z.empty()) return {};
  if (i == 0) return prefixed({LayerOp::Edge, 0, l}, z);
  if (l % p_ == 0) return mkVE(i - 1, V_in(z, nl - 1, r), l / p_, nl, r + 1);
  // p coprime to l: V^i(z [X]^{l-1} d[X]) = (-1)^{deg z} l^{-1} (p^i dV^i(z[X]^l) - V^i(dz [X]^l))
  std::int64_t pw = ipow64(p_, static_cast<unsigned>(r + i));
  std::int64_t linv = modinv64(modnorm64(l, pw), pw);
  DrwElem out;
  for (const auto& [zt, zc] : z) {
    int sgn = (term_degree(zt) % 2 == 0) ? 1 : -1;
    DrwElem zte{{zt, 1}};
    DrwElem part = scale_raw(modnorm64(ipow64(p_, static_cast<unsigned>(i)), pw),
                             prefixed({LayerOp::DV, i, l}, zte));
    part = add_raw(part, scale_raw(-1, prefixed({LayerOp::V, i, l}, d_in(zte, nl - 1, r))));
    out = add_raw(out, scale_raw(modnorm64(sgn * zc % pw * linv % pw, pw), part));
  }
  return normalize(out, r + i);
}

// ---------- multiplication ----------

DrwElem DrwEngine::mul(const DrwElem& a, const DrwElem& b, int r) const {
  return normalize(mul_in(a, b, nvars_, r), r);
}

DrwElem DrwEngine::mul_in(const DrwElem& a, const DrwElem& b, int nl, int r) const {
  DrwElem out;
  const std::int64_t m = ipow64(p_, static_cast<unsigned>(r));
  for (const auto& [s, cs] : a)
    for (const auto& [t, ct] : b) {
      std::int64_t c = modnorm64(modnorm64(cs, m) * modnorm64(ct, m), m);
      out = add_raw(out, scale_raw(c, mul_term(s, t, nl, r)));
    }
  // Reduce eagerly so coefficients stay small through recursion.
  DrwElem red;
  for (const auto& [t, c] : out) {
    std::int64_t m = ipow64(p_, static_cast<unsigned>(leaf_level(t, r)));
    std::int64_t cc = modnorm64(c, m);
    if (cc != 0) red[t] = cc;
  }
  return red;
}

DrwElem DrwEngine::mul_term(const TermKey& s, const TermKey& t, int nl, int r) const {
  if (nl == 0) return DrwElem{{TermKey{}, 1}};
  LayerOp os = s[nl - 1], ot = t[nl - 1];
  TermKey si(s.begin(), s.begin() + (nl - 1));
  TermKey ti(t.begin(), t.begin() + (nl - 1));
  DrwElem se{{si, 1}}, te{{ti, 1}};

  // (Edge, Edge): the two d[X] factors wedge to zero.
  if (os.kind == LayerOp::Edge && ot.kind == LayerOp::Edge) return {};

  if (os.kind != LayerOp::V && os.kind != LayerOp::DV && ot.kind != LayerOp::V &&
      ot.kind != LayerOp::DV) {
    // plain layer x plain layer
    DrwElem inner = mul_in(se, te, nl - 1, r);
    if (os.kind == LayerOp::Int && ot.kind == LayerOp::Int)
      return prefixed({LayerOp::Int, 0, os.j + ot.j}, inner);
    if (os.kind == LayerOp::Int && ot.kind == LayerOp::Edge)
      return prefixed({LayerOp::Edge, 0, os.j + ot.j}, inner);
    // (Edge, Int): move the Int factor (degree of its full inner term) past d[X].
    int sgn = (term_degree(ti) % 2 == 0) ? 1 : -1;
    return scale_raw(sgn, prefixed({LayerOp::Edge, 0, os.j + ot.j}, inner));
  }

  if (ot.kind == LayerOp::V) {
    // x * V^k(y) = V^k(F^k(x) * y) with y = (t stripped to Int).
    int k = ot.i;
    DrwElem fx{{s, 1}};
    for (int a = 0; a < k; ++a) fx = F_in(fx, nl, r - a);
    TermKey tInt = t;
    tInt[nl - 1] = {LayerOp::Int, 0, ot.j};
    DrwElem prod = mul_in(fx, DrwElem{{tInt, 1}}, nl, r - k);
    for (int a = 0; a < k; ++a) prod = V_in(prod, nl, r - k + a);
    return prod;
  }

  if (os.kind == LayerOp::V && (ot.kind != LayerOp::DV || os.i <= ot.i)) {
    // V^i(u) * y = V^i(u * F^i(y)) with u = (s stripped to Int).
    int i = os.i;
    DrwElem fy{{t, 1}};
    for (int a = 0; a < i; ++a) fy = F_in(fy, nl, r - a);
    TermKey sInt = s;
    sInt[nl - 1] = {LayerOp::Int, 0, os.j};
    DrwElem prod = mul_in(DrwElem{{sInt, 1}}, fy, nl, r - i);
    for (int a = 0; a < i; ++a) prod = V_in(prod, nl, r - i + a);
    return prod;
  }

  if (os.kind == LayerOp::DV &&
      (ot.kind == LayerOp::Int || ot.kind == LayerOp::Edge)) {
    // Koszul swap to reach the handled cases.
    int sgn = ((term_degree(s) * term_degree(t)) % 2 == 0) ? 1 : -1;
    return scale_raw(sgn, mul_term(t, s, nl, r));
  }

  // Remaining: ot == DV with os in {Int, Edge, DV} or os == V with os.i > ot.i.
  // x * dz = (-1)^{deg x} ( d(x z) - d(x) z ), z = t with DV -> V.
  TermKey zt = t;
  zt[nl - 1].kind = LayerOp::V;
  DrwElem ze{{zt, 1}};
  DrwElem xz = mul_in(DrwElem{{s, 1}}, ze, nl, r);
  DrwElem out = d_in(xz, nl, r);
  out = add_raw(out, scale_raw(-1, mul_in(d_term(s, nl, r), ze, nl, r)));
  int sgn = (term_degree(s) % 2 == 0) ? 1 : -1;
  return scale_raw(sgn, out);
}

// ---------- phi ----------

DrwElem DrwEngine::phi(const DrwElem& a, int r) const { return normalize(phi_in(a, nvars_, r), r); }

DrwElem DrwEngine::phi_in(const DrwElem& a, int nl, int r) const {
  const std::int64_t m = ipow64(p_, static_cast<unsigned>(r));
  DrwElem out;
  for (const auto& [t, c0] : a) {
    const std::int64_t c = modnorm64(c0, m);
    if (nl == 0) {
      out = add_raw(out, DrwElem{{t, c}});
      continue;
    }
    LayerOp op = t[nl - 1];
    TermKey inner(t.begin(), t.begin() + (nl - 1));
    DrwElem ie{{inner, 1}};
    DrwElem piece;
    switch (op.kind) {
      case LayerOp::Int:
        piece = prefixed({LayerOp::Int, 0, p_ * op.j}, phi_in(ie, nl - 1, r));
        break;
      case LayerOp::Edge:
        piece = scale_raw(p_, prefixed({LayerOp::Edge, 0, p_ * op.j}, phi_in(ie, nl - 1, r)));
        break;
      case LayerOp::V:
        piece = mkV(op.i, phi_in(ie, nl - 1, r - op.i), p_ * op.j, nl, r - op.i);
        break;
      case LayerOp::DV:
        piece = d_in(mkV(op.i, phi_in(ie, nl - 1, r - op.i), p_ * op.j, nl, r - op.i), nl, r);
        break;
    }
    out = add_raw(out, scale_raw(c, piece));
  }
  return out;
}

// ---------- iterated maps & constructors ----------

DrwElem DrwEngine::iter_F(const DrwElem& a, int r, int times) const {
  DrwElem x = a;
  for (int k = 0; k < times; ++k) x = F(x, r - k);
  return x;
}

DrwElem DrwEngine::iter_V(const DrwElem& a, int r, int times) const {
  DrwElem x = a;
  for (int k = 0; k < times; ++k) x = V(x, r + k);
  return x;
}

DrwElem DrwEngine::iter_R(const DrwElem& a, int r, int times) const {
  DrwElem x = a;
  for (int k = 0; k < times; ++k) x = R(x, r - k);
  return x;
}

DrwElem DrwEngine::int_mono(const Int& c, const Expo& e, int r) const {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("monomial arity");
  TermKey t;
  for (int v = 0; v < nvars_; ++v) t.push_back({LayerOp::Int, 0, e[v]});
  Int cr = modnorm(c, ipow(Int(p_), static_cast<unsigned>(r)));
  return normalize(DrwElem{{t, static_cast<std::int64_t>(cr)}}, r);
}

std::int64_t DrwEngine::teich_scalar(std::int64_t c, int leaf) const {
  std::int64_t m = ipow64(p_, static_cast<unsigned>(leaf));
  Int e = ipow(Int(p_), static_cast<unsigned>(leaf - 1));
  return static_cast<std::int64_t>(modpow(Int(modnorm64(c, m)), e, Int(m)));
}

DrwElem DrwEngine::teich_mono(std::int64_t c, const Expo& e, int r) const {
  return int_mono(Int(teich_scalar(c, r)), e, r);
}

DrwElem DrwEngine::basic_form(const Int& c, const Expo& e, const std::vector<int>& K,
                              int r) const {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("monomial arity");
  TermKey t;
  for (int v = 0; v < nvars_; ++v) {
    bool ink = false;
    for (int k : K)
      if (k == v) ink = true;
    if (ink) {
      if (e[v] < 1) throw std::invalid_argument("d-layer needs exponent >= 1");
      t.push_back({LayerOp::Edge, 0, e[v]});
    } else {
      t.push_back({LayerOp::Int, 0, e[v]});
    }
  }
  Int cr = modnorm(c, ipow(Int(p_), static_cast<unsigned>(r)));
  return normalize(DrwElem{{t, static_cast<std::int64_t>(cr)}}, r);
}

// ---------- ghost oracle ----------

ZPoly DrwEngine::ghost_term(const TermKey& t, std::int64_t c, int nl, int k) const {
  if (nl == 0) return ZPoly::constant(nvars_, Int(c));
  LayerOp op = t[nl - 1];
  switch (op.kind) {
    case LayerOp::Int: {
      ZPoly inner = ghost_term(t, c, nl - 1, k);
      ZPoly x = ZPoly::variable(nvars_, nl - 1,
                                static_cast<int>(op.j * ipow64(p_, static_cast<unsigned>(k))));
      return op.j == 0 ? inner : inner * x;
    }
    case LayerOp::V: {
      if (k < op.i) return ZPoly(nvars_);
      ZPoly inner = ghost_term(t, c, nl - 1, k - op.i);
      ZPoly x = ZPoly::variable(
          nvars_, nl - 1, static_cast<int>(op.j * ipow64(p_, static_cast<unsigned>(k - op.i))));
      return (inner * x).scaled(ipow(Int(p_), static_cast<unsigned>(op.i)));
    }
    default:
      throw std::invalid_argument("ghost of a positive-degree term");
  }
}

ZPoly DrwEngine::ghost(const DrwElem& a, int r, int k) const {
  (void)r;
  ZPoly acc(nvars_);
  for (const auto& [t, c] : a) acc = acc + ghost_term(t, c, nvars_, k);
  return acc;
}

// ---------- weights ----------

WeightEntry weight_reduce(WeightEntry w, int p) {
  if (w.num == 0) return {0, 0};
  while (w.den > 0 && w.num % p == 0) {
    w.num /= p;
    --w.den;
  }
  return w;
}

WeightVector weight_sum(const WeightVector& a, const WeightVector& b, int p) {
  if (a.size() != b.size()) throw std::invalid_argument("weight arity");
  WeightVector out(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) {
    int den = std::max(a[v].den, b[v].den);
    std::int64_t num = a[v].num * ipow64(p, static_cast<unsigned>(den - a[v].den)) +
                       b[v].num * ipow64(p, static_cast<unsigned>(den - b[v].den));
    out[v] = weight_reduce({num, den}, p);
  }
  return out;
}

WeightVector weight_scale_p(const WeightVector& a, int p, int e) {
  WeightVector out(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) {
    WeightEntry w = a[v];
    if (e >= 0)
      w.num *= ipow64(p, static_cast<unsigned>(e));
    else
      w.den += -e;
    out[v] = weight_reduce(w, p);
  }
  return out;
}

WeightVector DrwEngine::weight(const TermKey& t) const {
  if (static_cast<int>(t.size()) != nvars_) throw std::invalid_argument("term arity");
  WeightVector w(static_cast<std::size_t>(nvars_));
  int drop = 0;  // total V/DV drops in layers outside the current one
  for (int v = nvars_ - 1; v >= 0; --v) {
    const LayerOp& op = t[v];
    int den = drop;
    if (op.kind == LayerOp::V || op.kind == LayerOp::DV) {
      den += op.i;
      drop += op.i;
    }
    w[v] = weight_reduce({op.j, den}, p_);
  }
  return w;
}

std::optional<WeightVector> DrwEngine::homogeneous_weight(const DrwElem& a) const {
  std::optional<WeightVector> w;
  for (const auto& [t, c] : a) {
    WeightVector wt = weight(t);
    if (!w)
      w = wt;
    else if (*w != wt)
      return std::nullopt;
  }
  return w;
}

bool DrwEngine::eq(const DrwElem& a, const DrwElem& b, int r) const {
  return normalize(a, r) == normalize(b, r);
}

std::string DrwEngine::str(const DrwElem& a) const {
  if (a.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, c] : a) {
    if (!first) os << " + ";
    first = false;
    os << c;
    std::string open, close;
    for (int v = nvars_ - 1; v >= 0; --v) {
      const LayerOp& op = t[v];
      std::string xv = "x" + std::to_string(v);
      switch (op.kind) {
        case LayerOp::Int:
          if (op.j != 0) open += "*[" + xv + "]^" + std::to_string(op.j);
          break;
        case LayerOp::Edge:
          open += "*[" + xv + "]^" + std::to_string(op.j - 1) + "d[" + xv + "]";
          break;
        case LayerOp::V:
          open += "*V^" + std::to_string(op.i) + "([" + xv + "]^" + std::to_string(op.j);
          close = ")" + close;
          break;
        case LayerOp::DV:
          open += "*dV^" + std::to_string(op.i) + "([" + xv + "]^" + std::to_string(op.j);
          close = ")" + close;
          break;
      }
    }
    os << open << close;
  }
  return os.str();
}

}  // namespace hwlab
