#include "hwlab/wittuniv.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hwlab {

using nlohmann::json;

WittUniv::WittUniv(int p, std::string cache_dir) : p_(p), cache_dir_(std::move(cache_dir)) {}

ZPoly WittUniv::ghost(int n) const {
  // w_n = sum_i p^i X_i^{p^{n-i}}
  ZPoly w(n + 1);
  for (int i = 0; i <= n; ++i) {
    std::vector<int> e(n + 1, 0);
    e[i] = static_cast<int>(ipow64(p_, static_cast<unsigned>(n - i)));
    w.add_term(e, ipow(Int(p_), static_cast<unsigned>(i)));
  }
  return w;
}

namespace {
// Variable maps for embedding level-i polynomials into level-n arity.
std::vector<int> xy_map(int i, int n) {
  // level-i sum/prod vars X0..Xi,Y0..Yi -> level-n arity 2(n+1)
  std::vector<int> m(2 * (i + 1));
  for (int k = 0; k <= i; ++k) {
    m[k] = k;                  // X_k
    m[i + 1 + k] = n + 1 + k;  // Y_k
  }
  return m;
}
std::vector<int> x_of(int n) {  // ghost vars X0..Xn within arity 2(n+1)
  std::vector<int> m(n + 1);
  for (int k = 0; k <= n; ++k) m[k] = k;
  return m;
}
std::vector<int> y_of(int n) {
  std::vector<int> m(n + 1);
  for (int k = 0; k <= n; ++k) m[k] = n + 1 + k;
  return m;
}
}  // namespace

ZPoly WittUniv::build(const std::string& op, int n) {
  int arity = (op == "neg") ? (n + 1) : 2 * (n + 1);
  // target ghost value at level n
  ZPoly target(arity);
  if (op == "sum")
    target = ghost(n).reindex(x_of(n), arity) + ghost(n).reindex(y_of(n), arity);
  else if (op == "prod")
    target = ghost(n).reindex(x_of(n), arity) * ghost(n).reindex(y_of(n), arity);
  else
    target = -ghost(n);  // neg: arity n+1, vars already X0..Xn

  // subtract sum_{i<n} p^i * Op_i^{p^{n-i}}
  for (int i = 0; i < n; ++i) {
    const ZPoly& prev = (op == "sum") ? sum_[i] : (op == "prod") ? prod_[i] : neg_[i];
    ZPoly lifted = (op == "neg") ? prev.reindex(x_of(i), arity) : prev.reindex(xy_map(i, n), arity);
    target = target - lifted.pow(static_cast<unsigned>(ipow64(p_, static_cast<unsigned>(n - i))))
                          .scaled(ipow(Int(p_), static_cast<unsigned>(i)));
  }
  return target.divexact_scalar(ipow(Int(p_), static_cast<unsigned>(n)));
}

bool WittUniv::load_cached(const std::string& op, int n, ZPoly& out) const {
  if (cache_dir_.empty()) return false;
  std::ostringstream name;
  name << cache_dir_ << "/wittuniv_p" << p_ << "_" << op << "_" << n << ".json";
  std::ifstream in(name.str());
  if (!in) return false;
  json j;
  try {
    in >> j;
  } catch (...) {
    return false;
  }
  if (!j.is_object() || j.value("p", -1) != p_ || j.value("n", -1) != n ||
      j.value("op", std::string()) != op)
    return false;
  int arity = (op == "neg") ? (n + 1) : 2 * (n + 1);
  ZPoly poly(arity);
  for (const auto& t : j["terms"]) {
    std::vector<int> e = t[0].get<std::vector<int>>();
    if (static_cast<int>(e.size()) != arity) return false;
    poly.add_term(e, Int(t[1].get<std::string>()));
  }
  out = std::move(poly);
  return true;
}

void WittUniv::store_cached(const std::string& op, int n, const ZPoly& poly) const {
  if (cache_dir_.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(cache_dir_, ec);
  std::ostringstream name;
  name << cache_dir_ << "/wittuniv_p" << p_ << "_" << op << "_" << n << ".json";
  json terms = json::array();
  for (const auto& [e, c] : poly.terms()) terms.push_back({e, c.str()});
  json j = {{"p", p_}, {"op", op}, {"n", n}, {"terms", terms}};
  std::ofstream out(name.str());
  out << j.dump();
}

const ZPoly& WittUniv::get(const std::string& op, int n) {
  auto& store = (op == "sum") ? sum_ : (op == "prod") ? prod_ : neg_;
  for (int k = static_cast<int>(store.size()); k <= n; ++k) {
    ZPoly poly;
    if (load_cached(op, k, poly)) {
      // Revalidate cached data against the ghost identity before trusting it.
      store.push_back(std::move(poly));
      Rng rng(0xC0FFEE + static_cast<std::uint64_t>(k));
      try {
        certify_level_op(op, k, rng, 4);
      } catch (...) {
        store[k] = build(op, k);
        store_cached(op, k, store[k]);
      }
    } else {
      store.push_back(build(op, k));
      store_cached(op, k, store[k]);
    }
  }
  return store[n];
}

const ZPoly& WittUniv::sum(int n) { return get("sum", n); }
const ZPoly& WittUniv::prod(int n) { return get("prod", n); }
const ZPoly& WittUniv::neg(int n) { return get("neg", n); }

void WittUniv::certify_level_op(const std::string& op, int n, Rng& rng, int points) {
  const auto& store = (op == "sum") ? sum_ : (op == "prod") ? prod_ : neg_;
  for (int pt = 0; pt < points; ++pt) {
    std::vector<Int> x(n + 1), y(n + 1);
    for (auto& v : x) v = Int(rng.range(-9, 9));
    for (auto& v : y) v = Int(rng.range(-9, 9));
    // ghost of the op result at every level k <= n must match the ghost identity.
    for (int k = 0; k <= n; ++k) {
      std::vector<Int> opvals(k + 1);
      for (int i = 0; i <= k; ++i) {
        std::vector<Int> args;
        if (op == "neg")
          args.assign(x.begin(), x.begin() + i + 1);
        else {
          args.assign(x.begin(), x.begin() + i + 1);
          args.insert(args.end(), y.begin(), y.begin() + i + 1);
        }
        opvals[i] = store[i].eval_int(args);
      }
      Int lhs = ghost(k).eval_int(opvals);
      Int gx = ghost(k).eval_int(std::vector<Int>(x.begin(), x.begin() + k + 1));
      Int gy = ghost(k).eval_int(std::vector<Int>(y.begin(), y.begin() + k + 1));
      Int rhs = (op == "sum") ? Int(gx + gy) : (op == "prod") ? Int(gx * gy) : Int(-gx);
      if (lhs != rhs)
        throw std::domain_error("OracleMismatch: ghost identity failed for " + op +
                                " at level " + std::to_string(k));
    }
  }
}

void WittUniv::certify_level(int n, Rng& rng, int points) {
  sum(n);
  prod(n);
  neg(n);
  certify_level_op("sum", n, rng, points);
  certify_level_op("prod", n, rng, points);
  certify_level_op("neg", n, rng, points);
}

}  // namespace hwlab
