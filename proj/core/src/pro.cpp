#include "hwlab/pro.hpp"

#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace hwlab {

namespace {

bool map_is_zero(const AbMap& f) {
  for (const auto& row : f.M)
    if (!f.tgt->is_zero_elem(row)) return false;
  return true;
}

int default_prefix(int bound, int prefix) {
  if (prefix <= 0) prefix = bound / 2;
  if (prefix < 1) prefix = 1;
  if (prefix > bound) prefix = bound;
  return prefix;
}

std::string row_str(const Row& x) {
  std::string s = "[";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += " ";
    s += x[i].str();
  }
  return s + "]";
}

}  // namespace

AbMap ProGroup::transition(int t, int s) const {
  if (s < 1 || t < s || t > bound()) throw std::invalid_argument("transition: bad indices");
  AbMap m = identity_map(level(t));
  for (int j = t - 2; j >= s - 1; --j) m = compose(m, steps[static_cast<std::size_t>(j)]);
  return m;
}

ProGroup make_pro(std::vector<std::shared_ptr<FinAb>> levels, std::vector<AbMap> steps) {
  if (levels.empty()) throw std::invalid_argument("pro group: empty tower");
  if (steps.size() + 1 != levels.size())
    throw std::invalid_argument("pro group: need one step per adjacent pair");
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (steps[j].src != levels[j + 1].get() || steps[j].tgt != levels[j].get())
      throw std::invalid_argument("pro group: step endpoints out of place");
    if (!well_defined(steps[j])) throw std::invalid_argument("pro group: step not well-defined");
  }
  return ProGroup{std::move(levels), std::move(steps)};
}

ProMap make_pro_map(const ProGroup& src, const ProGroup& tgt, std::vector<AbMap> level) {
  if (src.bound() != tgt.bound()) throw std::invalid_argument("pro map: towers of unequal bound");
  if (static_cast<int>(level.size()) != src.bound())
    throw std::invalid_argument("pro map: need one level map per index");
  for (int s = 1; s <= src.bound(); ++s) {
    const AbMap& f = level[static_cast<std::size_t>(s - 1)];
    if (f.src != &src.level(s) || f.tgt != &tgt.level(s))
      throw std::invalid_argument("pro map: level map endpoints out of place");
    if (!well_defined(f)) throw std::invalid_argument("pro map: level map not well-defined");
  }
  for (int s = 1; s < src.bound(); ++s) {
    AbMap down_then_f = compose(src.steps[static_cast<std::size_t>(s - 1)],
                                level[static_cast<std::size_t>(s - 1)]);
    AbMap f_then_down = compose(level[static_cast<std::size_t>(s)],
                                tgt.steps[static_cast<std::size_t>(s - 1)]);
    if (!maps_equal(down_then_f, f_then_down))
      throw std::invalid_argument("pro map: squares do not commute");
  }
  return ProMap{&src, &tgt, std::move(level)};
}

WitnessReport pro_zero(const ProGroup& P, int prefix, const std::string& claim) {
  WitnessReport rep;
  rep.claim = claim;
  rep.kind = "pro_zero";
  rep.bound = P.bound();
  rep.prefix = default_prefix(rep.bound, prefix);
  rep.pass = true;
  rep.monotone_checked = true;
  for (int s = 1; s <= rep.prefix; ++s) {
    Witness w;
    w.s = s;
    for (int t = s; t <= rep.bound; ++t) {
      if (!map_is_zero(P.transition(t, s))) continue;
      w.t = t;
      if (t < rep.bound && !map_is_zero(P.transition(t + 1, s)))
        throw std::logic_error("pro_zero: witness not monotone");
      break;
    }
    if (!w.found()) {
      rep.pass = false;
      if (!rep.detail.empty()) rep.detail += "; ";
      rep.detail += "NOT_FOUND at s=" + std::to_string(s);
    }
    rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

WitnessReport pro_iso(const ProMap& f, int prefix, const std::string& claim) {
  ProGroup K = kernel_tower(f);
  ProGroup C = cokernel_tower(f);
  WitnessReport rk = pro_zero(K, prefix, claim);
  WitnessReport rc = pro_zero(C, prefix, claim);
  WitnessReport rep;
  rep.claim = claim;
  rep.kind = "pro_iso";
  rep.bound = rk.bound;
  rep.prefix = rk.prefix;
  rep.pass = rk.pass && rc.pass;
  rep.monotone_checked = rk.monotone_checked && rc.monotone_checked;
  for (auto& w : rk.witnesses) {
    w.part = "ker";
    rep.witnesses.push_back(std::move(w));
  }
  for (auto& w : rc.witnesses) {
    w.part = "coker";
    rep.witnesses.push_back(std::move(w));
  }
  if (!rk.detail.empty()) rep.detail += "ker: " + rk.detail;
  if (!rc.detail.empty()) {
    if (!rep.detail.empty()) rep.detail += "; ";
    rep.detail += "coker: " + rc.detail;
  }
  return rep;
}

WitnessReport pro_exact(const ProMap& f, const ProMap& g, int prefix, const std::string& claim) {
  WitnessReport rep;
  rep.claim = claim;
  rep.kind = "pro_exact";
  rep.bound = f.src->bound();
  rep.prefix = default_prefix(rep.bound, prefix);
  for (int s = 1; s <= rep.bound; ++s) {
    AbMap comp = compose(f.level[static_cast<std::size_t>(s - 1)],
                         g.level[static_cast<std::size_t>(s - 1)]);
    if (!map_is_zero(comp)) {
      rep.pass = false;
      rep.detail = "CompositionNonzero at s=" + std::to_string(s);
      return rep;
    }
  }
  ProGroup H = homology_tower(f, g);
  WitnessReport rh = pro_zero(H, prefix, claim);
  rep.prefix = rh.prefix;
  rep.pass = rh.pass;
  rep.monotone_checked = rh.monotone_checked;
  for (auto& w : rh.witnesses) {
    w.part = "homology";
    rep.witnesses.push_back(std::move(w));
  }
  rep.detail = rh.detail;
  if (!rep.pass) {
    for (const auto& w : rep.witnesses) {
      if (w.found()) continue;
      Subquotient hq = homology(f.level[static_cast<std::size_t>(w.s - 1)],
                                g.level[static_cast<std::size_t>(w.s - 1)]);
      for (std::size_t k = 0; k < hq.lifts.size(); ++k) {
        Row e(static_cast<std::size_t>(hq.grp->ngens()), Int(0));
        e[k] = 1;
        if (hq.grp->is_zero_elem(e)) continue;
        rep.detail += "; defect at s=" + std::to_string(w.s) + ": " + row_str(hq.lifts[k]);
        break;
      }
      break;
    }
  }
  return rep;
}

namespace {

// Shared scheme for sub/quotient towers: present each level, then induce the
// transitions from the ambient steps.
ProGroup induced_tower(const ProGroup& amb, const std::vector<Subquotient>& pres,
                       const char* what) {
  std::vector<std::shared_ptr<FinAb>> levels;
  std::vector<AbMap> steps;
  levels.reserve(pres.size());
  for (const auto& q : pres) levels.push_back(q.grp);
  for (std::size_t j = 0; j + 1 < pres.size(); ++j) {
    auto m = induced_map(pres[j + 1], pres[j], amb.steps[j]);
    if (!m) throw std::logic_error(std::string(what) + ": transition not induced");
    steps.push_back(*m);
  }
  return ProGroup{std::move(levels), std::move(steps)};
}

}  // namespace

ProGroup kernel_tower(const ProMap& f) {
  std::vector<Subquotient> pres;
  for (int s = 1; s <= f.src->bound(); ++s)
    pres.push_back(kernel_data(f.level[static_cast<std::size_t>(s - 1)]).pres);
  return induced_tower(*f.src, pres, "kernel tower");
}

ProGroup cokernel_tower(const ProMap& f) {
  std::vector<Subquotient> pres;
  for (int s = 1; s <= f.tgt->bound(); ++s)
    pres.push_back(present_quotient(f.tgt->level(s),
                                    image_subgroup(f.level[static_cast<std::size_t>(s - 1)])));
  return induced_tower(*f.tgt, pres, "cokernel tower");
}

ProGroup homology_tower(const ProMap& f, const ProMap& g) {
  std::vector<Subquotient> pres;
  for (int s = 1; s <= f.tgt->bound(); ++s)
    pres.push_back(homology(f.level[static_cast<std::size_t>(s - 1)],
                            g.level[static_cast<std::size_t>(s - 1)]));
  return induced_tower(*f.tgt, pres, "homology tower");
}

TorsionData torsion_tower(const ProGroup& P, const Int& c) {
  TorsionData td;
  for (int s = 1; s <= P.bound(); ++s) {
    const FinAb& G = P.level(s);
    td.pres.push_back(present_subgroup(G, kernel_subgroup(multiplication_map(G, c))));
  }
  td.tower = induced_tower(P, td.pres, "torsion tower");
  return td;
}

ProMap torsion_map(const ProMap& f, const TorsionData& srcT, const TorsionData& tgtT) {
  std::vector<AbMap> level;
  for (std::size_t s = 0; s < srcT.pres.size(); ++s) {
    auto m = induced_map(srcT.pres[s], tgtT.pres[s], f.level[s]);
    if (!m) throw std::logic_error("torsion map: level map not induced");
    level.push_back(*m);
  }
  return make_pro_map(srcT.tower, tgtT.tower, std::move(level));
}

std::string WitnessReport::to_json() const {
  nlohmann::ordered_json j;
  j["claim"] = claim;
  j["grid"] = grid;
  j["kind"] = kind;
  j["bound"] = bound;
  j["prefix"] = prefix;
  j["verdict"] = pass ? "PASS" : "FAIL";
  j["monotone_checked"] = monotone_checked;
  nlohmann::ordered_json ws = nlohmann::ordered_json::array();
  for (const auto& w : witnesses) {
    nlohmann::ordered_json e;
    if (!w.part.empty()) e["part"] = w.part;
    e["s"] = w.s;
    if (w.found())
      e["t"] = w.t;
    else
      e["t"] = nullptr;
    ws.push_back(std::move(e));
  }
  j["witnesses"] = std::move(ws);
  j["detail"] = detail;
  return j.dump(2);
}

std::string WitnessReport::to_csv() const {
  std::ostringstream out;
  out << "claim,kind,part,s,t,verdict,bound\n";
  for (const auto& w : witnesses) {
    out << '"' << claim << "\"," << kind << ',' << w.part << ',' << w.s << ',';
    if (w.found())
      out << w.t;
    else
      out << "NOT_FOUND";
    out << ',' << (pass ? "PASS" : "FAIL") << ',' << bound << '\n';
  }
  return out.str();
}

}  // namespace hwlab
