#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hwlab/zpoly.hpp"

namespace hwlab {

// Universal p-typical Witt polynomials: ghost components, sum, product, negation.
// Sum/product polynomials for level n live in 2(n+1) variables X0..Xn,Y0..Yn;
// negation in n+1 variables. Construction is by certified exact division of the
// ghost recursion by p^n; loading from cache revalidates by random ghost identities.
class WittUniv {
 public:
  // cache_dir empty: no caching.
  WittUniv(int p, std::string cache_dir = "");

  int p() const { return p_; }

  // Ghost polynomial w_n in n+1 variables.
  ZPoly ghost(int n) const;

  const ZPoly& sum(int n);
  const ZPoly& prod(int n);
  const ZPoly& neg(int n);

  // Certify the recorded level-n polynomials by evaluating the defining ghost
  // identities at random integer points; throws OracleMismatch on failure.
  void certify_level(int n, Rng& rng, int points);
  void certify_level_op(const std::string& op, int n, Rng& rng, int points);

 private:
  const ZPoly& get(const std::string& op, int n);
  ZPoly build(const std::string& op, int n);
  bool load_cached(const std::string& op, int n, ZPoly& out) const;
  void store_cached(const std::string& op, int n, const ZPoly& poly) const;

  int p_;
  std::string cache_dir_;
  std::vector<ZPoly> sum_, prod_, neg_;  // level n at index n
};

}  // namespace hwlab
