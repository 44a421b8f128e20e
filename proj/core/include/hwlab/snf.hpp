#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hwlab/numeric.hpp"

namespace hwlab {

using Row = std::vector<Int>;
using Mat = std::vector<Row>;

Mat mat_identity(int n);
Mat mat_mul(const Mat& a, const Mat& b);
Row row_mat_mul(const Row& x, const Mat& m, int cols);
Mat mat_stack(const Mat& a, const Mat& b);
Mat mat_neg(const Mat& a);
Mat mat_transpose(const Mat& a, int cols);

// Canonical row Hermite normal form: staircase, positive pivots, entries above a
// pivot reduced into [0, pivot); zero rows dropped. Uniquely determines the row lattice.
Mat hermite(Mat m, int cols);

inline bool lattice_eq(const Mat& a, const Mat& b, int cols) {
  return hermite(a, cols) == hermite(b, cols);
}

struct SmithResult {
  Mat U;             // rows x rows, unimodular
  Mat V, Vi;         // cols x cols, unimodular, V * Vi = I
  std::vector<Int> diag;  // diagonal of U*M*V, length min(rows, cols); d1 | d2 | ...; di >= 0
  int rows = 0, cols = 0;
};

// U * M * V = diag. Pivot selection: smallest nonzero absolute value, ties by position.
SmithResult smith(Mat m, int cols);

// Incremental integer row-echelon structure over Z with expression tracking.
// Every pivot row remembers how it is composed from the fed rows, so reductions
// to zero yield left-kernel vectors and solve() yields explicit coefficients.
class EchelonSolver {
 public:
  explicit EchelonSolver(int cols) : cols_(cols) {}

  // Feed a row tagged with an external id. When the row reduces to zero the
  // returned map e satisfies sum_id e[id] * fed_row[id] = 0 (a left-kernel vector).
  std::optional<std::map<int, Int>> add_row(Row v, int id);

  // Coefficients x with sum x[id] * fed_row[id] = b, if b lies in the row lattice.
  std::optional<std::map<int, Int>> solve(Row b) const;

  bool member(const Row& b) const;
  // Current lattice basis (staircase rows).
  Mat basis() const;
  int cols() const { return cols_; }

 private:
  struct Pivot {
    Row row;
    std::map<int, Int> expr;
  };
  int cols_;
  std::map<int, Pivot> pivots_;  // keyed by pivot column
};

// Basis of {x : x * m = 0} (left kernel), rows of length m.rows().
Mat left_kernel(const Mat& m, int cols);

// Basis (HNF) of {x : x * m in rowspan(l)}; both over cols columns, x length m.rows().
Mat kernel_lattice(const Mat& m, const Mat& l, int cols);

}  // namespace hwlab
