#include "hwlab/snf.hpp"

#include <algorithm>
#include <stdexcept>

namespace hwlab {

Mat mat_identity(int n) {
  Mat m(n, Row(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.empty()) return {};
  size_t inner = a[0].size();
  if (inner != b.size()) throw std::invalid_argument("mat_mul shape");
  size_t cols = b.empty() ? 0 : b[0].size();
  Mat r(a.size(), Row(cols, 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < cols; ++j)
        if (b[k][j] != 0) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

Row row_mat_mul(const Row& x, const Mat& m, int cols) {
  Row r(cols, 0);
  if (x.size() != m.size()) throw std::invalid_argument("row_mat_mul shape");
  for (size_t k = 0; k < m.size(); ++k) {
    if (x[k] == 0) continue;
    for (int j = 0; j < cols; ++j)
      if (m[k][j] != 0) r[j] += x[k] * m[k][j];
  }
  return r;
}

Mat mat_stack(const Mat& a, const Mat& b) {
  Mat r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Mat mat_neg(const Mat& a) {
  Mat r = a;
  for (auto& row : r)
    for (auto& x : row) x = -x;
  return r;
}

Mat mat_transpose(const Mat& a, int cols) {
  Mat r(cols, Row(a.size(), 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (int j = 0; j < cols; ++j) r[j][i] = a[i][j];
  return r;
}

namespace {
// Floor division for the above-pivot reduction.
Int fdiv(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}
}  // namespace

Mat hermite(Mat m, int cols) {
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("hermite row size");
  int r = 0;
  int nrows = static_cast<int>(m.size());
  for (int c = 0; c < cols && r < nrows; ++c) {
    // Gather rows >= r with nonzero entry at c and fold them into one via gcd steps.
    while (true) {
      int best = -1;
      int count = 0;
      for (int i = r; i < nrows; ++i)
        if (m[i][c] != 0) {
          ++count;
          if (best < 0 || abs(m[i][c]) < abs(m[best][c])) best = i;
        }
      if (count == 0) { best = -1; break; }
      std::swap(m[r], m[best]);
      if (count == 1) break;
      for (int i = r + 1; i < nrows; ++i)
        if (m[i][c] != 0) {
          Int q = m[i][c] / m[r][c];  // truncated quotient shrinks |entry|
          if (q != 0)
            for (int j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        }
    }
    if (m[r].empty() || m[r][c] == 0) continue;
    if (m[r][c] < 0)
      for (int j = 0; j < cols; ++j) m[r][j] = -m[r][j];
    for (int i = 0; i < r; ++i) {
      Int q = fdiv(m[i][c], m[r][c]);
      if (q != 0)
        for (int j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
    }
    ++r;
  }
  m.resize(r);
  return m;
}

SmithResult smith(Mat m, int cols) {
  SmithResult res;
  int rows = static_cast<int>(m.size());
  res.rows = rows;
  res.cols = cols;
  res.U = mat_identity(rows);
  res.V = mat_identity(cols);
  res.Vi = mat_identity(cols);

  auto row_sub = [&](int i, int k, const Int& q) {  // row i -= q * row k
    for (int j = 0; j < cols; ++j) m[i][j] -= q * m[k][j];
    for (int j = 0; j < rows; ++j) res.U[i][j] -= q * res.U[k][j];
  };
  auto col_sub = [&](int j, int k, const Int& q) {  // col j -= q * col k
    for (int i = 0; i < rows; ++i) m[i][j] -= q * m[i][k];
    for (int i = 0; i < cols; ++i) res.V[i][j] -= q * res.V[i][k];
    // inverse op on Vi rows: row k += q * row j
    for (int i = 0; i < cols; ++i) res.Vi[k][i] += q * res.Vi[j][i];
  };
  auto row_swap = [&](int i, int k) {
    std::swap(m[i], m[k]);
    std::swap(res.U[i], res.U[k]);
  };
  auto col_swap = [&](int j, int k) {
    for (int i = 0; i < rows; ++i) std::swap(m[i][j], m[i][k]);
    for (int i = 0; i < cols; ++i) std::swap(res.V[i][j], res.V[i][k]);
    std::swap(res.Vi[j], res.Vi[k]);
  };
  auto row_neg = [&](int i) {
    for (int j = 0; j < cols; ++j) m[i][j] = -m[i][j];
    for (int j = 0; j < rows; ++j) res.U[i][j] = -res.U[i][j];
  };

  int n = std::min(rows, cols);
  for (int t = 0; t < n; ++t) {
    // Find pivot: smallest |entry| in the remaining block, ties by (row, col).
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (m[i][j] != 0 &&
            (pi < 0 || abs(m[i][j]) < abs(m[pi][pj])))
          pi = i, pj = j;
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    while (true) {
      bool clean = true;
      for (int i = t + 1; i < rows; ++i)
        if (m[i][t] != 0) {
          Int q = m[i][t] / m[t][t];
          row_sub(i, t, q);
          if (m[i][t] != 0) {  // remainder became the smaller pivot
            row_swap(t, i);
            clean = false;
          }
        }
      for (int j = t + 1; j < cols; ++j)
        if (m[t][j] != 0) {
          Int q = m[t][j] / m[t][t];
          col_sub(j, t, q);
          if (m[t][j] != 0) {
            col_swap(t, j);
            clean = false;
          }
        }
      if (clean) break;
    }
    if (m[t][t] < 0) row_neg(t);
  }

  // Enforce divisibility chain d_t | d_{t+1}.
  for (int t = 0; t + 1 < n; ++t) {
    for (int u = t + 1; u < n; ++u) {
      if (m[t][t] == 0 && m[u][u] != 0) {  // move nonzero forward
        row_swap(t, u);
        col_swap(t, u);
      }
      if (m[t][t] == 0 || m[u][u] % m[t][t] == 0) continue;
      // Classic gcd trick: add column u to column t, then re-eliminate the 2x2 block.
      col_sub(t, u, Int(-1));
      while (true) {
        bool clean = true;
        if (m[u][t] != 0) {
          Int q = m[u][t] / m[t][t];
          row_sub(u, t, q);
          if (m[u][t] != 0) {
            row_swap(t, u);
            clean = false;
          }
        }
        if (m[t][u] != 0) {
          Int q = m[t][u] / m[t][t];
          col_sub(u, t, q);
          if (m[t][u] != 0) {
            col_swap(t, u);
            clean = false;
          }
        }
        if (clean) break;
      }
      if (m[t][t] < 0) row_neg(t);
      if (m[u][u] < 0) row_neg(u);
      u = t;  // re-scan the chain after the fix
    }
  }

  for (int t = 0; t < n; ++t)
    if (m[t][t] < 0) row_neg(t);
  res.diag.resize(n);
  for (int t = 0; t < n; ++t) res.diag[t] = m[t][t];
  return res;
}

std::optional<std::map<int, Int>> EchelonSolver::add_row(Row v, int id) {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("EchelonSolver row size");
  std::map<int, Int> expr;
  expr[id] = 1;
  auto expr_axpy = [](std::map<int, Int>& dst, const Int& a, const std::map<int, Int>& srcm) {
    for (auto& [k, c] : srcm) {
      Int& slot = dst[k];
      slot += a * c;
      if (slot == 0) dst.erase(k);
    }
  };
  for (int c = 0; c < cols_; ++c) {
    if (v[c] == 0) continue;
    auto it = pivots_.find(c);
    if (it == pivots_.end()) {
      if (v[c] < 0) {
        for (auto& x : v) x = -x;
        for (auto& [k, cc] : expr) cc = -cc;
      }
      pivots_.emplace(c, Pivot{std::move(v), std::move(expr)});
      return std::nullopt;
    }
    Pivot& P = it->second;
    if (v[c] % P.row[c] == 0) {
      Int q = v[c] / P.row[c];
      for (int j = c; j < cols_; ++j) v[j] -= q * P.row[j];
      expr_axpy(expr, -q, P.expr);
    } else {
      // Extended gcd combine: g = a*pc + b*vc.
      Int pc = P.row[c], vc = v[c];
      Int old_r = pc, r = vc, old_a = 1, a = 0, old_b = 0, b = 1;
      while (r != 0) {
        Int q = old_r / r;
        Int t1 = old_r - q * r; old_r = r; r = t1;
        Int t2 = old_a - q * a; old_a = a; a = t2;
        Int t3 = old_b - q * b; old_b = b; b = t3;
      }
      Int g = old_r;  // = old_a*pc + old_b*vc
      Row newP(cols_, 0), newv(cols_, 0);
      for (int j = 0; j < cols_; ++j) {
        newP[j] = old_a * P.row[j] + old_b * v[j];
        newv[j] = (pc / g) * v[j] - (vc / g) * P.row[j];
      }
      std::map<int, Int> newPexpr, newvexpr;
      expr_axpy(newPexpr, old_a, P.expr);
      expr_axpy(newPexpr, old_b, expr);
      expr_axpy(newvexpr, pc / g, expr);
      expr_axpy(newvexpr, -vc / g, P.expr);
      if (newP[c] < 0) {
        for (auto& x : newP) x = -x;
        for (auto& [k, cc] : newPexpr) cc = -cc;
      }
      P.row = std::move(newP);
      P.expr = std::move(newPexpr);
      v = std::move(newv);
      expr = std::move(newvexpr);
    }
  }
  // v reduced to zero: expr is a left-kernel combination.
  return expr;
}

std::optional<std::map<int, Int>> EchelonSolver::solve(Row b) const {
  if (static_cast<int>(b.size()) != cols_) throw std::invalid_argument("EchelonSolver rhs size");
  std::map<int, Int> out;
  for (int c = 0; c < cols_; ++c) {
    if (b[c] == 0) continue;
    auto it = pivots_.find(c);
    if (it == pivots_.end()) return std::nullopt;
    const Pivot& P = it->second;
    if (b[c] % P.row[c] != 0) return std::nullopt;
    Int q = b[c] / P.row[c];
    for (int j = c; j < cols_; ++j) b[j] -= q * P.row[j];
    for (auto& [k, cc] : P.expr) {
      Int& slot = out[k];
      slot += q * cc;
      if (slot == 0) out.erase(k);
    }
  }
  return out;
}

bool EchelonSolver::member(const Row& b) const { return solve(b).has_value(); }

Mat EchelonSolver::basis() const {
  Mat r;
  for (auto& [c, P] : pivots_) r.push_back(P.row);
  return r;
}

Mat left_kernel(const Mat& m, int cols) {
  EchelonSolver es(cols);
  int n = static_cast<int>(m.size());
  Mat out;
  for (int i = 0; i < n; ++i) {
    auto k = es.add_row(m[i], i);
    if (k) {
      Row v(n, 0);
      for (auto& [id, c] : *k) v[id] = c;
      out.push_back(std::move(v));
    }
  }
  return hermite(out, n);
}

Mat kernel_lattice(const Mat& m, const Mat& l, int cols) {
  EchelonSolver es(cols);
  int nm = static_cast<int>(m.size());
  // Feed l rows with ids that we later discard.
  Mat out;
  for (size_t i = 0; i < l.size(); ++i) es.add_row(l[i], nm + static_cast<int>(i));
  for (int i = 0; i < nm; ++i) {
    auto k = es.add_row(m[i], i);
    if (k) {
      Row v(nm, 0);
      bool nontrivial = false;
      for (auto& [id, c] : *k)
        if (id < nm) {
          v[id] = c;
          nontrivial = true;
        }
      if (nontrivial) out.push_back(std::move(v));
    }
  }
  return hermite(out, nm);
}

}  // namespace hwlab
