#include "swopt/csr.hpp"

#include <algorithm>
#include <stdexcept>

#include "swopt/kernels.hpp"

namespace swopt {

double CsrMatrix::value_at(int i, int j) const {
  for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
    if (col_indices[k] == j) return values[k];
  }
  return 0.0;
}

CsrMatrix csr_from_triplets(int n_rows, int n_cols,
                            std::vector<Triplet> triplets, bool symmetric) {
  if (symmetric && n_rows != n_cols) {
    throw std::invalid_argument("symmetric CSR requires a square matrix");
  }
  if (symmetric) {
    // Keep the upper triangle only; the lower one is mirrored afterwards.
    std::erase_if(triplets, [](const Triplet& t) { return t.row > t.col; });
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  CsrMatrix upper;
  upper.n_rows = n_rows;
  upper.n_cols = n_cols;
  upper.symmetric = symmetric;
  upper.row_offsets.assign(n_rows + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    std::size_t end = k;
    double acc = 0.0;
    while (end < triplets.size() && triplets[end].row == triplets[k].row &&
           triplets[end].col == triplets[k].col) {
      acc += triplets[end].value;
      ++end;
    }
    upper.col_indices.push_back(triplets[k].col);
    upper.values.push_back(acc);
    ++upper.row_offsets[triplets[k].row + 1];
    k = end;
  }
  for (int i = 0; i < n_rows; ++i) {
    upper.row_offsets[i + 1] += upper.row_offsets[i];
  }
  if (!symmetric) return upper;

  // Mirror: emit (j, i, v) for every stored (i, j), i < j.
  std::vector<Triplet> full;
  full.reserve(2 * upper.values.size());
  for (int i = 0; i < n_rows; ++i) {
    for (int k = upper.row_offsets[i]; k < upper.row_offsets[i + 1]; ++k) {
      full.push_back({i, upper.col_indices[k], upper.values[k]});
      if (upper.col_indices[k] != i) {
        full.push_back({upper.col_indices[k], i, upper.values[k]});
      }
    }
  }
  CsrMatrix out = csr_from_triplets(n_rows, n_cols, std::move(full), false);
  out.symmetric = true;
  return out;
}

void validate(const CsrMatrix& m) {
  if (m.row_offsets.size() != static_cast<std::size_t>(m.n_rows) + 1) {
    throw std::runtime_error("csr: row_offsets size mismatch");
  }
  if (m.row_offsets.front() != 0 || m.row_offsets.back() != m.nnz()) {
    throw std::runtime_error("csr: row_offsets endpoints invalid");
  }
  for (int i = 0; i < m.n_rows; ++i) {
    if (m.row_offsets[i] > m.row_offsets[i + 1]) {
      throw std::runtime_error("csr: row_offsets not non-decreasing");
    }
    for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
      if (m.col_indices[k] < 0 || m.col_indices[k] >= m.n_cols) {
        throw std::runtime_error("csr: column index out of range");
      }
      if (k > m.row_offsets[i] && m.col_indices[k] <= m.col_indices[k - 1]) {
        throw std::runtime_error("csr: columns not strictly increasing");
      }
    }
  }
  if (m.symmetric) {
    for (int i = 0; i < m.n_rows; ++i) {
      for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
        const int j = m.col_indices[k];
        if (m.values[k] != m.value_at(j, i)) {
          throw std::runtime_error("csr: symmetric pair not bit-equal");
        }
      }
    }
  }
}

void spmv_into(const CsrMatrix& m, std::span<const double> x,
               std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(m.n_cols) ||
      y.size() != static_cast<std::size_t>(m.n_rows)) {
    throw std::invalid_argument("spmv: dimension mismatch");
  }
  kernels::spmv(m.row_offsets, m.col_indices, m.values, x, y);
}

std::vector<double> spmv(const CsrMatrix& m, std::span<const double> x) {
  std::vector<double> y(m.n_rows);
  spmv_into(m, x, y);
  return y;
}

CsrMatrix csr_add_scaled(const CsrMatrix& a, double scale, const CsrMatrix& b) {
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols) {
    throw std::invalid_argument("csr_add_scaled: shape mismatch");
  }
  CsrMatrix out;
  out.n_rows = a.n_rows;
  out.n_cols = a.n_cols;
  out.symmetric = a.symmetric && b.symmetric;
  out.row_offsets.assign(a.n_rows + 1, 0);
  for (int i = 0; i < a.n_rows; ++i) {
    int ka = a.row_offsets[i], kb = b.row_offsets[i];
    while (ka < a.row_offsets[i + 1] || kb < b.row_offsets[i + 1]) {
      const int ca = ka < a.row_offsets[i + 1] ? a.col_indices[ka] : a.n_cols;
      const int cb = kb < b.row_offsets[i + 1] ? b.col_indices[kb] : b.n_cols;
      if (ca == cb) {
        out.col_indices.push_back(ca);
        out.values.push_back(a.values[ka] + scale * b.values[kb]);
        ++ka, ++kb;
      } else if (ca < cb) {
        out.col_indices.push_back(ca);
        out.values.push_back(a.values[ka]);
        ++ka;
      } else {
        out.col_indices.push_back(cb);
        out.values.push_back(scale * b.values[kb]);
        ++kb;
      }
    }
    out.row_offsets[i + 1] = static_cast<int>(out.col_indices.size());
  }
  return out;
}

}  // namespace swopt
