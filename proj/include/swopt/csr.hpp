#pragma once

#include <span>
#include <vector>

namespace swopt {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; matrices built by the symmetric assembly path mirror the
/// upper triangle so that value(i,j) and value(j,i) are bit-identical.
struct CsrMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> row_offsets;   // size n_rows + 1
  std::vector<int> col_indices;   // size nnz
  std::vector<double> values;     // size nnz
  bool symmetric = false;

  int nnz() const { return static_cast<int>(values.size()); }

  /// Stored value at (i, j), zero if the entry is not stored.
  double value_at(int i, int j) const;
};

struct Triplet {
  int row;
  int col;
  double value;
};

/// Builds a CSR matrix from (row, col, value) triplets; duplicate entries are
/// summed in a deterministic order. With symmetric = true only entries with
/// row <= col are read and the lower triangle is mirrored bit-exactly.
CsrMatrix csr_from_triplets(int n_rows, int n_cols,
                            std::vector<Triplet> triplets,
                            bool symmetric = false);

/// Checks structural invariants (offset monotonicity, sorted columns, and for
/// symmetric matrices bit-equal transposed pairs). Throws std::runtime_error
/// naming the violated invariant.
void validate(const CsrMatrix& m);

/// y = m * x. Throws std::invalid_argument on dimension mismatch.
void spmv_into(const CsrMatrix& m, std::span<const double> x,
               std::span<double> y);
std::vector<double> spmv(const CsrMatrix& m, std::span<const double> x);

/// a + scale * b for matrices with identical sparsity patterns.
CsrMatrix csr_add_scaled(const CsrMatrix& a, double scale, const CsrMatrix& b);

}  // namespace swopt
