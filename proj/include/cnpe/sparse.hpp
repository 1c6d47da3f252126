#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cnpe/fields.hpp"

namespace cnpe {

using ComplexVector = Eigen::VectorXcd;
using DenseComplexMatrix = Eigen::MatrixXcd;

struct Triplet {
    int row, col;
    Complex value;
};

/// Compressed-row complex matrix. Duplicate triplets are summed and exact
/// zeros dropped at finalization; entries within a row are column-sorted.
class ComplexSparseMatrix {
public:
    ComplexSparseMatrix() = default;

    static ComplexSparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long nonzeros() const { return static_cast<long>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<Complex>& values() const { return values_; }

    ComplexVector multiply(const ComplexVector& x) const;

    /// alpha*A + beta*B on the merged sparsity pattern.
    static ComplexSparseMatrix combine(Complex alpha, const ComplexSparseMatrix& A,
                                       Complex beta, const ComplexSparseMatrix& B);

    /// max_{j,k} |A_jk - conj(A_kj)|.
    double hermitian_defect() const;

    /// max_{j,k} |A_jk - D_jk| over the union of patterns (D dense).
    double max_abs_diff(const DenseComplexMatrix& D) const;

    double max_abs() const;

    DenseComplexMatrix to_dense() const;
    Eigen::SparseMatrix<Complex> to_eigen() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<Complex> values_;
};

} // namespace cnpe
