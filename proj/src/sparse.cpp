#include "cnpe/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace cnpe {

ComplexSparseMatrix ComplexSparseMatrix::from_triplets(int rows, int cols,
                                                       std::vector<Triplet> triplets) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("from_triplets: negative dimensions");
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw std::invalid_argument("from_triplets: index out of range");
        }
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    ComplexSparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());

    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
        while (i < triplets.size() && triplets[i].row == r) {
            const int c = triplets[i].col;
            Complex sum{0.0, 0.0};
            while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
                sum += triplets[i].value;
                ++i;
            }
            if (sum != Complex{0.0, 0.0}) { // drop exact zeros
                m.col_idx_.push_back(c);
                m.values_.push_back(sum);
            }
        }
        m.row_ptr_[r + 1] = static_cast<int>(m.col_idx_.size());
    }
    return m;
}

ComplexVector ComplexSparseMatrix::multiply(const ComplexVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("multiply: size mismatch");
    ComplexVector y = ComplexVector::Zero(rows_);
    for (int r = 0; r < rows_; ++r) {
        Complex acc{0.0, 0.0};
        for (int i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) {
            acc += values_[i] * x[col_idx_[i]];
        }
        y[r] = acc;
    }
    return y;
}

ComplexSparseMatrix ComplexSparseMatrix::combine(Complex alpha, const ComplexSparseMatrix& A,
                                                 Complex beta, const ComplexSparseMatrix& B) {
    if (A.rows_ != B.rows_ || A.cols_ != B.cols_) {
        throw std::invalid_argument("combine: dimension mismatch");
    }
    std::vector<Triplet> trips;
    trips.reserve(A.values_.size() + B.values_.size());
    for (int r = 0; r < A.rows_; ++r) {
        for (int i = A.row_ptr_[r]; i < A.row_ptr_[r + 1]; ++i) {
            trips.push_back({r, A.col_idx_[i], alpha * A.values_[i]});
        }
        for (int i = B.row_ptr_[r]; i < B.row_ptr_[r + 1]; ++i) {
            trips.push_back({r, B.col_idx_[i], beta * B.values_[i]});
        }
    }
    return from_triplets(A.rows_, A.cols_, std::move(trips));
}

double ComplexSparseMatrix::hermitian_defect() const {
    DenseComplexMatrix D = to_dense();
    return (D - D.adjoint()).cwiseAbs().maxCoeff();
}

double ComplexSparseMatrix::max_abs_diff(const DenseComplexMatrix& D) const {
    if (D.rows() != rows_ || D.cols() != cols_) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    return (to_dense() - D).cwiseAbs().maxCoeff();
}

double ComplexSparseMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

DenseComplexMatrix ComplexSparseMatrix::to_dense() const {
    DenseComplexMatrix D = DenseComplexMatrix::Zero(rows_, cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) {
            D(r, col_idx_[i]) = values_[i];
        }
    }
    return D;
}

Eigen::SparseMatrix<Complex> ComplexSparseMatrix::to_eigen() const {
    Eigen::SparseMatrix<Complex> S(rows_, cols_);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(values_.size());
    for (int r = 0; r < rows_; ++r) {
        for (int i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) {
            trips.emplace_back(r, col_idx_[i], values_[i]);
        }
    }
    S.setFromTriplets(trips.begin(), trips.end());
    S.makeCompressed();
    return S;
}

} // namespace cnpe
