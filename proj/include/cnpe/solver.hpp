#pragma once

#include <memory>
#include <string>

#include "cnpe/sparse.hpp"

namespace cnpe {

struct SolveReport {
    int iterations = 0;        // 0 for the direct path (refinement steps otherwise)
    double rel_residual = 0.0; // ||A x - rhs|| / ||rhs||
    std::string method = "sparse_lu";
};

/// Sparse direct factorization (LU). Immutable and shareable; solves are
/// reentrant and bit-identical for identical inputs.
class Factorization {
public:
    /// Throws SolverError on a structurally or numerically singular matrix.
    explicit Factorization(const ComplexSparseMatrix& A);

    int size() const { return n_; }

    /// Solves A x = rhs. The residual is checked after the solve (one step of
    /// iterative refinement if needed); failure to meet `tol` throws
    /// SolverError rather than returning a silently bad x.
    ComplexVector solve(const ComplexVector& rhs, SolveReport* report = nullptr,
                        double tol = 1e-12) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    int n_ = 0;
};

ComplexVector factorize_and_solve(const ComplexSparseMatrix& A, const ComplexVector& rhs,
                                  SolveReport* report = nullptr, double tol = 1e-12);

} // namespace cnpe
