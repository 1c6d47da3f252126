#include <doctest.h>

#include <cstring>
#include <random>

#include "cnpe/errors.hpp"
#include "cnpe/solver.hpp"

using namespace cnpe;

namespace {

ComplexSparseMatrix identity(int n) {
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) t.push_back({i, i, Complex{1.0, 0.0}});
    return ComplexSparseMatrix::from_triplets(n, n, std::move(t));
}

/// Well-conditioned seeded random sparse matrix: diagonally dominant band.
ComplexSparseMatrix random_band(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - 3); j <= std::min(n - 1, i + 3); ++j) {
            if (i == j) continue;
            t.push_back({i, j, 0.2 * Complex{gauss(rng), gauss(rng)}});
        }
        t.push_back({i, i, Complex{4.0 + gauss(rng) * 0.1, gauss(rng)}});
    }
    return ComplexSparseMatrix::from_triplets(n, n, std::move(t));
}

} // namespace

TEST_CASE("identity solve returns the rhs") {
    const auto A = identity(7);
    ComplexVector rhs(7);
    for (int i = 0; i < 7; ++i) rhs[i] = Complex{i + 0.5, -i * 1.0};
    SolveReport rep;
    const ComplexVector x = Factorization(A).solve(rhs, &rep);
    CHECK((x - rhs).norm() == 0.0);
    CHECK(rep.rel_residual <= 1e-12);
}

TEST_CASE("A = 2I, rhs = 1-vector -> x = 0.5") {
    std::vector<Triplet> t;
    for (int i = 0; i < 5; ++i) t.push_back({i, i, Complex{2.0, 0.0}});
    const auto A = ComplexSparseMatrix::from_triplets(5, 5, std::move(t));
    const ComplexVector x = Factorization(A).solve(ComplexVector::Ones(5));
    CHECK((x - ComplexVector::Constant(5, 0.5)).norm() < 1e-12);
}

TEST_CASE("recovers a known solution of a seeded random system") {
    const int n = 50;
    const auto A = random_band(n, 20240717);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    ComplexVector x_known(n);
    for (int i = 0; i < n; ++i) x_known[i] = Complex{gauss(rng), gauss(rng)};
    const ComplexVector rhs = A.multiply(x_known);
    SolveReport rep;
    const ComplexVector x = Factorization(A).solve(rhs, &rep);
    CHECK((x - x_known).norm() / x_known.norm() < 1e-10);
    CHECK(rep.rel_residual <= 1e-12);
}

TEST_CASE("repeated solves are bit-identical") {
    const auto A = random_band(40, 777);
    ComplexVector rhs(40);
    for (int i = 0; i < 40; ++i) rhs[i] = Complex{std::sin(i * 0.7), std::cos(i * 1.3)};
    const ComplexVector x1 = Factorization(A).solve(rhs);
    const ComplexVector x2 = Factorization(A).solve(rhs);
    CHECK(std::memcmp(x1.data(), x2.data(), sizeof(Complex) * 40) == 0);
}

TEST_CASE("zero rhs short-circuits to the zero vector") {
    const auto A = random_band(10, 3);
    SolveReport rep;
    const ComplexVector x = Factorization(A).solve(ComplexVector::Zero(10), &rep);
    CHECK(x.norm() == 0.0);
    CHECK(rep.rel_residual == 0.0);
}

TEST_CASE("singular matrix is refused at factorization") {
    std::vector<Triplet> t;
    t.push_back({0, 0, Complex{1.0, 0.0}}); // row 1 of 2 is empty
    const auto A = ComplexSparseMatrix::from_triplets(2, 2, std::move(t));
    CHECK_THROWS_AS(Factorization{A}, SolverError);
}

TEST_CASE("empty system is a no-op") {
    const auto A = ComplexSparseMatrix::from_triplets(0, 0, {});
    const ComplexVector x = Factorization(A).solve(ComplexVector{});
    CHECK(x.size() == 0);
}

TEST_CASE("sparse matrix plumbing") {
    SUBCASE("duplicate triplets are summed, exact zeros dropped") {
        std::vector<Triplet> t{{0, 0, Complex{1.0, 0.0}},
                               {0, 0, Complex{2.0, 0.0}},
                               {1, 1, Complex{1.0, 0.0}},
                               {1, 1, Complex{-1.0, 0.0}}};
        const auto A = ComplexSparseMatrix::from_triplets(2, 2, std::move(t));
        CHECK(A.nonzeros() == 1);
        CHECK(A.to_dense()(0, 0) == Complex{3.0, 0.0});
    }
    SUBCASE("combine merges patterns") {
        const auto A = identity(3);
        std::vector<Triplet> t{{0, 2, Complex{1.0, 0.0}}};
        const auto B = ComplexSparseMatrix::from_triplets(3, 3, std::move(t));
        const auto C = ComplexSparseMatrix::combine(Complex{2.0, 0.0}, A, Iu, B);
        CHECK(C.to_dense()(0, 0) == Complex{2.0, 0.0});
        CHECK(C.to_dense()(0, 2) == Iu);
    }
    SUBCASE("hermitian defect") {
        std::vector<Triplet> t{{0, 1, Complex{0.0, 1.0}}, {1, 0, Complex{0.0, 1.0}}};
        const auto A = ComplexSparseMatrix::from_triplets(2, 2, std::move(t));
        CHECK(A.hermitian_defect() == doctest::Approx(2.0)); // i vs conj(i)
    }
}
