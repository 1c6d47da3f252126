#pragma once

#include <cstdint>

#include "cnpe/mesh.hpp"
#include "cnpe/problem.hpp"
#include "cnpe/sparse.hpp"

namespace cnpe {

// Matrix convention used throughout: row = test function index (the
// conjugated slot of the sesquilinear form), column = trial index, i.e.
// B(j,k) = form(r; phi_k, phi_j). With the real nodal basis this means
// w^H B v = form(r; v, w) for coefficient vectors v, w.

/// Local 4x4 mass matrix of one element (rows/cols in CCW corner order).
Eigen::Matrix4d local_mass_matrix(const ReferenceElement& ref, double hy, double ht);

/// Local 4x4 matrix of the full sesquilinear form (volume terms only):
/// (D grad phi_k, grad phi_j) + i (b . grad phi_k, phi_j) + delta (phi_k, phi_j),
/// coefficients evaluated at the quadrature points of the given element box.
Eigen::Matrix4cd local_form_matrix(const ReferenceElement& ref,
                                   const std::array<double, 4>& box,
                                   const GeneralProblem& p, double r, double delta);

/// 2x2 Robin edge block -i * integral of lambda(r,theta) L_k L_j over the edge
/// [theta0, theta1] at y=1 (1D hats L, same Gauss order as the volume rule).
Eigen::Matrix2cd robin_edge_block(const ReferenceElement& ref,
                                  double theta0, double theta1,
                                  const GeneralProblem& p, double r);

/// Mass matrix on free dofs (Dirichlet rows/cols eliminated).
ComplexSparseMatrix assemble_mass(const Discretization& d);

/// Matrix of the form B(r; ., .) including the Robin line integral on y=1
/// and the +delta(v,w) shift.
ComplexSparseMatrix assemble_form(const Discretization& d, const GeneralProblem& p,
                                  double r, double delta);

/// Weighted mass G(j,k) = ((beta(r)+delta) phi_k, phi_j).
ComplexSparseMatrix assemble_beta_mass(const Discretization& d, const GeneralProblem& p,
                                       double r, double delta);

/// Domain load: entry j = (F(r), phi_j).
ComplexVector assemble_load(const Discretization& d, const GeneralProblem& p, double r);

/// Robin load: entry j = i * integral of g(r,theta) phi_j(1,theta) dtheta,
/// nonzero only on robin dofs. Zero vector when p.g is absent.
ComplexVector assemble_robin_load(const Discretization& d, const GeneralProblem& p, double r);

/// L2(D) norm of F(r, ., .) by element quadrature.
double source_l2_norm(const Discretization& d, const GeneralProblem& p, double r);

struct DenseOperators {
    DenseComplexMatrix M, B, G;
};

/// Brute-force oracle: accumulates the same operators into dense storage,
/// evaluating global bilinear hat functions in physical coordinates (no
/// reference-element tables, no sparsity machinery). Guarded to
/// n_free <= 200; throws ValidationError beyond that.
DenseOperators dense_oracle_assemble(const TensorMesh& mesh, const DofMap& dofs,
                                     const GeneralProblem& p, double r, double delta,
                                     int quad_order = 3);

struct CoercivityOptions {
    int n_r_samples = 3;
    int n_vectors = 100;
    std::uint64_t seed = 20240801;
    double c_min = 1e-8;     // required positive constant in Re B(v,v) >= c ||v||_1^2
    double delta_cap = 1e6;
};

struct CoercivityResult {
    double delta_hat = 0.0;
    double c_observed = 0.0; // min over samples of Re B(v,v) / ||v||_1^2
};

/// Searches a doubling schedule of shifts delta until the coercivity bound
/// verifies on randomized discrete vectors at sampled ranges. Deterministic
/// given the seed. Throws ValidationError if the cap is exceeded (form
/// appears indefinite, e.g. con0 violated).
CoercivityResult coercivity_delta(const Discretization& d, const GeneralProblem& p,
                                  const CoercivityOptions& opt = {});

/// Discrete H1 Gram matrix (unit stiffness + mass): v^H H v = ||v_h||_1^2.
ComplexSparseMatrix assemble_h1_gram(const Discretization& d);

} // namespace cnpe
