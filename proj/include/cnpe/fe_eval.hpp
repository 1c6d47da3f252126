#pragma once

#include "cnpe/fields.hpp"
#include "cnpe/mesh.hpp"
#include "cnpe/sparse.hpp"

namespace cnpe {

/// Value of the FE expansion sum_k U[dof(k)] phi_k at (y, theta); Dirichlet
/// nodes contribute zero.
Complex fe_value(const Discretization& d, const ComplexVector& coeffs, double y, double theta);

CVec2 fe_gradient(const Discretization& d, const ComplexVector& coeffs, double y, double theta);

/// Wraps a coefficient vector as an AnalyticField (copies the vector).
AnalyticField fe_as_field(const Discretization& d, ComplexVector coeffs);

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double h1() const;
};

/// || field - U_h || by element quadrature (L2 and H1 seminorm together).
ErrorNorms fe_error_norms(const Discretization& d, const ComplexVector& coeffs,
                          const AnalyticField& field);

/// L2 norm of an analytic field over the mesh by element quadrature.
double field_l2_norm(const Discretization& d, const AnalyticField& field);

/// Nodal interpolant of a field (free dofs only).
ComplexVector interpolate(const Discretization& d, const AnalyticField& field);

} // namespace cnpe
