#pragma once

#include <functional>
#include <vector>

#include "cnpe/assembly.hpp"
#include "cnpe/report.hpp"
#include "cnpe/solver.hpp"
#include "cnpe/state.hpp"

namespace cnpe {

struct ProjectionResult {
    StateVector state;
    SolveReport solve;
    double dirichlet_trace_max = 0.0; // max |v| sampled on the Dirichlet boundary
    bool trace_warning = false;       // v violated the Dirichlet trace beyond tolerance
};

/// Elliptic projection R_h(r) v: solves B(r) x = rhs with
/// rhs_j = form(r; v, phi_j) computed by quadrature from the analytic v and
/// its gradient (the Robin term uses the trace of v at y=1). `delta` must be
/// at least the coercivity threshold or the solve may fail.
ProjectionResult elliptic_project(const Discretization& d, const GeneralProblem& p,
                                  double r, double delta, const AnalyticField& v,
                                  double trace_tol = 1e-8);

/// Right-hand side of the projection system (exposed for the Galerkin
/// orthogonality tests).
ComplexVector assemble_projection_rhs(const Discretization& d, const GeneralProblem& p,
                                      double r, double delta, const AnalyticField& v);

struct ProjectionStudyOptions {
    double r = 0.0;          // range at which to project
    double delta = 0.0;
    int quad_order = 3;
    double eps_rel = 1e-4;   // r-derivative differencing step = eps_rel * r_extent
    double saturation_tol = 1e-9;
};

/// Rates of || R_h v - v || (expect tau+1), || . ||_1 (expect tau) and of the
/// r-derivative error || d/dr (R_h v - v) || (expect tau+1), measured over a
/// list of resolutions. The r-derivative of the projection is central-
/// differenced in r; the exact derivative dv_dr is analytic. Requires at
/// least 3 resolutions.
StudyReport projection_rate_study(const GeneralProblem& p,
                                  const std::function<AnalyticField(double r)>& v_of_r,
                                  const std::function<AnalyticField(double r)>& dv_dr,
                                  const std::vector<int>& h_invs,
                                  const ProjectionStudyOptions& opt);

} // namespace cnpe
