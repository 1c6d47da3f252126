#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cnpe/assembly.hpp"
#include "cnpe/fe_eval.hpp"
#include "cnpe/projection.hpp"
#include "cnpe/solver.hpp"
#include "cnpe/state.hpp"

namespace cnpe {

/// Uniform partition of [r_min, r_max] into N range steps.
struct MarchPlan {
    int n_steps = 1;
    double k = 0.0;            // (r_max - r_min) / N
    double delta = 0.0;        // coercivity shift used for U^0 (cancels in the scheme)
    int record_every = 0;      // 0: snapshot only the final state; m: every m steps
    double stability_c_max = 10.0;

    static MarchPlan uniform(const RectDomain& domain, int n_steps, double delta,
                             int record_every = 0);
    double midpoint(const RectDomain& domain, int n) const;
};

/// One Crank-Nicolson step operator, frozen at the midpoint range r_mid:
///   A+ U^{n+1} = A- U^n + k (F load + Robin load),
///   A+ = M - (k/2)(-iB + iG),  A- = M + (k/2)(-iB + iG),
/// with B, G assembled at r_mid. Refuses to step when the measured stability
/// constant makes 1 - c k nonpositive.
class StepOperator {
public:
    StepOperator(const Discretization& d, const GeneralProblem& p,
                 double r_mid, double k, double delta);

    StateVector advance(const StateVector& state, SolveReport* report = nullptr) const;

    /// Same operator, loads evaluated at `r_loads` instead of the operator's
    /// own midpoint (used when the matrices are r-independent and cached
    /// across steps while F and g still vary with r).
    StateVector advance_with_loads_at(const StateVector& state, double r_loads,
                                      SolveReport* report = nullptr) const;

    const ComplexSparseMatrix& mass() const;
    const ComplexSparseMatrix& a_plus() const;
    const ComplexSparseMatrix& a_minus() const;

    /// Hermitian defect of B - G relative to its magnitude (0 for the exactly
    /// conservative cases).
    double skew_defect() const;
    /// Measured c with Re(v^H (-iB + iG) v) <= c v^H M v on seeded vectors.
    double gain_constant() const;
    double r_mid() const;
    double k() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

StateVector initial_state(const Discretization& d, const GeneralProblem& p, double delta,
                          ProjectionResult* detail = nullptr);

using Observer = std::function<void(int n, double r, const ComplexVector& coeffs)>;

struct MarchResult {
    struct Snapshot {
        int n;
        double r;
        ComplexVector coeffs;
    };
    std::vector<Snapshot> snapshots;   // per record_every, always includes n=0 and n=N
    std::vector<double> m_norms;       // ||U^n||_M for n = 0..N
    double max_f_norm = 0.0;           // max_n ||F(r^{n+1/2})||
    double stability_factor = 0.0;     // max_n ||U^n||_M / (||U^0||_M + max ||F||)
    bool stability_violated = false;   // factor exceeded plan.stability_c_max
    double skew_defect = 0.0;          // from the first step operator
    double gain_constant = 0.0;
    int factorizations = 0;
    int solves = 0;

    const ComplexVector& final_coeffs() const { return snapshots.back().coeffs; }
};

/// Marches the scheme from r_min to r_max. Observers receive every step
/// (immutable snapshot of the coefficients). Aborts with ValidationError on
/// non-finite values (message carries the step index); solver failures
/// propagate as SolverError.
MarchResult march(const Discretization& d, const GeneralProblem& p, const MarchPlan& plan,
                  const Observer& observer = {});

/// E(r^n) = || exact - U^n ||_{L2} by element quadrature.
double error_norm(const Discretization& d, const StateVector& state, const AnalyticField& exact_at_r);

/// Piecewise-linear interpolant of E over recorded values (E sampled at the
/// trajectory nodes; off-nodal r interpolates between the bracketing nodes).
class ErrorCurve {
public:
    void add(double r, double e);
    double eval(double r) const; // throws ValidationError outside the sampled range
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

private:
    std::vector<std::pair<double, double>> samples_;
};

/// M-weighted norm sqrt(Re(v^H M v)).
double m_norm(const ComplexSparseMatrix& M, const ComplexVector& v);

} // namespace cnpe
