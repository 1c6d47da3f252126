#include "cnpe/stepper.hpp"

#include <cmath>
#include <random>

#include "cnpe/errors.hpp"

namespace cnpe {

MarchPlan MarchPlan::uniform(const RectDomain& domain, int n_steps, double delta, int record_every) {
    if (n_steps < 1) throw ValidationError("MarchPlan: n_steps must be >= 1");
    MarchPlan plan;
    plan.n_steps = n_steps;
    plan.k = domain.r_extent() / n_steps;
    plan.delta = delta;
    plan.record_every = record_every;
    if (std::abs(plan.k * n_steps - domain.r_extent()) > 1e-14 * domain.r_extent()) {
        throw ValidationError("MarchPlan: k*N does not reproduce the range extent");
    }
    return plan;
}

double MarchPlan::midpoint(const RectDomain& domain, int n) const {
    return domain.r_min + (n + 0.5) * k;
}

double m_norm(const ComplexSparseMatrix& M, const ComplexVector& v) {
    if (v.size() == 0) return 0.0;
    return std::sqrt(std::max(0.0, (v.adjoint() * M.multiply(v))(0).real()));
}

struct StepOperator::Impl {
    ComplexSparseMatrix M, a_plus, a_minus;
    Factorization factor;
    const Discretization* disc;
    const GeneralProblem* problem;
    double r_mid, k;
    double skew_defect = 0.0;
    double gain_constant = 0.0;

    Impl(const ComplexSparseMatrix& m, ComplexSparseMatrix ap, ComplexSparseMatrix am,
         const Discretization& d, const GeneralProblem& p, double rm, double kk)
        : M(m), a_plus(std::move(ap)), a_minus(std::move(am)), factor(a_plus),
          disc(&d), problem(&p), r_mid(rm), k(kk) {}
};

StepOperator::StepOperator(const Discretization& d, const GeneralProblem& p,
                           double r_mid, double k, double delta) {
    if (!(k > 0.0)) throw ValidationError("StepOperator: k must be positive");
    const ComplexSparseMatrix M = assemble_mass(d);
    const ComplexSparseMatrix B = assemble_form(d, p, r_mid, delta);
    const ComplexSparseMatrix G = assemble_beta_mass(d, p, r_mid, delta);
    // S := -iB + iG = -i (B - G); the delta shift cancels inside B - G.
    const ComplexSparseMatrix BmG = ComplexSparseMatrix::combine(1.0, B, -1.0, G);
    ComplexSparseMatrix a_plus = ComplexSparseMatrix::combine(1.0, M, Iu * (k / 2.0), BmG);
    ComplexSparseMatrix a_minus = ComplexSparseMatrix::combine(1.0, M, -Iu * (k / 2.0), BmG);

    auto impl = std::make_shared<Impl>(M, std::move(a_plus), std::move(a_minus), d, p, r_mid, k);

    const double scale = BmG.max_abs();
    impl->skew_defect = scale > 0.0 ? BmG.hermitian_defect() / scale : 0.0;

    // Empirical constant of Re(v^H S v) <= c v^H M v, used for the (1-ck)
    // stability guard of the a priori bound.
    if (d.dofs.n_free > 0) {
        std::mt19937_64 rng(97531);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double c = 0.0;
        for (int probe = 0; probe < 8; ++probe) {
            ComplexVector v(d.dofs.n_free);
            for (int i = 0; i < v.size(); ++i) v[i] = Complex{gauss(rng), gauss(rng)};
            const Complex s = (v.adjoint() * BmG.multiply(v))(0) * (-Iu);
            const double m = (v.adjoint() * M.multiply(v))(0).real();
            c = std::max(c, s.real() / m);
        }
        impl->gain_constant = c;
    }
    if (1.0 - impl->gain_constant * k <= 0.0) {
        throw ValidationError("StepOperator: range step too large for the stability bound "
                              "(1 - c k <= 0 with measured c = " +
                              std::to_string(impl->gain_constant) + ")");
    }
    impl_ = std::move(impl);
}

const ComplexSparseMatrix& StepOperator::mass() const { return impl_->M; }
const ComplexSparseMatrix& StepOperator::a_plus() const { return impl_->a_plus; }
const ComplexSparseMatrix& StepOperator::a_minus() const { return impl_->a_minus; }
double StepOperator::skew_defect() const { return impl_->skew_defect; }
double StepOperator::gain_constant() const { return impl_->gain_constant; }
double StepOperator::r_mid() const { return impl_->r_mid; }
double StepOperator::k() const { return impl_->k; }

StateVector StepOperator::advance(const StateVector& state, SolveReport* report) const {
    return advance_with_loads_at(state, impl_->r_mid, report);
}

StateVector StepOperator::advance_with_loads_at(const StateVector& state, double r_loads,
                                                SolveReport* report) const {
    const Impl& im = *impl_;
    ComplexVector rhs = im.a_minus.multiply(state.coeffs);
    rhs += im.k * assemble_load(*im.disc, *im.problem, r_loads);
    if (im.problem->has_g()) {
        rhs += im.k * assemble_robin_load(*im.disc, *im.problem, r_loads);
    }
    if (!rhs.allFinite()) {
        throw ValidationError("step: non-finite right-hand side (loads at r=" +
                              std::to_string(r_loads) + ")");
    }
    StateVector next;
    next.coeffs = im.factor.solve(rhs, report);
    next.r = state.r + im.k;
    return next;
}

MarchResult march(const Discretization& d, const GeneralProblem& p, const MarchPlan& plan,
                  const Observer& observer) {
    const RectDomain& dom = p.domain;
    MarchResult res;

    ProjectionResult init;
    StateVector state = initial_state(d, p, plan.delta, &init);

    const ComplexSparseMatrix M = assemble_mass(d);
    const double u0_norm = m_norm(M, state.coeffs);
    res.m_norms.push_back(u0_norm);

    auto record = [&](int n, const StateVector& s) {
        res.snapshots.push_back({n, s.r, s.coeffs});
    };
    record(0, state);
    if (observer) observer(0, state.r, state.coeffs);

    if (p.r_independent_operator && plan.n_steps > 1) {
        // The caching contract: B and G must not vary between midpoints.
        const double r0 = plan.midpoint(dom, 0), r1 = plan.midpoint(dom, plan.n_steps - 1);
        const auto B0 = assemble_form(d, p, r0, plan.delta);
        const auto diff = ComplexSparseMatrix::combine(1.0, B0, -1.0,
                                                       assemble_form(d, p, r1, plan.delta));
        if (diff.max_abs() > 1e-12 * B0.max_abs()) {
            throw ValidationError("march: r_independent_operator is set but the form varies with r");
        }
    }

    std::unique_ptr<StepOperator> op;
    double max_norm = u0_norm;
    for (int n = 0; n < plan.n_steps; ++n) {
        const double r_mid = plan.midpoint(dom, n);
        try {
            if (!op || !p.r_independent_operator) {
                op = std::make_unique<StepOperator>(d, p, r_mid, plan.k, plan.delta);
                ++res.factorizations;
                if (n == 0) {
                    res.skew_defect = op->skew_defect();
                    res.gain_constant = op->gain_constant();
                }
            }
            res.max_f_norm = std::max(res.max_f_norm, source_l2_norm(d, p, r_mid));
            state = op->advance_with_loads_at(state, r_mid);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(e.what()) + " (march step " + std::to_string(n + 1) +
                                  ")");
        }
        ++res.solves;
        if (!state.coeffs.allFinite()) {
            throw ValidationError("march: non-finite state at step " + std::to_string(n + 1));
        }
        const double norm = m_norm(M, state.coeffs);
        res.m_norms.push_back(norm);
        max_norm = std::max(max_norm, norm);

        const int n1 = n + 1;
        if (observer) observer(n1, state.r, state.coeffs);
        if (n1 == plan.n_steps || (plan.record_every > 0 && n1 % plan.record_every == 0)) {
            record(n1, state);
        }
    }

    const double denom = u0_norm + res.max_f_norm;
    res.stability_factor = denom > 0.0 ? max_norm / denom : 0.0;
    res.stability_violated = res.stability_factor > plan.stability_c_max;
    return res;
}

StateVector initial_state(const Discretization& d, const GeneralProblem& p, double delta,
                          ProjectionResult* detail) {
    ProjectionResult proj = elliptic_project(d, p, p.domain.r_min, delta, p.u0);
    if (detail) *detail = proj;
    return proj.state;
}

double error_norm(const Discretization& d, const StateVector& state, const AnalyticField& exact_at_r) {
    return fe_error_norms(d, state.coeffs, exact_at_r).l2;
}

void ErrorCurve::add(double r, double e) {
    if (!samples_.empty() && r <= samples_.back().first) {
        throw ValidationError("ErrorCurve: samples must be added with increasing r");
    }
    samples_.push_back({r, e});
}

double ErrorCurve::eval(double r) const {
    if (samples_.empty()) throw ValidationError("ErrorCurve: no samples");
    const double tol = 1e-12 * (1.0 + std::abs(samples_.back().first));
    if (r < samples_.front().first - tol || r > samples_.back().first + tol) {
        throw ValidationError("ErrorCurve: r outside the sampled range");
    }
    if (r <= samples_.front().first) return samples_.front().second;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (r <= samples_[i].first + tol) {
            const auto& [r0, e0] = samples_[i - 1];
            const auto& [r1, e1] = samples_[i];
            const double t = (r - r0) / (r1 - r0);
            return (1.0 - t) * e0 + t * e1;
        }
    }
    return samples_.back().second;
}

} // namespace cnpe
