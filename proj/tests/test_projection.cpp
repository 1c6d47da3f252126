#include <doctest.h>

#include <cmath>

#include "cnpe/errors.hpp"
#include "cnpe/fe_eval.hpp"
#include "cnpe/manufactured.hpp"
#include "cnpe/projection.hpp"
#include "test_support.hpp"

using namespace cnpe;
using namespace cnpe::testing;

namespace {
const RectDomain kUnit{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
}

TEST_CASE("projection reproduces a hat function already in S_h") {
    const Discretization d = Discretization::build(kUnit, 4, 4);
    const GeneralProblem p = unit_operator();
    // Hat centered at an interior node; its tents have kinks only on mesh lines.
    auto tent = [](double x, double c, double h) {
        const double t = 1.0 - std::abs(x - c) / h;
        return t > 0.0 ? t : 0.0;
    };
    auto slope = [](double x, double c, double h) {
        if (std::abs(x - c) >= h) return 0.0;
        return x < c ? 1.0 / h : -1.0 / h;
    };
    AnalyticField hat;
    hat.value = [tent](double y, double t) { return Complex{tent(y, 0.5, 0.25) * tent(t, 0.5, 0.25), 0.0}; };
    hat.gradient = [tent, slope](double y, double t) {
        return CVec2{Complex{slope(y, 0.5, 0.25) * tent(t, 0.5, 0.25), 0.0},
                     Complex{tent(y, 0.5, 0.25) * slope(t, 0.5, 0.25), 0.0}};
    };
    const auto res = elliptic_project(d, p, 0.0, 0.0, hat);
    const ComplexVector nodal = interpolate(d, hat);
    CHECK((res.state.coeffs - nodal).norm() < 1e-12);
    CHECK(!res.trace_warning);
}

TEST_CASE("projection of zero is zero") {
    const Discretization d = Discretization::build(kUnit, 3, 3);
    AnalyticField zero;
    zero.value = [](double, double) { return Complex{0.0, 0.0}; };
    zero.gradient = [](double, double) { return CVec2{}; };
    const auto res = elliptic_project(d, unit_operator(), 0.0, 0.0, zero);
    CHECK(res.state.coeffs.norm() == 0.0);
}

TEST_CASE("Galerkin orthogonality: B(R_h v - v, phi_j) vanishes") {
    const Discretization d = Discretization::build(kUnit, 5, 5);
    const GeneralProblem p = random_smooth_problem(4242);
    const ManufacturedCase mc = reference_case();
    const AnalyticField v = mc.exact(0.0);
    const double r = 0.3, delta = 2.0;
    const auto res = elliptic_project(d, p, r, delta, v);
    // B(r; R_h v, phi_j) - B(r; v, phi_j) = (B x - rhs)_j by construction.
    const auto B = assemble_form(d, p, r, delta);
    const ComplexVector rhs = assemble_projection_rhs(d, p, r, delta, v);
    const ComplexVector defect = B.multiply(res.state.coeffs) - rhs;
    const double scale = rhs.norm();
    CHECK(defect.norm() < 1e-10 * scale);
}

TEST_CASE("Dirichlet trace violation warns but proceeds") {
    const Discretization d = Discretization::build(kUnit, 3, 3);
    AnalyticField one;
    one.value = [](double, double) { return Complex{1.0, 0.0}; };
    one.gradient = [](double, double) { return CVec2{}; };
    const auto res = elliptic_project(d, unit_operator(), 0.0, 0.0, one);
    CHECK(res.trace_warning);
    CHECK(res.dirichlet_trace_max == doctest::Approx(1.0));
    CHECK(res.state.coeffs.allFinite());
}

TEST_CASE("projection rate study on the reference field") {
    const ManufacturedCase mc = reference_case();
    ProjectionStudyOptions opt;
    opt.r = 0.0;
    opt.delta = 0.0;
    const auto rep = projection_rate_study(mc.problem, mc.exact, mc.exact_dr, {10, 20, 40}, opt);
    REQUIRE(rep.rows.size() == 3);
    CHECK(!rep.saturated);
    CHECK(rep.slopes.at("L2") == doctest::Approx(2.0).epsilon(0.1));
    CHECK(rep.slopes.at("H1") == doctest::Approx(1.0).epsilon(0.15));
    CHECK(rep.slopes.at("drL2") == doctest::Approx(2.0).epsilon(0.1));
    // Pairwise rates land in the acceptance bands as well.
    for (double rate : rep.rates.at("L2")) CHECK(rate == doctest::Approx(2.0).epsilon(0.12));
}

TEST_CASE("nested piecewise-bilinear field saturates at solver tolerance") {
    const ManufacturedCase mc = tent_case();
    ProjectionStudyOptions opt;
    opt.r = 0.0;
    opt.delta = 1.0; // tent case has D = 0; the shift alone carries the form
    const auto rep = projection_rate_study(mc.problem, mc.exact, mc.exact_dr, {2, 4, 8}, opt);
    CHECK(rep.saturated);
    for (const auto& row : rep.rows) {
        CHECK(row.errors.at("L2") < 1e-10);
    }
}

TEST_CASE("projection_rate_study requires at least 3 resolutions") {
    const ManufacturedCase mc = reference_case();
    ProjectionStudyOptions opt;
    CHECK_THROWS_AS(projection_rate_study(mc.problem, mc.exact, mc.exact_dr, {4, 8}, opt),
                    ValidationError);
}
