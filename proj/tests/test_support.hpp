#pragma once

#include <cmath>
#include <random>

#include "cnpe/problem.hpp"

namespace cnpe::testing {

/// Problem with all coefficients zero except what the caller sets.
inline GeneralProblem zero_problem() {
    GeneralProblem p;
    p.domain = RectDomain{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
    p.D = [](double, double, double) { return SymMat2{}; };
    p.b = [](double, double, double) { return Vec2{}; };
    p.beta = [](double, double, double) { return Complex{0.0, 0.0}; };
    p.lambda = [](double, double) { return Complex{0.0, 0.0}; };
    p.F = [](double, double, double) { return Complex{0.0, 0.0}; };
    return p;
}

/// The verification operator: D=I, b=0, beta=1, lambda=i on the unit square.
inline GeneralProblem unit_operator() {
    GeneralProblem p = zero_problem();
    p.D = [](double, double, double) { return SymMat2::identity(); };
    p.beta = [](double, double, double) { return Complex{1.0, 0.0}; };
    p.lambda = [](double, double) { return Iu; };
    p.r_independent_operator = true;
    return p;
}

/// Seeded smooth coefficient set with det(D) > 0 kept by diagonal dominance.
inline GeneralProblem random_smooth_problem(std::uint64_t seed, bool with_g = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.4, 2.2), ph(0.0, 6.28);
    const double a1 = u(rng), a2 = u(rng), a3 = u(rng), a4 = u(rng);
    const double p1 = ph(rng), p2 = ph(rng), p3 = ph(rng), p4 = ph(rng);

    GeneralProblem p = zero_problem();
    p.D = [=](double r, double y, double t) {
        SymMat2 D;
        D.yy = 1.0 + 0.3 * std::sin(a1 * r + a2 * y + p1);
        D.tt = 1.0 + 0.3 * std::cos(a2 * t + a3 * r + p2);
        D.yt = 0.2 * std::sin(a3 * y + a4 * t + p3);
        return D;
    };
    p.b = [=](double r, double y, double t) {
        return Vec2{0.5 * std::sin(a1 * y + a4 * t + p4), 0.4 * std::cos(a2 * r + a3 * y + p1)};
    };
    p.beta = [=](double r, double y, double t) {
        return Complex{0.7 * std::cos(a1 * t + p2), 0.5 * std::sin(a2 * y + a4 * r + p3)};
    };
    p.lambda = [=](double r, double t) {
        return Complex{0.4 * std::sin(a3 * t + p4), 0.8 + 0.3 * std::cos(a4 * r + p1)};
    };
    p.F = [=](double r, double y, double t) {
        return Complex{std::sin(a1 * r + a2 * y + a3 * t), std::cos(a4 * (r + y - t) + p2)};
    };
    if (with_g) {
        p.g = [=](double r, double t) {
            return Complex{0.6 * std::cos(a2 * t + p3), 0.4 * std::sin(a1 * r + p4)};
        };
    }
    return p;
}

} // namespace cnpe::testing
