#pragma once

#include <functional>
#include <string>

#include "cnpe/problem.hpp"

namespace cnpe {

/// Exact solution plus the coefficient bundle that manufactures it: F and the
/// Robin datum g are analytic consequences of u, so the discrete solution can
/// be compared against u directly.
struct ManufacturedCase {
    std::string name;
    GeneralProblem problem;
    std::function<AnalyticField(double r)> exact;    // u(r, ., .)
    std::function<AnalyticField(double r)> exact_dr; // d/dr u(r, ., .)
};

/// The reference verification case on (0,1)^2, r in [0,1]:
/// D = I, b = 0, beta = 1, lambda = i and
///   u(r,y,theta) = e^{2r} y (e^{-y} - 1) theta (1-theta)^3,
/// with F = u_r - i Lap(u) - i u and the (nonzero) Robin datum
/// g = u_y(r,1,.) - i lambda u(r,1,.) derived analytically.
ManufacturedCase reference_case();

/// Piecewise-bilinear exact solution (tent in y times tent in theta, peak at
/// the midpoints) that lies in S_h on every mesh with even n_y, n_theta:
/// errors saturate at solver tolerance, which exercises the reproduction
/// paths of projection and stepper.
ManufacturedCase tent_case();

/// Max strong-form residual |u_r - i div(D grad u) - b.grad u - i beta u - F|
/// at seeded sample points, with every derivative of u taken by finite
/// differences of `exact` (independent of the hand-coded F and gradients).
double manufactured_residual(const ManufacturedCase& c, int n_samples = 40,
                             unsigned long long seed = 4242);

/// Max |g - (eta^t D grad u - i lambda u)| at y=1 with u_y finite-differenced.
double robin_datum_residual(const ManufacturedCase& c, int n_samples = 40,
                            unsigned long long seed = 4243);

} // namespace cnpe
