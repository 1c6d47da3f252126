#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cnpe/fields.hpp"
#include "cnpe/mesh.hpp"

namespace cnpe {

/// Coefficient bundle of the general problem
///
///   u_r = i div(D grad u) + b . grad u + i beta u + F        in [r_min,r_max] x D,
///   u = 0                                                    on y=0, theta=theta_min/max,
///   (1,0)^t (D grad u) = i lambda u + g                      on y=1,
///   u(r_min) = u0,
///
/// with all fields evaluable callables. Coefficient callables must be pure;
/// they may be invoked concurrently.
struct GeneralProblem {
    RectDomain domain;
    std::function<SymMat2(double r, double y, double theta)> D;
    std::function<Vec2(double r, double y, double theta)> b;
    std::function<Complex(double r, double y, double theta)> beta;
    std::function<Complex(double r, double theta)> lambda;
    std::function<Complex(double r, double y, double theta)> F;
    AnalyticField u0;
    std::function<Complex(double r, double theta)> g; // empty => homogeneous Robin

    /// True when D, b, beta, lambda do not depend on r (loads may still vary);
    /// lets the stepper factorize the system matrix once.
    bool r_independent_operator = false;

    bool has_g() const { return static_cast<bool>(g); }
    Complex robin_datum(double r, double theta) const { return has_g() ? g(r, theta) : Complex{0.0, 0.0}; }
};

/// lambda* = b1(r,1,theta) - conj(lambda(r,theta)); equals lambda for the
/// transformed acoustic problem (adjoint Robin coefficient diagnostic).
Complex compute_lambda_star(const GeneralProblem& p, double r, double theta);

/// Bottom depth surface and the partial derivatives the change of variables
/// needs. All callables over (r, theta).
struct Bathymetry {
    std::function<double(double, double)> s;
    std::function<double(double, double)> s_r;
    std::function<double(double, double)> s_theta;
    std::function<double(double, double)> s_thetatheta;

    static Bathymetry flat(double depth);
    /// s = s0 + slope * r (theta-independent).
    static Bathymetry ramp(double s0, double slope);
};

/// Max deviation between supplied first derivatives of s and centered finite
/// differences, sampled on a seeded grid over the given (r, theta) box.
double bathymetry_consistency(const Bathymetry& b,
                              double r_lo, double r_hi,
                              double t_lo, double t_hi,
                              int n_samples = 64,
                              unsigned long long seed = 977,
                              double fd_step = 1e-5);

/// Physical scenario: narrow-angle parabolic equation over variable
/// topography with the Abrahamsson-Kreiss bottom condition.
struct AcousticScenario {
    RectDomain domain;      // theta/r extents; y in [0,1] after transformation
    double k0 = 1.0;        // reference wavenumber (rad/m)
    Bathymetry bathymetry;
    /// Refraction term k0 (n^2 - 1)/2 at physical depth z.
    std::function<Complex(double r, double z, double theta)> beta_psi;
    /// Source field psi_0(z, theta) with gradient (d/dz, d/dtheta).
    std::function<Complex(double z, double theta)> psi0;
    std::function<CVec2(double z, double theta)> psi0_grad;

    double half_wavenumber_inv() const { return 1.0 / (2.0 * k0); } // a = 1/(2 k0)
};

/// Change of variables y = z/s, v = sqrt(s) psi: maps the scenario onto the
/// fixed rectangle and returns the general problem with
///   D = [[a/s^2 + (a/r^2) y^2 (s_t/s)^2, -(a/r^2) y (s_t/s)], [sym, a/r^2]],
///   b = (y s_r/s, 0),  lambda = (1/2)[s_r/s + i (a/r^2)(s_t/s)^2],
///   beta = beta_psi + (a/r^2)(3 s_t^2 - 2 s s_tt)/(4 s^2) - i s_r/(2 s),
///   F = 0,  u0 = sqrt(s(r_min,.)) psi0(y s(r_min,.), .).
/// Throws ValidationError on r_min <= 0 or nonpositive sampled depth.
GeneralProblem transform_to_rectangle(const AcousticScenario& sc);

struct SamplingSpec {
    int n_r = 5;
    int n_y = 9;
    int n_theta = 9;
    double ineq_tol = 1e-12; // slack allowed on con2 <= 0
    double eq_tol = 1e-10;   // |con2| below this everywhere => equality flag
};

struct ConditionReport {
    bool con0_ok = false;      // D symmetric with det(D) > 0 at all samples
    bool con1_ok = false;      // b real (enforced by the type)
    bool con2_ok = false;      // b1(r,1,theta) - 2 Re lambda <= 0 at all samples
    bool con2_equality = false;
    double worst_violation = 0.0; // max of b1(1) - 2 Re lambda over samples
    double worst_r = 0.0, worst_theta = 0.0;
    long samples = 0;

    bool all_ok() const { return con0_ok && con1_ok && con2_ok; }
    std::string summary() const;
};

/// Samples the admissibility conditions (con0)-(con2) on a deterministic grid.
/// Coefficient evaluation failures propagate with the sample location appended.
ConditionReport validate_conditions(const GeneralProblem& p, const SamplingSpec& spec = {});

/// Rectangular table of depths over axis vectors (r_axis x theta_axis).
struct DepthGrid {
    std::vector<double> r_axis;
    std::vector<double> theta_axis;
    std::vector<double> depth; // row-major: depth[i * theta_axis.size() + j]

    double at(int i, int j) const { return depth[static_cast<std::size_t>(i) * theta_axis.size() + j]; }
};

/// Bilinear interpolation of the depth table; derivative fields come from
/// centered differences on the grid nodes, each bilinearly interpolated
/// (C0 across cells). Queries outside the hull throw ValidationError.
Bathymetry bathymetry_from_grid(const DepthGrid& grid);

/// Reads either the long form (`r,theta,depth` header) or a depth matrix with
/// axis vectors in a `<path>.axes.csv` sidecar (lines `r,...` / `theta,...`).
DepthGrid load_bathymetry_csv(const std::string& path);

} // namespace cnpe
