#pragma once

#include <complex>
#include <functional>

namespace cnpe {

using Complex = std::complex<double>;

inline constexpr Complex Iu{0.0, 1.0};

/// Symmetric 2x2 real coefficient matrix in (y, theta) coordinates.
struct SymMat2 {
    double yy = 0.0;
    double yt = 0.0;
    double tt = 0.0;

    double det() const { return yy * tt - yt * yt; }
    static SymMat2 identity() { return {1.0, 0.0, 1.0}; }
};

struct Vec2 {
    double y = 0.0;
    double t = 0.0;
};

struct CVec2 {
    Complex y{0.0, 0.0};
    Complex t{0.0, 0.0};
};

/// Complex scalar field over (y, theta) with an analytic gradient.
struct AnalyticField {
    std::function<Complex(double y, double theta)> value;
    std::function<CVec2(double y, double theta)> gradient;

    bool valid() const { return static_cast<bool>(value) && static_cast<bool>(gradient); }
};

/// Max deviation between the supplied gradient and centered finite
/// differences of the value at `n_samples` seeded interior points.
double field_gradient_consistency(const AnalyticField& f,
                                  double y_lo, double y_hi,
                                  double t_lo, double t_hi,
                                  int n_samples = 32,
                                  unsigned long long seed = 1234,
                                  double fd_step = 1e-5);

} // namespace cnpe
