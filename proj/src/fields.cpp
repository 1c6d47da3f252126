#include "cnpe/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cnpe {

double field_gradient_consistency(const AnalyticField& f, double y_lo, double y_hi,
                                  double t_lo, double t_hi, int n_samples,
                                  unsigned long long seed, double fd_step) {
    std::mt19937_64 rng(seed);
    // Keep sample points a step away from the box edges.
    std::uniform_real_distribution<double> uy(y_lo + 2 * fd_step, y_hi - 2 * fd_step);
    std::uniform_real_distribution<double> ut(t_lo + 2 * fd_step, t_hi - 2 * fd_step);
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double y = uy(rng), t = ut(rng);
        const Complex dy = (f.value(y + fd_step, t) - f.value(y - fd_step, t)) / (2.0 * fd_step);
        const Complex dt = (f.value(y, t + fd_step) - f.value(y, t - fd_step)) / (2.0 * fd_step);
        const CVec2 g = f.gradient(y, t);
        worst = std::max({worst, std::abs(g.y - dy), std::abs(g.t - dt)});
    }
    return worst;
}

} // namespace cnpe
