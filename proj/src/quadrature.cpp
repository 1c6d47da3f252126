#include "cnpe/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace cnpe {

GaussRule1D GaussRule1D::make(int n) {
    if (n < 1 || n > 20) {
        throw std::invalid_argument("GaussRule1D: order must be in [1,20]");
    }
    GaussRule1D rule;
    rule.points.resize(n);
    rule.weights.resize(n);

    // Newton iteration on the Legendre polynomial P_n.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (n == 1) p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? x : p1;
            double pm = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.points[n - 1 - i] = x; // ascending order
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

double ReferenceElement::shape(int a, double xi, double eta) {
    switch (a) {
        case 0: return 0.25 * (1.0 - xi) * (1.0 - eta);
        case 1: return 0.25 * (1.0 + xi) * (1.0 - eta);
        case 2: return 0.25 * (1.0 + xi) * (1.0 + eta);
        case 3: return 0.25 * (1.0 - xi) * (1.0 + eta);
        default: throw std::out_of_range("ReferenceElement::shape: bad local node");
    }
}

std::array<double, 2> ReferenceElement::shape_grad(int a, double xi, double eta) {
    switch (a) {
        case 0: return {-0.25 * (1.0 - eta), -0.25 * (1.0 - xi)};
        case 1: return {0.25 * (1.0 - eta), -0.25 * (1.0 + xi)};
        case 2: return {0.25 * (1.0 + eta), 0.25 * (1.0 + xi)};
        case 3: return {-0.25 * (1.0 + eta), 0.25 * (1.0 - xi)};
        default: throw std::out_of_range("ReferenceElement::shape_grad: bad local node");
    }
}

ReferenceElement::ReferenceElement(int quad_order)
    : quad_order_(quad_order), rule1d_(GaussRule1D::make(quad_order)) {
    qps_.reserve(static_cast<std::size_t>(quad_order) * quad_order);
    for (int b = 0; b < quad_order; ++b) {
        for (int a = 0; a < quad_order; ++a) {
            QuadPoint qp;
            qp.xi = rule1d_.points[a];
            qp.eta = rule1d_.points[b];
            qp.w = rule1d_.weights[a] * rule1d_.weights[b];
            for (int i = 0; i < n_nodes; ++i) {
                qp.shape[i] = shape(i, qp.xi, qp.eta);
                auto g = shape_grad(i, qp.xi, qp.eta);
                qp.dxi[i] = g[0];
                qp.deta[i] = g[1];
            }
            qps_.push_back(qp);
        }
    }
}

} // namespace cnpe
