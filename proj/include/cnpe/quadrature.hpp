#pragma once

#include <array>
#include <vector>

namespace cnpe {

/// Gauss-Legendre rule on [-1,1]. Exact for polynomials of degree <= 2n-1.
struct GaussRule1D {
    std::vector<double> points;
    std::vector<double> weights;

    static GaussRule1D make(int n);
};

/// Bilinear (Q1) reference element on [-1,1]^2 with a tensor Gauss rule.
///
/// Local corner order is counterclockwise: (-1,-1), (1,-1), (1,1), (-1,1).
/// Shape values and reference gradients are tabulated at the quadrature
/// points once at construction.
class ReferenceElement {
public:
    static constexpr int n_nodes = 4;

    struct QuadPoint {
        double xi, eta, w;                    // tensor weight (product of 1D weights)
        std::array<double, n_nodes> shape;    // N_a(xi,eta)
        std::array<double, n_nodes> dxi;      // dN_a/dxi
        std::array<double, n_nodes> deta;     // dN_a/deta
    };

    explicit ReferenceElement(int quad_order = 3);

    int degree() const { return 1; }
    int quad_order() const { return quad_order_; }
    const std::vector<QuadPoint>& quad_points() const { return qps_; }
    const GaussRule1D& rule_1d() const { return rule1d_; }

    static double shape(int a, double xi, double eta);
    static std::array<double, 2> shape_grad(int a, double xi, double eta);

private:
    int quad_order_;
    GaussRule1D rule1d_;
    std::vector<QuadPoint> qps_;
};

} // namespace cnpe
