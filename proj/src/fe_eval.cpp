#include "cnpe/fe_eval.hpp"

#include <cmath>
#include <memory>

namespace cnpe {

namespace {

struct LocalPoint {
    int element;
    double xi, eta, hy, ht;
    std::array<int, 4> nodes;
};

LocalPoint locate_local(const Discretization& d, double y, double theta) {
    const int e = d.mesh.locate(y, theta);
    const auto box = d.mesh.element_box(e);
    LocalPoint lp;
    lp.element = e;
    lp.hy = box[1] - box[0];
    lp.ht = box[3] - box[2];
    lp.xi = 2.0 * (y - box[0]) / lp.hy - 1.0;
    lp.eta = 2.0 * (theta - box[2]) / lp.ht - 1.0;
    lp.nodes = d.mesh.elements()[e].nodes;
    return lp;
}

Complex coeff_at(const Discretization& d, const ComplexVector& coeffs, int node) {
    const int dof = d.dofs.node_to_dof[node];
    return dof == DofMap::dirichlet ? Complex{0.0, 0.0} : coeffs[dof];
}

} // namespace

Complex fe_value(const Discretization& d, const ComplexVector& coeffs, double y, double theta) {
    const LocalPoint lp = locate_local(d, y, theta);
    Complex v{0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
        v += coeff_at(d, coeffs, lp.nodes[a]) * ReferenceElement::shape(a, lp.xi, lp.eta);
    }
    return v;
}

CVec2 fe_gradient(const Discretization& d, const ComplexVector& coeffs, double y, double theta) {
    const LocalPoint lp = locate_local(d, y, theta);
    CVec2 g;
    for (int a = 0; a < 4; ++a) {
        const auto ref = ReferenceElement::shape_grad(a, lp.xi, lp.eta);
        const Complex c = coeff_at(d, coeffs, lp.nodes[a]);
        g.y += c * (ref[0] * 2.0 / lp.hy);
        g.t += c * (ref[1] * 2.0 / lp.ht);
    }
    return g;
}

AnalyticField fe_as_field(const Discretization& d, ComplexVector coeffs) {
    auto shared = std::make_shared<ComplexVector>(std::move(coeffs));
    AnalyticField f;
    f.value = [&d, shared](double y, double th) { return fe_value(d, *shared, y, th); };
    f.gradient = [&d, shared](double y, double th) { return fe_gradient(d, *shared, y, th); };
    return f;
}

double ErrorNorms::h1() const { return std::sqrt(l2 * l2 + h1_semi * h1_semi); }

ErrorNorms fe_error_norms(const Discretization& d, const ComplexVector& coeffs,
                          const AnalyticField& field) {
    double acc_l2 = 0.0, acc_h1 = 0.0;
    for (int e = 0; e < d.mesh.element_count(); ++e) {
        const auto box = d.mesh.element_box(e);
        const double hy = box[1] - box[0], ht = box[3] - box[2];
        const double jac = 0.25 * hy * ht;
        const auto& nodes = d.mesh.elements()[e].nodes;
        for (const auto& qp : d.ref.quad_points()) {
            const double y = 0.5 * (box[0] + box[1]) + 0.5 * hy * qp.xi;
            const double th = 0.5 * (box[2] + box[3]) + 0.5 * ht * qp.eta;
            Complex uh{0.0, 0.0};
            CVec2 gh;
            for (int a = 0; a < 4; ++a) {
                const Complex c = coeff_at(d, coeffs, nodes[a]);
                uh += c * qp.shape[a];
                gh.y += c * (qp.dxi[a] * 2.0 / hy);
                gh.t += c * (qp.deta[a] * 2.0 / ht);
            }
            const Complex diff = field.value(y, th) - uh;
            const CVec2 gex = field.gradient(y, th);
            acc_l2 += qp.w * jac * std::norm(diff);
            acc_h1 += qp.w * jac * (std::norm(gex.y - gh.y) + std::norm(gex.t - gh.t));
        }
    }
    return {std::sqrt(acc_l2), std::sqrt(acc_h1)};
}

double field_l2_norm(const Discretization& d, const AnalyticField& field) {
    double acc = 0.0;
    for (int e = 0; e < d.mesh.element_count(); ++e) {
        const auto box = d.mesh.element_box(e);
        const double hy = box[1] - box[0], ht = box[3] - box[2];
        for (const auto& qp : d.ref.quad_points()) {
            const double y = 0.5 * (box[0] + box[1]) + 0.5 * hy * qp.xi;
            const double th = 0.5 * (box[2] + box[3]) + 0.5 * ht * qp.eta;
            acc += qp.w * 0.25 * hy * ht * std::norm(field.value(y, th));
        }
    }
    return std::sqrt(acc);
}

ComplexVector interpolate(const Discretization& d, const AnalyticField& field) {
    ComplexVector v = ComplexVector::Zero(d.dofs.n_free);
    for (int node = 0; node < d.mesh.node_count(); ++node) {
        const int dof = d.dofs.node_to_dof[node];
        if (dof == DofMap::dirichlet) continue;
        const auto [y, th] = d.mesh.node_coords(node);
        v[dof] = field.value(y, th);
    }
    return v;
}

} // namespace cnpe
