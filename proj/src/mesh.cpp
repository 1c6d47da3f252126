#include "cnpe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cnpe/errors.hpp"

namespace cnpe {

void RectDomain::validate() const {
    if (!(theta_min < theta_max)) throw ValidationError("RectDomain: theta_min < theta_max required");
    if (!(r_min < r_max)) throw ValidationError("RectDomain: r_min < r_max required");
    if (!(y_min < y_max)) throw ValidationError("RectDomain: y_min < y_max required");
}

namespace {

std::vector<double> uniform_nodes(double lo, double hi, int n) {
    std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        nodes[i] = lo + (hi - lo) * static_cast<double>(i) / n;
    }
    nodes.front() = lo;
    nodes.back() = hi;
    return nodes;
}

void check_node_list(const std::vector<double>& nodes, double lo, double hi, const char* axis) {
    if (nodes.size() < 2) throw ValidationError(std::string("build_mesh: ") + axis + " node list too short");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw ValidationError(std::string("build_mesh: ") + axis + " node list not strictly increasing");
        }
    }
    const double tol = 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0);
    if (std::abs(nodes.front() - lo) > tol || std::abs(nodes.back() - hi) > tol) {
        throw ValidationError(std::string("build_mesh: ") + axis + " node list endpoints do not match the domain");
    }
}

} // namespace

TensorMesh TensorMesh::build(const RectDomain& domain, int n_y, int n_theta,
                             const std::optional<std::vector<double>>& y_nodes,
                             const std::optional<std::vector<double>>& theta_nodes) {
    domain.validate();
    if (n_y < 1 || n_theta < 1) throw ValidationError("build_mesh: element counts must be >= 1");

    TensorMesh m;
    m.domain_ = domain;
    m.n_y_ = n_y;
    m.n_theta_ = n_theta;
    m.y_nodes_ = y_nodes ? *y_nodes : uniform_nodes(domain.y_min, domain.y_max, n_y);
    m.theta_nodes_ = theta_nodes ? *theta_nodes : uniform_nodes(domain.theta_min, domain.theta_max, n_theta);
    if (static_cast<int>(m.y_nodes_.size()) != n_y + 1 ||
        static_cast<int>(m.theta_nodes_.size()) != n_theta + 1) {
        throw ValidationError("build_mesh: node list length does not match the element count");
    }
    check_node_list(m.y_nodes_, domain.y_min, domain.y_max, "y");
    check_node_list(m.theta_nodes_, domain.theta_min, domain.theta_max, "theta");

    m.elements_.reserve(static_cast<std::size_t>(n_y) * n_theta);
    double max_edge = 0.0, min_edge = std::numeric_limits<double>::max();
    for (int iy = 0; iy < n_y; ++iy) {
        const double hy = m.y_nodes_[iy + 1] - m.y_nodes_[iy];
        for (int it = 0; it < n_theta; ++it) {
            const double ht = m.theta_nodes_[it + 1] - m.theta_nodes_[it];
            Element e;
            e.nodes = {m.node_index(iy, it), m.node_index(iy + 1, it),
                       m.node_index(iy + 1, it + 1), m.node_index(iy, it + 1)};
            m.elements_.push_back(e);
            m.h_max_ = std::max(m.h_max_, std::hypot(hy, ht));
            max_edge = std::max(max_edge, std::max(hy, ht));
            min_edge = std::min(min_edge, std::min(hy, ht));
        }
    }
    m.edge_ratio_ = max_edge / min_edge;

    // Top-row element edges on y = 1, each exactly once.
    m.robin_edges_.reserve(n_theta);
    for (int it = 0; it < n_theta; ++it) {
        const int e = (n_y - 1) * n_theta + it;
        RobinEdge edge;
        edge.element = e;
        edge.node0 = m.elements_[e].nodes[1];
        edge.node1 = m.elements_[e].nodes[2];
        edge.theta0 = m.theta_nodes_[it];
        edge.theta1 = m.theta_nodes_[it + 1];
        m.robin_edges_.push_back(edge);
    }
    return m;
}

std::pair<int, int> TensorMesh::node_ij(int node) const {
    const int stride = static_cast<int>(theta_nodes_.size());
    return {node / stride, node % stride};
}

std::pair<double, double> TensorMesh::node_coords(int node) const {
    auto [iy, it] = node_ij(node);
    return {y_nodes_[iy], theta_nodes_[it]};
}

NodeClass TensorMesh::classify(int node) const {
    if (node < 0 || node >= node_count()) throw std::out_of_range("TensorMesh::classify: node index out of range");
    auto [iy, it] = node_ij(node);
    // theta extremes and y=0 are Dirichlet; the y=1 corners inherit Dirichlet.
    if (it == 0 || it == n_theta_ || iy == 0) return NodeClass::Dirichlet;
    if (iy == n_y_) return NodeClass::Robin;
    return NodeClass::Interior;
}

std::array<double, 4> TensorMesh::element_box(int e) const {
    const Element& el = elements_[e];
    auto [y0, t0] = node_coords(el.nodes[0]);
    auto [y1, t1] = node_coords(el.nodes[2]);
    return {y0, y1, t0, t1};
}

int TensorMesh::locate(double y, double theta) const {
    const double tol = 1e-12 * (1.0 + std::abs(domain_.theta_max) + std::abs(domain_.theta_min));
    if (y < domain_.y_min - tol || y > domain_.y_max + tol ||
        theta < domain_.theta_min - tol || theta > domain_.theta_max + tol) {
        throw ValidationError("TensorMesh::locate: point outside the domain");
    }
    auto cell = [](const std::vector<double>& nodes, double x) {
        auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        int i = static_cast<int>(it - nodes.begin()) - 1;
        return std::clamp(i, 0, static_cast<int>(nodes.size()) - 2);
    };
    return cell(y_nodes_, y) * n_theta_ + cell(theta_nodes_, theta);
}

DofMap DofMap::build(const TensorMesh& mesh) {
    DofMap dm;
    dm.node_to_dof.assign(mesh.node_count(), dirichlet);
    // Number free dofs row-major in y, theta fastest: bandwidth n_theta - 1.
    for (int iy = 1; iy <= mesh.n_y(); ++iy) {
        for (int it = 1; it <= mesh.n_theta() - 1; ++it) {
            dm.node_to_dof[mesh.node_index(iy, it)] = dm.n_free++;
        }
    }
    for (int it = 1; it <= mesh.n_theta() - 1; ++it) {
        dm.robin_dofs.push_back(dm.node_to_dof[mesh.node_index(mesh.n_y(), it)]);
    }
    return dm;
}

Discretization Discretization::build(const RectDomain& domain, int n_y, int n_theta, int quad_order) {
    return build(TensorMesh::build(domain, n_y, n_theta), quad_order);
}

Discretization Discretization::build(TensorMesh mesh, int quad_order) {
    DofMap dofs = DofMap::build(mesh);
    return Discretization{std::move(mesh), std::move(dofs), ReferenceElement(quad_order)};
}

} // namespace cnpe
