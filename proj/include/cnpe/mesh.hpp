#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cnpe/quadrature.hpp"

namespace cnpe {

/// Rectangle [0,1] x [theta_min, theta_max] swept over the range interval
/// [r_min, r_max]. The Dirichlet boundary is {y=0} u {theta=theta_min} u
/// {theta=theta_max}; the Robin boundary is {y=1} with outward normal (1,0).
struct RectDomain {
    double y_min = 0.0;
    double y_max = 1.0;
    double theta_min = 0.0;
    double theta_max = 1.0;
    double r_min = 0.0;
    double r_max = 1.0;

    double theta_extent() const { return theta_max - theta_min; }
    double r_extent() const { return r_max - r_min; }
    double area() const { return (y_max - y_min) * theta_extent(); }

    void validate() const; // throws ValidationError on an empty rectangle
};

enum class NodeClass { Interior, Dirichlet, Robin };

/// Tensor-product quadrilateral mesh of the rectangle.
///
/// Node (iy, it) sits at (y_nodes[iy], theta_nodes[it]); elements store their
/// four corner nodes counterclockwise starting at the (low y, low theta)
/// corner, matching the reference element's local order.
class TensorMesh {
public:
    struct Element {
        std::array<int, 4> nodes; // CCW: (y0,t0), (y1,t0), (y1,t1), (y0,t1)
    };

    /// Edge of a top-row element lying on y = 1. Local nodes 1 and 2 of the
    /// owning element are the edge endpoints (theta0 < theta1).
    struct RobinEdge {
        int element;
        int node0, node1;
        double theta0, theta1;
    };

    static TensorMesh build(const RectDomain& domain, int n_y, int n_theta,
                            const std::optional<std::vector<double>>& y_nodes = std::nullopt,
                            const std::optional<std::vector<double>>& theta_nodes = std::nullopt);

    const RectDomain& domain() const { return domain_; }
    int n_y() const { return n_y_; }
    int n_theta() const { return n_theta_; }
    int node_count() const { return static_cast<int>(y_nodes_.size() * theta_nodes_.size()); }
    int element_count() const { return static_cast<int>(elements_.size()); }

    const std::vector<double>& y_nodes() const { return y_nodes_; }
    const std::vector<double>& theta_nodes() const { return theta_nodes_; }
    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<RobinEdge>& robin_edges() const { return robin_edges_; }

    int node_index(int iy, int it) const { return iy * static_cast<int>(theta_nodes_.size()) + it; }
    std::pair<int, int> node_ij(int node) const;
    std::pair<double, double> node_coords(int node) const;

    NodeClass classify(int node) const; // throws std::out_of_range

    /// Element bounding box: (y0, y1, theta0, theta1).
    std::array<double, 4> element_box(int e) const;

    double h_max() const { return h_max_; }            // max element diameter
    double edge_ratio() const { return edge_ratio_; }  // max edge / min edge (quasi-uniformity)

    /// Element containing (y, theta); clamps onto the closest element at the
    /// boundary. Throws ValidationError outside the closed rectangle.
    int locate(double y, double theta) const;

private:
    RectDomain domain_;
    int n_y_ = 0, n_theta_ = 0;
    std::vector<double> y_nodes_, theta_nodes_;
    std::vector<Element> elements_;
    std::vector<RobinEdge> robin_edges_;
    double h_max_ = 0.0, edge_ratio_ = 1.0;
};

/// Dirichlet elimination map. Free dofs are numbered row-major in y with the
/// theta index fastest, giving matrix bandwidth n_theta - 1.
struct DofMap {
    static constexpr int dirichlet = -1;

    std::vector<int> node_to_dof; // free dof index or `dirichlet`
    int n_free = 0;
    std::vector<int> robin_dofs;  // free dofs on y = 1, ascending

    static DofMap build(const TensorMesh& mesh);
};

/// Mesh, dof map and reference element bundled for the assembly/solve layers.
/// Immutable after construction.
struct Discretization {
    TensorMesh mesh;
    DofMap dofs;
    ReferenceElement ref;

    static Discretization build(const RectDomain& domain, int n_y, int n_theta, int quad_order = 3);
    static Discretization build(TensorMesh mesh, int quad_order = 3);
};

} // namespace cnpe
