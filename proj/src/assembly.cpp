#include "cnpe/assembly.hpp"

#include <cmath>
#include <random>

#include "cnpe/errors.hpp"

namespace cnpe {

namespace {

struct ElementGeom {
    double y0, y1, t0, t1;
    double hy, ht, jac; // jac = hy*ht/4

    explicit ElementGeom(const std::array<double, 4>& box)
        : y0(box[0]), y1(box[1]), t0(box[2]), t1(box[3]),
          hy(y1 - y0), ht(t1 - t0), jac(0.25 * hy * ht) {}

    double y(double xi) const { return 0.5 * (y0 + y1) + 0.5 * hy * xi; }
    double theta(double eta) const { return 0.5 * (t0 + t1) + 0.5 * ht * eta; }
};

/// Physical gradients of the four shapes at one tabulated quadrature point.
inline void physical_grads(const ReferenceElement::QuadPoint& qp, const ElementGeom& g,
                           std::array<double, 4>& dy, std::array<double, 4>& dt) {
    for (int a = 0; a < 4; ++a) {
        dy[a] = qp.dxi[a] * 2.0 / g.hy;
        dt[a] = qp.deta[a] * 2.0 / g.ht;
    }
}

template <typename Scatter>
void for_each_element(const TensorMesh& mesh, Scatter&& fn) {
    for (int e = 0; e < mesh.element_count(); ++e) {
        fn(e, ElementGeom(mesh.element_box(e)));
    }
}

} // namespace

Eigen::Matrix4d local_mass_matrix(const ReferenceElement& ref, double hy, double ht) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    const double jac = 0.25 * hy * ht;
    for (const auto& qp : ref.quad_points()) {
        // Grouping keeps the matrix bit-exactly symmetric.
        const double wj = qp.w * jac;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                m(a, b) += wj * (qp.shape[a] * qp.shape[b]);
            }
        }
    }
    return m;
}

Eigen::Matrix4cd local_form_matrix(const ReferenceElement& ref, const std::array<double, 4>& box,
                                   const GeneralProblem& p, double r, double delta) {
    const ElementGeom g(box);
    Eigen::Matrix4cd loc = Eigen::Matrix4cd::Zero();
    std::array<double, 4> dy, dt;
    for (const auto& qp : ref.quad_points()) {
        const double y = g.y(qp.xi), th = g.theta(qp.eta);
        const double w = qp.w * g.jac;
        const SymMat2 D = p.D(r, y, th);
        const Vec2 b = p.b(r, y, th);
        physical_grads(qp, g, dy, dt);
        // row a = test, col c = trial.
        for (int a = 0; a < 4; ++a) {
            for (int c = 0; c < 4; ++c) {
                const double diff = (D.yy * dy[c] + D.yt * dt[c]) * dy[a] +
                                    (D.yt * dy[c] + D.tt * dt[c]) * dt[a];
                const double adv = (b.y * dy[c] + b.t * dt[c]) * qp.shape[a];
                const double mass = qp.shape[c] * qp.shape[a];
                loc(a, c) += w * (Complex{diff + delta * mass, 0.0} + Iu * adv);
            }
        }
    }
    return loc;
}

Eigen::Matrix2cd robin_edge_block(const ReferenceElement& ref, double theta0, double theta1,
                                  const GeneralProblem& p, double r) {
    Eigen::Matrix2cd blk = Eigen::Matrix2cd::Zero();
    const double ht = theta1 - theta0;
    const auto& rule = ref.rule_1d();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double eta = rule.points[q];
        const double th = 0.5 * (theta0 + theta1) + 0.5 * ht * eta;
        const double w = rule.weights[q] * 0.5 * ht;
        const Complex lam = p.lambda(r, th);
        const double L0 = 0.5 * (1.0 - eta), L1 = 0.5 * (1.0 + eta);
        const double LL[2] = {L0, L1};
        for (int a = 0; a < 2; ++a) {
            for (int c = 0; c < 2; ++c) {
                blk(a, c) += -Iu * lam * (w * (LL[c] * LL[a]));
            }
        }
    }
    return blk;
}

namespace {

std::vector<Triplet> scatter_local(const TensorMesh& mesh, const DofMap& dofs, int e,
                                   const Eigen::Matrix4cd& loc) {
    std::vector<Triplet> out;
    const auto& nodes = mesh.elements()[e].nodes;
    for (int a = 0; a < 4; ++a) {
        const int ja = dofs.node_to_dof[nodes[a]];
        if (ja == DofMap::dirichlet) continue;
        for (int c = 0; c < 4; ++c) {
            const int kc = dofs.node_to_dof[nodes[c]];
            if (kc == DofMap::dirichlet) continue;
            out.push_back({ja, kc, loc(a, c)});
        }
    }
    return out;
}

} // namespace

ComplexSparseMatrix assemble_mass(const Discretization& d) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(d.mesh.element_count()) * 16);
    for_each_element(d.mesh, [&](int e, const ElementGeom& g) {
        const Eigen::Matrix4d m = local_mass_matrix(d.ref, g.hy, g.ht);
        auto local = scatter_local(d.mesh, d.dofs, e, m.cast<Complex>());
        trips.insert(trips.end(), local.begin(), local.end());
    });
    return ComplexSparseMatrix::from_triplets(d.dofs.n_free, d.dofs.n_free, std::move(trips));
}

ComplexSparseMatrix assemble_form(const Discretization& d, const GeneralProblem& p,
                                  double r, double delta) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(d.mesh.element_count()) * 16);
    for (int e = 0; e < d.mesh.element_count(); ++e) {
        const Eigen::Matrix4cd loc = local_form_matrix(d.ref, d.mesh.element_box(e), p, r, delta);
        auto local = scatter_local(d.mesh, d.dofs, e, loc);
        trips.insert(trips.end(), local.begin(), local.end());
    }
    for (const auto& edge : d.mesh.robin_edges()) {
        const Eigen::Matrix2cd blk = robin_edge_block(d.ref, edge.theta0, edge.theta1, p, r);
        const int nodes[2] = {edge.node0, edge.node1};
        for (int a = 0; a < 2; ++a) {
            const int ja = d.dofs.node_to_dof[nodes[a]];
            if (ja == DofMap::dirichlet) continue;
            for (int c = 0; c < 2; ++c) {
                const int kc = d.dofs.node_to_dof[nodes[c]];
                if (kc == DofMap::dirichlet) continue;
                trips.push_back({ja, kc, blk(a, c)});
            }
        }
    }
    return ComplexSparseMatrix::from_triplets(d.dofs.n_free, d.dofs.n_free, std::move(trips));
}

ComplexSparseMatrix assemble_beta_mass(const Discretization& d, const GeneralProblem& p,
                                       double r, double delta) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(d.mesh.element_count()) * 16);
    for_each_element(d.mesh, [&](int e, const ElementGeom& g) {
        Eigen::Matrix4cd loc = Eigen::Matrix4cd::Zero();
        for (const auto& qp : d.ref.quad_points()) {
            const Complex coeff = p.beta(r, g.y(qp.xi), g.theta(qp.eta)) + delta;
            const double w = qp.w * g.jac;
            for (int a = 0; a < 4; ++a) {
                for (int c = 0; c < 4; ++c) {
                    loc(a, c) += coeff * (w * (qp.shape[c] * qp.shape[a]));
                }
            }
        }
        auto local = scatter_local(d.mesh, d.dofs, e, loc);
        trips.insert(trips.end(), local.begin(), local.end());
    });
    return ComplexSparseMatrix::from_triplets(d.dofs.n_free, d.dofs.n_free, std::move(trips));
}

ComplexVector assemble_load(const Discretization& d, const GeneralProblem& p, double r) {
    ComplexVector load = ComplexVector::Zero(d.dofs.n_free);
    for_each_element(d.mesh, [&](int e, const ElementGeom& g) {
        const auto& nodes = d.mesh.elements()[e].nodes;
        for (const auto& qp : d.ref.quad_points()) {
            const Complex f = p.F(r, g.y(qp.xi), g.theta(qp.eta));
            if (f == Complex{0.0, 0.0}) continue;
            const double w = qp.w * g.jac;
            for (int a = 0; a < 4; ++a) {
                const int ja = d.dofs.node_to_dof[nodes[a]];
                if (ja != DofMap::dirichlet) load[ja] += f * (w * qp.shape[a]);
            }
        }
    });
    return load;
}

ComplexVector assemble_robin_load(const Discretization& d, const GeneralProblem& p, double r) {
    ComplexVector load = ComplexVector::Zero(d.dofs.n_free);
    if (!p.has_g()) return load;
    const auto& rule = d.ref.rule_1d();
    for (const auto& edge : d.mesh.robin_edges()) {
        const double ht = edge.theta1 - edge.theta0;
        const int nodes[2] = {edge.node0, edge.node1};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double eta = rule.points[q];
            const double th = 0.5 * (edge.theta0 + edge.theta1) + 0.5 * ht * eta;
            const Complex gv = p.g(r, th);
            const double w = rule.weights[q] * 0.5 * ht;
            const double LL[2] = {0.5 * (1.0 - eta), 0.5 * (1.0 + eta)};
            for (int a = 0; a < 2; ++a) {
                const int ja = d.dofs.node_to_dof[nodes[a]];
                if (ja != DofMap::dirichlet) load[ja] += Iu * gv * (w * LL[a]);
            }
        }
    }
    return load;
}

double source_l2_norm(const Discretization& d, const GeneralProblem& p, double r) {
    double acc = 0.0;
    for_each_element(d.mesh, [&](int, const ElementGeom& g) {
        for (const auto& qp : d.ref.quad_points()) {
            const Complex f = p.F(r, g.y(qp.xi), g.theta(qp.eta));
            acc += qp.w * g.jac * std::norm(f);
        }
    });
    return std::sqrt(acc);
}

ComplexSparseMatrix assemble_h1_gram(const Discretization& d) {
    GeneralProblem unit;
    unit.domain = d.mesh.domain();
    unit.D = [](double, double, double) { return SymMat2::identity(); };
    unit.b = [](double, double, double) { return Vec2{}; };
    unit.lambda = [](double, double) { return Complex{0.0, 0.0}; };
    unit.beta = [](double, double, double) { return Complex{0.0, 0.0}; };
    unit.F = [](double, double, double) { return Complex{0.0, 0.0}; };
    return assemble_form(d, unit, d.mesh.domain().r_min, 1.0); // stiffness + mass
}

// ---------------------------------------------------------------------------
// Dense brute-force oracle.
//
// Evaluates the global bilinear hat of a mesh node directly in physical
// coordinates (tent in y times tent in theta) and accumulates entries into
// dense storage with plain nested loops. Shares nothing with the
// reference-element tables except the 1D Gauss rule.
// ---------------------------------------------------------------------------

namespace {

struct Tent {
    double lo, mid, hi; // support [lo, hi] with peak at mid (lo==mid or hi==mid at boundaries)

    double value(double x) const {
        if (x < lo || x > hi) return 0.0;
        if (x <= mid) return lo == mid ? (x == mid ? 1.0 : 0.0) : (x - lo) / (mid - lo);
        return hi == mid ? 0.0 : (hi - x) / (hi - mid);
    }
    double slope(double x) const {
        if (x < lo || x > hi) return 0.0;
        if (x <= mid) return lo == mid ? 0.0 : 1.0 / (mid - lo);
        return hi == mid ? 0.0 : -1.0 / (hi - mid);
    }
};

Tent tent_for(const std::vector<double>& nodes, int i) {
    const int n = static_cast<int>(nodes.size()) - 1;
    return Tent{nodes[std::max(i - 1, 0)], nodes[i], nodes[std::min(i + 1, n)]};
}

} // namespace

DenseOperators dense_oracle_assemble(const TensorMesh& mesh, const DofMap& dofs,
                                     const GeneralProblem& p, double r, double delta,
                                     int quad_order) {
    if (dofs.n_free > 200) {
        throw ValidationError("dense_oracle_assemble: guard exceeded (n_free > 200)");
    }
    const int n = dofs.n_free;
    DenseOperators out{DenseComplexMatrix::Zero(n, n), DenseComplexMatrix::Zero(n, n),
                       DenseComplexMatrix::Zero(n, n)};
    const GaussRule1D rule = GaussRule1D::make(quad_order);

    // Tents per node index along each axis.
    std::vector<Tent> ytents, ttents;
    for (int iy = 0; iy < static_cast<int>(mesh.y_nodes().size()); ++iy) ytents.push_back(tent_for(mesh.y_nodes(), iy));
    for (int it = 0; it < static_cast<int>(mesh.theta_nodes().size()); ++it) ttents.push_back(tent_for(mesh.theta_nodes(), it));

    auto hat = [&](int node, double y, double th, double* gy, double* gt) {
        auto [iy, it] = mesh.node_ij(node);
        const double vy = ytents[iy].value(y), vt = ttents[it].value(th);
        if (gy) *gy = ytents[iy].slope(y) * vt;
        if (gt) *gt = vy * ttents[it].slope(th);
        return vy * vt;
    };

    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto box = mesh.element_box(e);
        const double hy = box[1] - box[0], ht = box[3] - box[2];
        const auto& nodes = mesh.elements()[e].nodes;
        for (std::size_t qa = 0; qa < rule.points.size(); ++qa) {
            for (std::size_t qb = 0; qb < rule.points.size(); ++qb) {
                const double y = 0.5 * (box[0] + box[1]) + 0.5 * hy * rule.points[qa];
                const double th = 0.5 * (box[2] + box[3]) + 0.5 * ht * rule.points[qb];
                const double w = rule.weights[qa] * rule.weights[qb] * 0.25 * hy * ht;
                const SymMat2 D = p.D(r, y, th);
                const Vec2 b = p.b(r, y, th);
                const Complex beta = p.beta(r, y, th);
                for (int a = 0; a < 4; ++a) {
                    const int ja = dofs.node_to_dof[nodes[a]];
                    if (ja == DofMap::dirichlet) continue;
                    double gya, gta;
                    const double va = hat(nodes[a], y, th, &gya, &gta);
                    for (int c = 0; c < 4; ++c) {
                        const int kc = dofs.node_to_dof[nodes[c]];
                        if (kc == DofMap::dirichlet) continue;
                        double gyc, gtc;
                        const double vc = hat(nodes[c], y, th, &gyc, &gtc);
                        out.M(ja, kc) += w * vc * va;
                        const double diff = (D.yy * gyc + D.yt * gtc) * gya +
                                            (D.yt * gyc + D.tt * gtc) * gta;
                        const double adv = (b.y * gyc + b.t * gtc) * va;
                        out.B(ja, kc) += w * (Complex{diff + delta * vc * va, 0.0} + Iu * adv);
                        out.G(ja, kc) += w * (beta + delta) * vc * va;
                    }
                }
            }
        }
    }

    // Robin line integral on y = 1.
    const auto& tn = mesh.theta_nodes();
    for (int it = 0; it < mesh.n_theta(); ++it) {
        const double t0 = tn[it], t1 = tn[it + 1], ht = t1 - t0;
        const int en[2] = {mesh.node_index(mesh.n_y(), it), mesh.node_index(mesh.n_y(), it + 1)};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double th = 0.5 * (t0 + t1) + 0.5 * ht * rule.points[q];
            const double w = rule.weights[q] * 0.5 * ht;
            const Complex lam = p.lambda(r, th);
            for (int a = 0; a < 2; ++a) {
                const int ja = dofs.node_to_dof[en[a]];
                if (ja == DofMap::dirichlet) continue;
                const double va = hat(en[a], 1.0, th, nullptr, nullptr);
                for (int c = 0; c < 2; ++c) {
                    const int kc = dofs.node_to_dof[en[c]];
                    if (kc == DofMap::dirichlet) continue;
                    const double vc = hat(en[c], 1.0, th, nullptr, nullptr);
                    out.B(ja, kc) += -Iu * lam * (w * vc * va);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Empirical coercivity shift.
// ---------------------------------------------------------------------------

CoercivityResult coercivity_delta(const Discretization& d, const GeneralProblem& p,
                                  const CoercivityOptions& opt) {
    if (d.dofs.n_free == 0) return {0.0, 1.0};
    const ComplexSparseMatrix H = assemble_h1_gram(d);
    const RectDomain& dom = d.mesh.domain();

    std::vector<double> r_samples;
    for (int i = 0; i < opt.n_r_samples; ++i) {
        r_samples.push_back(opt.n_r_samples == 1
                                ? 0.5 * (dom.r_min + dom.r_max)
                                : dom.r_min + dom.r_extent() * static_cast<double>(i) / (opt.n_r_samples - 1));
    }

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<ComplexVector> probes;
    probes.reserve(opt.n_vectors);
    for (int v = 0; v < opt.n_vectors; ++v) {
        ComplexVector x(d.dofs.n_free);
        for (int i = 0; i < x.size(); ++i) x[i] = Complex{gauss(rng), gauss(rng)};
        probes.push_back(std::move(x));
    }

    double delta = 0.0;
    while (delta <= opt.delta_cap) {
        double c_min_observed = std::numeric_limits<double>::max();
        for (double r : r_samples) {
            const ComplexSparseMatrix B = assemble_form(d, p, r, delta);
            for (const auto& x : probes) {
                const double num = (x.adjoint() * B.multiply(x))(0).real();
                const double den = (x.adjoint() * H.multiply(x))(0).real();
                c_min_observed = std::min(c_min_observed, num / den);
            }
        }
        if (c_min_observed >= opt.c_min) return {delta, c_min_observed};
        delta = delta == 0.0 ? 0.25 : 2.0 * delta;
    }
    throw ValidationError("coercivity_delta: no shift up to the cap verifies coercivity "
                          "(form appears indefinite; check con0)");
}

} // namespace cnpe
