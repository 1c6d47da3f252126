#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cnpe/errors.hpp"
#include "cnpe/mesh.hpp"

using namespace cnpe;

namespace {
const RectDomain kUnit{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
}

TEST_CASE("gauss rule integrates monomials exactly up to degree 2n-1") {
    for (int n = 1; n <= 5; ++n) {
        const GaussRule1D rule = GaussRule1D::make(n);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double quad = 0.0;
            for (std::size_t i = 0; i < rule.points.size(); ++i) {
                quad += rule.weights[i] * std::pow(rule.points[i], p);
            }
            const double exact = p % 2 == 0 ? 2.0 / (p + 1) : 0.0;
            CHECK(std::abs(quad - exact) < 1e-13);
        }
    }
}

TEST_CASE("quadrature order 3 is not exact at degree 6 (sharpness)") {
    const GaussRule1D rule = GaussRule1D::make(3);
    double quad = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        quad += rule.weights[i] * std::pow(rule.points[i], 6);
    }
    CHECK(std::abs(quad - 2.0 / 7.0) > 1e-4);
}

TEST_CASE("reference element partition of unity and gradient sum") {
    const ReferenceElement ref(3);
    for (const auto& qp : ref.quad_points()) {
        double s = 0.0, gx = 0.0, ge = 0.0;
        for (int a = 0; a < 4; ++a) {
            s += qp.shape[a];
            gx += qp.dxi[a];
            ge += qp.deta[a];
        }
        CHECK(std::abs(s - 1.0) < 1e-14);
        CHECK(std::abs(gx) < 1e-14);
        CHECK(std::abs(ge) < 1e-14);
    }
}

TEST_CASE("build_mesh counts: 2x2 on the unit square") {
    const TensorMesh m = TensorMesh::build(kUnit, 2, 2);
    CHECK(m.node_count() == 9);
    CHECK(m.element_count() == 4);
    CHECK(m.robin_edges().size() == 2);
}

TEST_CASE("uniform 20x20 mesh has h = sqrt(2)/20") {
    const TensorMesh m = TensorMesh::build(kUnit, 20, 20);
    CHECK(m.h_max() == doctest::Approx(std::sqrt(2.0) / 20.0).epsilon(1e-14));
    CHECK(m.edge_ratio() == doctest::Approx(1.0));
}

TEST_CASE("coarsest reference-geometry mesh h^-1 = 10") {
    const TensorMesh m = TensorMesh::build(kUnit, 10, 10);
    CHECK(m.h_max() == doctest::Approx(std::sqrt(2.0) / 10.0).epsilon(1e-14));
}

TEST_CASE("h halves exactly when both element counts double") {
    for (int n : {2, 5, 8}) {
        const TensorMesh coarse = TensorMesh::build(kUnit, n, n);
        const TensorMesh fine = TensorMesh::build(kUnit, 2 * n, 2 * n);
        CHECK(fine.h_max() == doctest::Approx(0.5 * coarse.h_max()).epsilon(1e-14));
    }
}

TEST_CASE("robin edges cover y=1 exactly once") {
    const TensorMesh m = TensorMesh::build(kUnit, 3, 5);
    REQUIRE(m.robin_edges().size() == 5);
    double covered = 0.0;
    for (const auto& e : m.robin_edges()) {
        covered += e.theta1 - e.theta0;
        auto [y0, t0] = m.node_coords(e.node0);
        auto [y1, t1] = m.node_coords(e.node1);
        CHECK(y0 == 1.0);
        CHECK(y1 == 1.0);
        CHECK(t0 < t1);
    }
    CHECK(covered == doctest::Approx(1.0));
}

TEST_CASE("boundary classification with corner precedence") {
    const TensorMesh m = TensorMesh::build(kUnit, 2, 2);
    CHECK(m.classify(m.node_index(0, 1)) == NodeClass::Dirichlet);  // (0, 0.5)
    CHECK(m.classify(m.node_index(2, 2)) == NodeClass::Dirichlet);  // (1, theta_max) corner
    CHECK(m.classify(m.node_index(2, 1)) == NodeClass::Robin);      // (1, 0.5)
    CHECK(m.classify(m.node_index(1, 1)) == NodeClass::Interior);   // (0.5, 0.5)
    CHECK_THROWS_AS(m.classify(99), std::out_of_range);
}

TEST_CASE("dofmap counting examples") {
    SUBCASE("2x2 -> 2 free dofs, theta interior") {
        const TensorMesh m = TensorMesh::build(kUnit, 2, 2);
        const DofMap dm = DofMap::build(m);
        CHECK(dm.n_free == 2);
        CHECK(dm.robin_dofs.size() == 1);
    }
    SUBCASE("1x3 -> both free dofs on y=1") {
        const TensorMesh m = TensorMesh::build(kUnit, 1, 3);
        const DofMap dm = DofMap::build(m);
        CHECK(dm.n_free == 2);
        CHECK(dm.robin_dofs.size() == 2);
    }
    SUBCASE("20x20 -> 380 (cross-checked by coordinate classification)") {
        const TensorMesh m = TensorMesh::build(kUnit, 20, 20);
        const DofMap dm = DofMap::build(m);
        CHECK(dm.n_free == 380);
        int free_count = 0;
        for (int node = 0; node < m.node_count(); ++node) {
            const auto [y, t] = m.node_coords(node);
            const bool dirichlet = y == 0.0 || t == 0.0 || t == 1.0;
            if (!dirichlet) ++free_count;
            CHECK((dm.node_to_dof[node] == DofMap::dirichlet) == dirichlet);
        }
        CHECK(free_count == 380);
    }
}

TEST_CASE("dofmap formula n_free = n_y*(n_theta-1) over a grid of sizes") {
    for (int ny = 1; ny <= 6; ++ny) {
        for (int nt = 1; nt <= 6; ++nt) {
            const TensorMesh m = TensorMesh::build(kUnit, ny, nt);
            const DofMap dm = DofMap::build(m);
            CHECK(dm.n_free == ny * (nt - 1));
            // Free dof indices are a bijection onto 0..n_free-1.
            std::vector<bool> seen(dm.n_free, false);
            for (int dof : dm.node_to_dof) {
                if (dof == DofMap::dirichlet) continue;
                REQUIRE(dof >= 0);
                REQUIRE(dof < dm.n_free);
                CHECK(!seen[dof]);
                seen[dof] = true;
            }
            // Robin dofs are exactly the free nodes at y=1.
            int robin_nodes = 0;
            for (int node = 0; node < m.node_count(); ++node) {
                if (m.classify(node) == NodeClass::Robin) ++robin_nodes;
            }
            CHECK(static_cast<int>(dm.robin_dofs.size()) == robin_nodes);
        }
    }
}

TEST_CASE("graded meshes: validation and quasi-uniformity bookkeeping") {
    SUBCASE("non-monotone node list rejected") {
        std::vector<double> bad{0.0, 0.6, 0.5, 1.0};
        CHECK_THROWS_AS(TensorMesh::build(kUnit, 3, 3, bad, std::nullopt), ValidationError);
    }
    SUBCASE("endpoint mismatch rejected") {
        std::vector<double> bad{0.1, 0.5, 1.0};
        CHECK_THROWS_AS(TensorMesh::build(kUnit, 2, 2, bad, std::nullopt), ValidationError);
    }
    SUBCASE("zero element count rejected") {
        CHECK_THROWS_AS(TensorMesh::build(kUnit, 0, 2), ValidationError);
    }
    SUBCASE("edge ratio recorded for a graded mesh") {
        std::vector<double> graded{0.0, 0.1, 0.4, 1.0};
        const TensorMesh m = TensorMesh::build(kUnit, 3, 3, graded, std::nullopt);
        CHECK(m.edge_ratio() == doctest::Approx(0.6 / 0.1));
    }
}

TEST_CASE("element quadrature integrates bilinear-coefficient products exactly") {
    const ReferenceElement ref(3);
    // On an element [0.25,0.75]x[0.5,1.0], integrate y^a t^b for a,b <= 5.
    const double y0 = 0.25, y1 = 0.75, t0 = 0.5, t1 = 1.0;
    auto mono_int = [](double lo, double hi, int p) {
        return (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
    };
    for (int a = 0; a <= 5; ++a) {
        for (int b = 0; b <= 5; ++b) {
            double quad = 0.0;
            for (const auto& qp : ref.quad_points()) {
                const double y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * qp.xi;
                const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * qp.eta;
                quad += qp.w * 0.25 * (y1 - y0) * (t1 - t0) * std::pow(y, a) * std::pow(t, b);
            }
            CHECK(quad == doctest::Approx(mono_int(y0, y1, a) * mono_int(t0, t1, b)).epsilon(1e-13));
        }
    }
}
