// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are fixed here, not calibrated at run time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cnpe/assembly.hpp"
#include "cnpe/harness.hpp"
#include "cnpe/projection.hpp"
#include "cnpe/stepper.hpp"
#include "test_support.hpp"

using namespace cnpe;
using namespace cnpe::testing;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& what, const std::string& detail,
            double seconds) {
    std::printf("[%d] %s %s (%s; %.1fs)\n", idx, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double run_criterion(const std::function<bool(std::string&)>& body, int idx,
                     const std::string& what) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(idx, pass, what, detail, secs);
    return secs;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Stability factors collected from the criterion 1-2 runs for criterion 7.
std::vector<double> g_stability_factors;

bool criterion1_spatial(std::string& detail) {
    const ManufacturedCase c = reference_case();
    const std::vector<int> h_invs{10, 20, 40, 80};
    const std::vector<double> ranges{0.1, 0.5, 1.0};
    const StudyReport rep = run_spatial_study(c, h_invs, 400, ranges);

    bool ok = true;
    std::string rates_str;
    for (const auto& col : rep.columns) {
        const auto& rates = rep.rates.at(col);
        rates_str += col + ":";
        for (std::size_t i = 0; i < rates.size(); ++i) {
            const double r = rates[i];
            rates_str += " " + fmt(r);
            if (!(r >= 1.90 && r <= 2.35)) ok = false;
            // Monotone approach to 2 with a small noise allowance.
            if (i > 0 && !(std::abs(r - 2.0) <= std::abs(rates[i - 1] - 2.0) + 0.05)) ok = false;
        }
        rates_str += "; ";
    }
    for (const auto& row : rep.rows) g_stability_factors.push_back(row.stability_factor);

    // E magnitudes compared informatively against Table 1 at r = 1.0.
    const double table1_r1[] = {7.8266e-2, 1.6921e-2, 3.8920e-3, 9.2042e-4};
    std::string ratio_str = "E/Table1 at r=1:";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        ratio_str += " " + fmt(rep.rows[i].errors.at("E(1)") / table1_r1[i]);
    }
    detail = "rates " + rates_str + ratio_str;
    return ok;
}

bool criterion2_temporal(std::string& detail) {
    const ManufacturedCase c = reference_case();
    const StudyReport rep = run_temporal_study(c, 20, {144, 192, 240, 288}, 30);
    const auto& rates = rep.rates.at("Estar");

    bool in_band = true;
    for (double r : rates) {
        if (!(r >= 1.9 && r <= 3.0)) in_band = false;
    }
    // "Trending toward 2": either the sequence decreases toward 2 like the
    // paper's 2.74, 2.31, 2.19, or every rate already sits within [1.9, 2.5];
    // the final pair must land in [1.9, 2.6].
    bool decreasing = true;
    for (std::size_t i = 1; i < rates.size(); ++i) {
        if (rates[i] > rates[i - 1] + 0.05) decreasing = false;
    }
    bool all_near_two = true;
    for (double r : rates) {
        if (!(r >= 1.9 && r <= 2.5)) all_near_two = false;
    }
    const double last = rates.back();
    const bool trending = (decreasing || all_near_two) && last >= 1.9 && last <= 2.6;

    for (const auto& row : rep.rows) g_stability_factors.push_back(row.stability_factor);

    std::string s = "E* rates:";
    for (double r : rates) s += " " + fmt(r);
    s += "; E*:";
    for (const auto& row : rep.rows) s += " " + fmt(row.errors.at("Estar"));
    detail = s + " (paper rates: 2.74 2.31 2.19)";
    return in_band && trending;
}

bool criterion3_conservation(std::string& detail) {
    const RectDomain dom{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
    const Discretization d = Discretization::build(dom, 20, 20);
    GeneralProblem p = unit_operator(); // D=I, b=0, lambda=i, beta=1, F=0, g=0
    p.u0 = reference_case().exact(0.0);
    const MarchResult mr = march(d, p, MarchPlan::uniform(dom, 400, 0.0));
    const double u0n = mr.m_norms.front();
    const double drift = std::abs(mr.m_norms.back() - u0n) / u0n;
    detail = "relative drift " + fmt(drift) + " over 400 steps (skew defect " +
             fmt(mr.skew_defect) + ")";
    return drift <= 1e-9;
}

bool criterion4_projection(std::string& detail) {
    const ManufacturedCase c = reference_case();
    ProjectionStudyOptions opt;
    opt.r = 0.0;
    opt.delta = 0.0;
    const StudyReport rep =
        projection_rate_study(c.problem, c.exact, c.exact_dr, {10, 20, 40, 80}, opt);
    const double l2 = rep.slopes.at("L2");
    const double h1 = rep.slopes.at("H1");
    const double dr = rep.slopes.at("drL2");
    detail = "slopes L2=" + fmt(l2) + " H1=" + fmt(h1) + " drL2=" + fmt(dr);
    return l2 >= 1.9 && l2 <= 2.2 && h1 >= 0.9 && h1 <= 1.2 && dr >= 1.9 && dr <= 2.2;
}

bool criterion5_oracle(std::string& detail) {
    const RectDomain dom{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
    const std::vector<std::pair<int, int>> sizes{{1, 2},  {2, 2},  {1, 3},  {3, 5},
                                                 {8, 8},  {10, 20}, {14, 14}};
    double worst = 0.0;
    auto check = [&](const GeneralProblem& p, double r, double delta) {
        for (auto [ny, nt] : sizes) {
            const Discretization d = Discretization::build(dom, ny, nt);
            const auto oracle = dense_oracle_assemble(d.mesh, d.dofs, p, r, delta);
            worst = std::max(worst, assemble_mass(d).max_abs_diff(oracle.M));
            worst = std::max(worst, assemble_form(d, p, r, delta).max_abs_diff(oracle.B));
            worst = std::max(worst, assemble_beta_mass(d, p, r, delta).max_abs_diff(oracle.G));
        }
    };
    check(unit_operator(), 0.5, 0.8);
    check(random_smooth_problem(1001), 0.3, 1.1);
    check(random_smooth_problem(2002), 0.9, 0.0);
    check(random_smooth_problem(3003), 0.1, 1.9);
    detail = "max |sparse - dense| = " + fmt(worst) + " over " + std::to_string(sizes.size()) +
             " meshes x 4 coefficient sets";
    return worst <= 1e-13;
}

bool criterion6_elements(std::string& detail) {
    const ReferenceElement ref(3);
    Eigen::Matrix4d mass_expect;
    mass_expect << 4, 2, 1, 2, 2, 4, 2, 1, 1, 2, 4, 2, 2, 1, 2, 4;
    mass_expect /= 36.0;
    const double mass_dev = (local_mass_matrix(ref, 1.0, 1.0) - mass_expect).cwiseAbs().maxCoeff();

    GeneralProblem lap = zero_problem();
    lap.D = [](double, double, double) { return SymMat2::identity(); };
    Eigen::Matrix4d stiff_expect;
    stiff_expect << 4, -1, -2, -1, -1, 4, -1, -2, -2, -1, 4, -1, -1, -2, -1, 4;
    stiff_expect /= 6.0;
    const double stiff_dev =
        (local_form_matrix(ref, {0.0, 1.0, 0.0, 1.0}, lap, 0.0, 0.0) - stiff_expect.cast<Complex>())
            .cwiseAbs()
            .maxCoeff();
    detail = "mass dev " + fmt(mass_dev) + ", stiffness dev " + fmt(stiff_dev);
    return mass_dev <= 1e-14 && stiff_dev <= 1e-14;
}

bool criterion7_stability(std::string& detail) {
    if (g_stability_factors.empty()) {
        detail = "no factors collected (criteria 1-2 did not run)";
        return false;
    }
    double worst = 0.0;
    for (double f : g_stability_factors) worst = std::max(worst, f);
    detail = "max_n ||U^n||/(||U^0||+max||F||) = " + fmt(worst) + " over " +
             std::to_string(g_stability_factors.size()) + " runs";
    return worst <= 10.0;
}

bool criterion8_acoustic(std::string& detail) {
    Config flat_cfg = Config::parse_string(
        "acoustic.k0 = 8\nacoustic.bathymetry = flat:100\n"
        "acoustic.r_min = 1\nacoustic.r_max = 2\n"
        "acoustic.theta_min = -0.4\nacoustic.theta_max = 0.4\n");
    const auto flat = run_acoustic_demo(scenario_from_config(flat_cfg), 10, 10, {100});
    const bool flat_ok = flat.conditions.con2_equality && flat.gamma_bc_max == 0.0 &&
                         flat.drift_table.rows[0].errors.at("drift") <= 1e-9;

    Config slope_cfg = flat_cfg;
    slope_cfg.set("acoustic.bathymetry", "ramp:100,5");
    const auto slope = run_acoustic_demo(scenario_from_config(slope_cfg), 10, 10, {100, 200});
    const double d1 = slope.drift_table.rows[0].errors.at("drift");
    const double d2 = slope.drift_table.rows[1].errors.at("drift");
    const double ratio = d2 > 0.0 ? d1 / d2 : 0.0;
    const bool slope_ok = ratio >= 1.8;

    detail = "flat: con2_eq=" + std::string(flat.conditions.con2_equality ? "yes" : "no") +
             " gamma_bc=" + fmt(flat.gamma_bc_max) + " drift=" +
             fmt(flat.drift_table.rows[0].errors.at("drift")) + "; slope drifts " + fmt(d1) +
             " -> " + fmt(d2) + " ratio " + fmt(ratio) +
             (slope_ok ? "" : " [discrete conservation is exact for the transformed problem: "
                              "both drifts sit at roundoff, so no k-dependent decay exists]");
    return flat_ok && slope_ok;
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    double total = 0.0;
    total += run_criterion(criterion1_spatial, 1,
                           "spatial rate reproduction (Table 1 setting, k^-1=400)");
    total += run_criterion(criterion2_temporal, 2,
                           "temporal rate reproduction (Table 2 setting, k_ref=h/30)");
    total += run_criterion(criterion3_conservation, 3,
                           "discrete conservation (skew-Hermitian case, N=400)");
    total += run_criterion(criterion4_projection, 4, "elliptic projection rates (L2/H1/ddr)");
    total += run_criterion(criterion5_oracle, 5, "sparse vs dense assembly oracle (n_free<=200)");
    total += run_criterion(criterion6_elements, 6, "element-matrix closed forms");
    total += run_criterion(criterion7_stability, 7, "stability monitor across criteria 1-2 runs");
    total += run_criterion(criterion8_acoustic, 8, "acoustic pipeline (flat + sloped bottom)");
    std::printf("%d of 8 criteria passed (%.1fs total)\n", 8 - g_failures, total);
    return g_failures;
}
