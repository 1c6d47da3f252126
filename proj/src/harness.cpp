#include "cnpe/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cnpe/errors.hpp"

namespace cnpe {

namespace {

std::string format_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string range_column(double rho) { return "E(" + format_g(rho) + ")"; }

/// Steps whose nodal E values are needed to interpolate E at `rho`.
struct RangeProbe {
    double rho;
    int n_lo, n_hi; // n_lo == n_hi when rho is nodal
    double t;       // interpolation weight toward n_hi
};

RangeProbe make_probe(const RectDomain& dom, double k, int n_steps, double rho) {
    if (rho < dom.r_min - 1e-12 || rho > dom.r_max + 1e-12) {
        throw ValidationError("study: requested range outside [r_min, r_max]");
    }
    const double x = (rho - dom.r_min) / k;
    int n0 = static_cast<int>(std::floor(x + 1e-9));
    n0 = std::clamp(n0, 0, n_steps);
    if (std::abs(x - n0) < 1e-9) return {rho, n0, n0, 0.0};
    return {rho, n0, std::min(n0 + 1, n_steps), x - n0};
}

long long wall_ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
        .count();
}

} // namespace

StudyReport run_spatial_study(const ManufacturedCase& c, const std::vector<int>& h_invs,
                              int k_inv, const std::vector<double>& ranges,
                              const StudyOptions& opt) {
    if (h_invs.size() < 2) throw ValidationError("run_spatial_study: need at least 2 resolutions");
    if (k_inv < 1) throw ValidationError("run_spatial_study: k_inv must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    const RectDomain& dom = c.problem.domain;

    std::vector<int> sorted_h = h_invs;
    std::sort(sorted_h.begin(), sorted_h.end());

    // Coercivity shift frozen for the whole study (computed on the coarsest mesh).
    const Discretization coarse = Discretization::build(dom, sorted_h.front(), sorted_h.front(), opt.quad_order);
    CoercivityOptions copt;
    copt.seed = opt.seed;
    const CoercivityResult coer = coercivity_delta(coarse, c.problem, copt);

    const int n_steps = static_cast<int>(std::lround(dom.r_extent() * k_inv));
    StudyReport rep;
    rep.kind = "spatial";
    for (double rho : ranges) rep.columns.push_back(range_column(rho));

    for (int h_inv : sorted_h) {
        const Discretization d = Discretization::build(dom, h_inv, h_inv, opt.quad_order);
        const MarchPlan plan = MarchPlan::uniform(dom, n_steps, coer.delta_hat);

        std::vector<RangeProbe> probes;
        std::set<int> needed;
        for (double rho : ranges) {
            probes.push_back(make_probe(dom, plan.k, n_steps, rho));
            needed.insert(probes.back().n_lo);
            needed.insert(probes.back().n_hi);
        }
        std::map<int, double> e_at_step;
        Observer obs = [&](int n, double r, const ComplexVector& coeffs) {
            if (needed.count(n)) {
                e_at_step[n] = fe_error_norms(d, coeffs, c.exact(r)).l2;
            }
        };
        const MarchResult mr = march(d, c.problem, plan, obs);

        StudyRow row;
        row.resolution = 1.0 / h_inv;
        row.label = std::to_string(h_inv);
        row.stability_factor = mr.stability_factor;
        for (const auto& pr : probes) {
            const double e = pr.n_lo == pr.n_hi
                                 ? e_at_step.at(pr.n_lo)
                                 : (1.0 - pr.t) * e_at_step.at(pr.n_lo) + pr.t * e_at_step.at(pr.n_hi);
            row.errors[range_column(pr.rho)] = e;
        }
        rep.rows.push_back(std::move(row));
    }
    rep.compute_pairwise_rates();

    rep.metadata["case"] = c.name;
    rep.metadata["k_inv"] = std::to_string(k_inv);
    rep.metadata["delta"] = format_g(coer.delta_hat);
    rep.metadata["coercivity_c"] = format_g(coer.c_observed);
    rep.metadata["quad_order"] = std::to_string(opt.quad_order);
    rep.metadata["solver_tol"] = format_g(opt.solver_tol);
    rep.metadata["seed"] = std::to_string(opt.seed);
    if (!opt.config_dump.empty()) rep.metadata["config"] = opt.config_dump;
    rep.metadata["_wall_ms"] = std::to_string(wall_ms_since(t0));
    return rep;
}

StudyReport run_temporal_study(const ManufacturedCase& c, int h_inv,
                               const std::vector<int>& k_invs, int k_ref_divisor,
                               const StudyOptions& opt) {
    if (k_invs.empty()) throw ValidationError("run_temporal_study: k list empty");
    for (std::size_t i = 1; i < k_invs.size(); ++i) {
        if (k_invs[i] <= k_invs[i - 1]) {
            throw ValidationError("run_temporal_study: k list must be strictly refining");
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    const RectDomain& dom = c.problem.domain;
    const Discretization d = Discretization::build(dom, h_inv, h_inv, opt.quad_order);

    CoercivityOptions copt;
    copt.seed = opt.seed;
    const CoercivityResult coer = coercivity_delta(d, c.problem, copt);

    // Reference run: k_ref = h / divisor, h = 1/h_inv.
    const double k_ref = 1.0 / (static_cast<double>(h_inv) * k_ref_divisor);
    const int n_ref = static_cast<int>(std::lround(dom.r_extent() / k_ref));
    if (n_ref <= static_cast<int>(std::lround(dom.r_extent() * k_invs.back()))) {
        throw ValidationError("run_temporal_study: k_ref must be finer than all studied k");
    }
    const ComplexSparseMatrix M = assemble_mass(d);
    const MarchResult ref = march(d, c.problem, MarchPlan::uniform(dom, n_ref, coer.delta_hat));
    const ComplexVector& u_ref = ref.final_coeffs();

    StudyReport rep;
    rep.kind = "temporal";
    rep.columns = {"E", "Estar"};
    for (int k_inv : k_invs) {
        const int n_steps = static_cast<int>(std::lround(dom.r_extent() * k_inv));
        const MarchPlan plan = MarchPlan::uniform(dom, n_steps, coer.delta_hat);
        const MarchResult mr = march(d, c.problem, plan);

        StudyRow row;
        row.resolution = dom.r_extent() / n_steps; // k
        row.label = std::to_string(k_inv);
        row.stability_factor = mr.stability_factor;
        row.errors["E"] = fe_error_norms(d, mr.final_coeffs(), c.exact(dom.r_max)).l2;
        row.errors["Estar"] = m_norm(M, mr.final_coeffs() - u_ref);
        rep.rows.push_back(std::move(row));
    }
    rep.compute_pairwise_rates();

    rep.metadata["case"] = c.name;
    rep.metadata["h_inv"] = std::to_string(h_inv);
    rep.metadata["k_ref_divisor"] = std::to_string(k_ref_divisor);
    rep.metadata["n_ref"] = std::to_string(n_ref);
    rep.metadata["delta"] = format_g(coer.delta_hat);
    rep.metadata["quad_order"] = std::to_string(opt.quad_order);
    rep.metadata["solver_tol"] = format_g(opt.solver_tol);
    rep.metadata["seed"] = std::to_string(opt.seed);
    if (!opt.config_dump.empty()) rep.metadata["config"] = opt.config_dump;
    rep.metadata["_wall_ms"] = std::to_string(wall_ms_since(t0));
    return rep;
}

std::string write_field_snapshot(const Discretization& d, const ComplexVector& coeffs,
                                 const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("write_field_snapshot: cannot write " + path);
    out << "y,theta,re,im,abs\n";
    char buf[192];
    for (int node = 0; node < d.mesh.node_count(); ++node) {
        const auto [y, th] = d.mesh.node_coords(node);
        const int dof = d.dofs.node_to_dof[node];
        const Complex v = dof == DofMap::dirichlet ? Complex{0.0, 0.0} : coeffs[dof];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", y, th, v.real(),
                      v.imag(), std::abs(v));
        out << buf;
    }
    return path;
}

AcousticDemoResult run_acoustic_demo(const AcousticScenario& sc, int n_y, int n_theta,
                                     const std::vector<int>& n_steps,
                                     const std::optional<std::string>& out_dir,
                                     const StudyOptions& opt) {
    if (n_steps.empty()) throw ValidationError("run_acoustic_demo: no step counts given");
    const auto t0 = std::chrono::steady_clock::now();
    const GeneralProblem p = transform_to_rectangle(sc);

    AcousticDemoResult res;
    res.conditions = validate_conditions(p);
    if (!res.conditions.all_ok()) {
        throw ValidationError("run_acoustic_demo: admissibility validation failed: " +
                              res.conditions.summary());
    }

    const RectDomain& dom = p.domain;
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            const double r = dom.r_min + dom.r_extent() * i / 6.0;
            const double th = dom.theta_min + dom.theta_extent() * j / 6.0;
            res.gamma_bc_max = std::max(res.gamma_bc_max, std::abs(p.lambda(r, th)));
        }
    }

    const Discretization d = Discretization::build(dom, n_y, n_theta, opt.quad_order);
    CoercivityOptions copt;
    copt.seed = opt.seed;
    const CoercivityResult coer = coercivity_delta(d, p, copt);

    res.drift_table.kind = "acoustic";
    res.drift_table.columns = {"drift"};
    std::vector<double> drifts;
    for (int N : n_steps) {
        const MarchPlan plan = MarchPlan::uniform(dom, N, coer.delta_hat);
        const MarchResult mr = march(d, p, plan);
        const double u0n = mr.m_norms.front();
        double drift = 0.0;
        for (double nn : mr.m_norms) drift = std::max(drift, std::abs(nn - u0n));
        drift = u0n > 0.0 ? drift / u0n : drift;
        drifts.push_back(drift);

        StudyRow row;
        row.resolution = dom.r_extent() / N;
        row.label = std::to_string(N);
        row.errors["drift"] = drift;
        row.stability_factor = mr.stability_factor;
        res.drift_table.rows.push_back(std::move(row));

        if (out_dir) {
            const std::string path =
                (std::filesystem::path(*out_dir) / ("field_N" + std::to_string(N) + ".csv")).string();
            std::filesystem::create_directories(*out_dir);
            res.snapshot_paths.push_back(write_field_snapshot(d, mr.final_coeffs(), path));
        }
    }
    if (drifts.size() >= 2 && drifts[1] > 0.0) res.drift_ratio = drifts[0] / drifts[1];

    res.drift_table.metadata["k0"] = format_g(sc.k0);
    res.drift_table.metadata["delta"] = format_g(coer.delta_hat);
    res.drift_table.metadata["conditions"] = res.conditions.summary();
    res.drift_table.metadata["gamma_bc_max"] = format_g(res.gamma_bc_max);
    res.drift_table.metadata["mesh"] = std::to_string(n_y) + "x" + std::to_string(n_theta);
    if (!opt.config_dump.empty()) res.drift_table.metadata["config"] = opt.config_dump;
    res.drift_table.metadata["_wall_ms"] = std::to_string(wall_ms_since(t0));
    return res;
}

AcousticScenario scenario_from_config(const Config& cfg) {
    AcousticScenario sc;
    sc.k0 = cfg.get_double("acoustic.k0", 10.0);
    if (!(sc.k0 > 0.0)) throw ValidationError("scenario: acoustic.k0 must be positive");
    sc.domain.r_min = cfg.get_double("acoustic.r_min", 1.0);
    sc.domain.r_max = cfg.get_double("acoustic.r_max", 2.0);
    sc.domain.theta_min = cfg.get_double("acoustic.theta_min", -0.5);
    sc.domain.theta_max = cfg.get_double("acoustic.theta_max", 0.5);
    sc.domain.validate();

    const std::string bathy = cfg.get_string("acoustic.bathymetry", "flat:100");
    const auto colon = bathy.find(':');
    const std::string kind = bathy.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : bathy.substr(colon + 1);
    if (kind == "flat") {
        sc.bathymetry = Bathymetry::flat(args.empty() ? 100.0 : std::stod(args));
    } else if (kind == "ramp") {
        const auto parts = split_csv(args);
        if (parts.size() != 2) throw ValidationError("scenario: ramp bathymetry needs S0,SLOPE");
        sc.bathymetry = Bathymetry::ramp(std::stod(parts[0]), std::stod(parts[1]));
    } else if (kind == "file") {
        sc.bathymetry = bathymetry_from_grid(load_bathymetry_csv(args));
    } else {
        throw ValidationError("scenario: unknown bathymetry spec '" + bathy + "'");
    }

    const double beta_re = cfg.get_double("acoustic.beta_psi", 0.0);
    sc.beta_psi = [beta_re](double, double, double) { return Complex{beta_re, 0.0}; };

    // Gaussian starter, pinned to zero at the surface and the azimuthal walls.
    const double depth0 = sc.bathymetry.s(sc.domain.r_min,
                                          0.5 * (sc.domain.theta_min + sc.domain.theta_max));
    const double z0 = cfg.get_double("acoustic.source_depth", 0.5 * depth0);
    const double sigma = cfg.get_double("acoustic.source_width", 0.15 * depth0);
    const double t_lo = sc.domain.theta_min, t_ext = sc.domain.theta_extent();
    sc.psi0 = [z0, sigma, t_lo, t_ext](double z, double th) {
        const double gauss = std::exp(-std::pow((z - z0) / sigma, 2));
        return Complex{z * gauss * std::sin(M_PI * (th - t_lo) / t_ext), 0.0};
    };
    sc.psi0_grad = [z0, sigma, t_lo, t_ext](double z, double th) {
        const double gauss = std::exp(-std::pow((z - z0) / sigma, 2));
        const double st = std::sin(M_PI * (th - t_lo) / t_ext);
        const double ct = std::cos(M_PI * (th - t_lo) / t_ext);
        CVec2 g;
        g.y = Complex{(1.0 - 2.0 * z * (z - z0) / (sigma * sigma)) * gauss * st, 0.0};
        g.t = Complex{z * gauss * ct * M_PI / t_ext, 0.0};
        return g;
    };
    return sc;
}

} // namespace cnpe
