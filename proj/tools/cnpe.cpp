// Command-line front end: spatial/temporal convergence studies against the
// manufactured reference solution, projection rate studies, and the acoustic
// demo over flat or variable bathymetry.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnpe/errors.hpp"
#include "cnpe/harness.hpp"
#include "cnpe/projection.hpp"

namespace {

using namespace cnpe;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "markdown";
    int seed = 20240801;
};

Config load_config(const CommonArgs& args) {
    Config cfg;
    if (!args.config_path.empty()) cfg = Config::parse_file(args.config_path);
    return cfg;
}

TableFormat parse_format(const std::string& f) {
    if (f == "csv") return TableFormat::Csv;
    if (f == "markdown" || f == "md") return TableFormat::Markdown;
    throw ValidationError("unknown --format '" + f + "' (expected csv or markdown)");
}

ManufacturedCase case_from_config(const Config& cfg) {
    const std::string name = cfg.get_string("problem.case", "reference");
    if (name == "reference") return reference_case();
    if (name == "tent") return tent_case();
    throw ValidationError("unknown problem.case '" + name + "'");
}

StudyOptions study_options(const Config& cfg, const CommonArgs& args) {
    StudyOptions opt;
    opt.quad_order = cfg.get_int("mesh.quad_order", 3);
    opt.seed = static_cast<std::uint64_t>(args.seed);
    Config resolved = cfg;
    resolved.set("run.seed", std::to_string(args.seed));
    opt.config_dump = resolved.serialize();
    return opt;
}

void print_report(const StudyReport& rep, const CommonArgs& args) {
    const TableFormat fmt = parse_format(args.format);
    std::cout << render_table(rep, fmt);
    const std::string path = emit_tables(rep, fmt, args.out_dir);
    std::cerr << "wrote " << path << "\n";
}

int run_spatial(const CommonArgs& args, std::vector<int> h_invs, int k_inv,
                std::vector<double> ranges) {
    const Config cfg = load_config(args);
    if (h_invs.empty()) h_invs = cfg.get_int_list("study.h_inv", {10, 20, 40, 80});
    if (k_inv == 0) k_inv = cfg.get_int("march.k_inv", 400);
    if (ranges.empty()) ranges = cfg.get_double_list("study.ranges", {0.1, 0.5, 1.0});
    const auto rep = run_spatial_study(case_from_config(cfg), h_invs, k_inv, ranges,
                                       study_options(cfg, args));
    print_report(rep, args);
    return 0;
}

int run_temporal(const CommonArgs& args, int h_inv, std::vector<int> k_invs) {
    const Config cfg = load_config(args);
    if (h_inv == 0) h_inv = cfg.get_int("mesh.h_inv", 20);
    if (k_invs.empty()) k_invs = cfg.get_int_list("study.k_inv", {144, 192, 240, 288});
    const int divisor = cfg.get_int("study.k_ref_divisor", 30);
    const auto rep = run_temporal_study(case_from_config(cfg), h_inv, k_invs, divisor,
                                        study_options(cfg, args));
    print_report(rep, args);
    return 0;
}

int run_project(const CommonArgs& args, std::vector<int> h_invs) {
    const Config cfg = load_config(args);
    if (h_invs.empty()) h_invs = cfg.get_int_list("study.h_inv", {10, 20, 40, 80});
    const ManufacturedCase c = case_from_config(cfg);

    ProjectionStudyOptions opt;
    opt.r = cfg.get_double("projection.r", c.problem.domain.r_min);
    opt.quad_order = cfg.get_int("mesh.quad_order", 3);
    const Discretization coarse =
        Discretization::build(c.problem.domain, h_invs.front(), h_invs.front(), opt.quad_order);
    CoercivityOptions copt;
    copt.seed = static_cast<std::uint64_t>(args.seed);
    opt.delta = coercivity_delta(coarse, c.problem, copt).delta_hat;

    auto rep = projection_rate_study(c.problem, c.exact, c.exact_dr, h_invs, opt);
    rep.metadata["case"] = c.name;
    print_report(rep, args);
    return 0;
}

int run_acoustic(const CommonArgs& args, int n_y, int n_theta, std::vector<int> n_steps) {
    const Config cfg = load_config(args);
    if (n_y == 0) n_y = cfg.get_int("mesh.n_y", 20);
    if (n_theta == 0) n_theta = cfg.get_int("mesh.n_theta", 20);
    if (n_steps.empty()) n_steps = cfg.get_int_list("march.n_steps", {100, 200});

    const AcousticScenario sc = scenario_from_config(cfg);
    const auto demo = run_acoustic_demo(sc, n_y, n_theta, n_steps, args.out_dir,
                                        study_options(cfg, args));
    std::cout << "conditions: " << demo.conditions.summary() << "\n";
    std::cout << "gamma_bc max |lambda| = " << demo.gamma_bc_max << "\n";
    if (demo.drift_ratio > 0.0) std::cout << "drift ratio (coarse/fine) = " << demo.drift_ratio << "\n";
    print_report(demo.drift_table, args);
    for (const auto& pth : demo.snapshot_paths) std::cerr << "wrote " << pth << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crank-Nicolson finite element solver for the 2D Schrodinger-type "
                 "range-stepping problem with mixed Dirichlet-Robin conditions"};
    app.require_subcommand(1);

    CommonArgs common;
    std::vector<int> h_invs, k_invs, n_steps;
    int k_inv = 0, h_inv = 0, n_y = 0, n_theta = 0;
    std::vector<double> ranges;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "config file (section.key = value)");
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--format", common.format, "csv|markdown");
        sub->add_option("--seed", common.seed, "seed for randomized checks");
    };

    CLI::App* spatial = app.add_subcommand("spatial", "spatial convergence study");
    add_common(spatial);
    spatial->add_option("--hy-inv,--h-inv", h_invs, "list of h^-1 resolutions")->delimiter(',');
    spatial->add_option("--htheta-inv", h_invs, "alias of --hy-inv (square meshes)")->delimiter(',');
    spatial->add_option("--k-inv", k_inv, "range steps per unit range");
    spatial->add_option("--ranges", ranges, "ranges at which to report E")->delimiter(',');

    CLI::App* temporal = app.add_subcommand("temporal", "range-step convergence study");
    add_common(temporal);
    temporal->add_option("--hy-inv,--h-inv", h_inv, "fixed h^-1");
    temporal->add_option("--k-inv", k_invs, "list of k^-1 values")->delimiter(',');

    CLI::App* project = app.add_subcommand("project", "elliptic projection rate study");
    add_common(project);
    project->add_option("--hy-inv,--h-inv", h_invs, "list of h^-1 resolutions")->delimiter(',');

    CLI::App* acoustic = app.add_subcommand("acoustic", "underwater-acoustics demo");
    add_common(acoustic);
    acoustic->add_option("--hy-inv", n_y, "elements in y");
    acoustic->add_option("--htheta-inv", n_theta, "elements in theta");
    acoustic->add_option("--k-inv", n_steps, "list of range step counts")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (spatial->parsed()) return run_spatial(common, h_invs, k_inv, ranges);
        if (temporal->parsed()) return run_temporal(common, h_inv, k_invs);
        if (project->parsed()) return run_project(common, h_invs);
        if (acoustic->parsed()) return run_acoustic(common, n_y, n_theta, n_steps);
    } catch (const cnpe::ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 2;
    } catch (const cnpe::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
