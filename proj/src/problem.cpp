#include "cnpe/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cnpe/errors.hpp"

namespace cnpe {

Complex compute_lambda_star(const GeneralProblem& p, double r, double theta) {
    const double b1_top = p.b(r, 1.0, theta).y;
    return b1_top - std::conj(p.lambda(r, theta));
}

std::string ConditionReport::summary() const {
    std::ostringstream os;
    os << "con0=" << (con0_ok ? "ok" : "FAIL") << " con1=" << (con1_ok ? "ok" : "FAIL")
       << " con2=" << (con2_ok ? "ok" : "FAIL") << (con2_equality ? " (equality)" : "")
       << " worst=" << worst_violation << " at (r=" << worst_r << ", theta=" << worst_theta << ")"
       << " samples=" << samples;
    return os.str();
}

ConditionReport validate_conditions(const GeneralProblem& p, const SamplingSpec& spec) {
    if (spec.n_r < 1 || spec.n_y < 1 || spec.n_theta < 1) {
        throw ValidationError("validate_conditions: sampling grid must be nonempty");
    }
    const RectDomain& dom = p.domain;
    auto lin = [](double lo, double hi, int n, int i) {
        return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    };

    ConditionReport rep;
    rep.con0_ok = true;
    rep.con1_ok = true; // b is real by construction of the type
    rep.con2_ok = true;
    rep.con2_equality = true;
    rep.worst_violation = -std::numeric_limits<double>::infinity();

    for (int ir = 0; ir < spec.n_r; ++ir) {
        const double r = lin(dom.r_min, dom.r_max, spec.n_r, ir);
        for (int it = 0; it < spec.n_theta; ++it) {
            const double th = lin(dom.theta_min, dom.theta_max, spec.n_theta, it);
            // con0 over the (y, theta) sheet at this r.
            for (int iy = 0; iy < spec.n_y; ++iy) {
                const double y = lin(dom.y_min, dom.y_max, spec.n_y, iy);
                SymMat2 D;
                try {
                    D = p.D(r, y, th);
                } catch (const std::exception& e) {
                    throw ValidationError("validate_conditions: D evaluation failed at (r=" +
                                          std::to_string(r) + ", y=" + std::to_string(y) +
                                          ", theta=" + std::to_string(th) + "): " + e.what());
                }
                if (!(D.det() > 0.0)) rep.con0_ok = false;
                ++rep.samples;
            }
            // con2 lives on the Robin boundary y = 1.
            double c2;
            try {
                c2 = p.b(r, 1.0, th).y - 2.0 * p.lambda(r, th).real();
            } catch (const std::exception& e) {
                throw ValidationError("validate_conditions: coefficient evaluation failed at (r=" +
                                      std::to_string(r) + ", theta=" + std::to_string(th) + "): " + e.what());
            }
            if (c2 > rep.worst_violation) {
                rep.worst_violation = c2;
                rep.worst_r = r;
                rep.worst_theta = th;
            }
            if (c2 > spec.ineq_tol) rep.con2_ok = false;
            if (std::abs(c2) > spec.eq_tol) rep.con2_equality = false;
        }
    }
    if (rep.con2_equality && !rep.con2_ok) rep.con2_ok = true; // equality implies the inequality
    return rep;
}

Bathymetry Bathymetry::flat(double depth) {
    return Bathymetry{
        [depth](double, double) { return depth; },
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; },
    };
}

Bathymetry Bathymetry::ramp(double s0, double slope) {
    return Bathymetry{
        [s0, slope](double r, double) { return s0 + slope * r; },
        [slope](double, double) { return slope; },
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; },
    };
}

double bathymetry_consistency(const Bathymetry& b, double r_lo, double r_hi,
                              double t_lo, double t_hi, int n_samples,
                              unsigned long long seed, double fd_step) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(r_lo + 2 * fd_step, r_hi - 2 * fd_step);
    std::uniform_real_distribution<double> ut(t_lo + 2 * fd_step, t_hi - 2 * fd_step);
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double r = ur(rng), t = ut(rng);
        const double fr = (b.s(r + fd_step, t) - b.s(r - fd_step, t)) / (2.0 * fd_step);
        const double ft = (b.s(r, t + fd_step) - b.s(r, t - fd_step)) / (2.0 * fd_step);
        worst = std::max({worst, std::abs(b.s_r(r, t) - fr), std::abs(b.s_theta(r, t) - ft)});
    }
    return worst;
}

GeneralProblem transform_to_rectangle(const AcousticScenario& sc) {
    sc.domain.validate();
    if (!(sc.domain.r_min > 0.0)) {
        throw ValidationError("transform_to_rectangle: r_min must be positive");
    }
    const double a = sc.half_wavenumber_inv();
    const Bathymetry bat = sc.bathymetry;

    auto depth = [bat](double r, double th) {
        const double s = bat.s(r, th);
        if (!(s > 0.0)) throw ValidationError("transform_to_rectangle: nonpositive depth sampled");
        return s;
    };

    GeneralProblem p;
    p.domain = sc.domain;
    p.r_independent_operator = false;

    p.D = [a, bat, depth](double r, double y, double th) {
        const double s = depth(r, th);
        const double st_over_s = bat.s_theta(r, th) / s;
        const double ar2 = a / (r * r);
        SymMat2 D;
        D.yy = a / (s * s) + ar2 * y * y * st_over_s * st_over_s;
        D.yt = -ar2 * y * st_over_s;
        D.tt = ar2;
        return D;
    };
    p.b = [bat, depth](double r, double y, double th) {
        const double s = depth(r, th);
        return Vec2{y * bat.s_r(r, th) / s, 0.0};
    };
    p.lambda = [a, bat, depth](double r, double th) {
        const double s = depth(r, th);
        const double st_over_s = bat.s_theta(r, th) / s;
        return Complex{0.5 * bat.s_r(r, th) / s, 0.5 * (a / (r * r)) * st_over_s * st_over_s};
    };
    auto beta_psi = sc.beta_psi;
    p.beta = [a, bat, depth, beta_psi](double r, double y, double th) {
        const double s = depth(r, th);
        const double st = bat.s_theta(r, th);
        const double stt = bat.s_thetatheta(r, th);
        const Complex refr = beta_psi ? beta_psi(r, y * s, th) : Complex{0.0, 0.0};
        return refr + (a / (r * r)) * (3.0 * st * st - 2.0 * s * stt) / (4.0 * s * s) -
               Iu * (bat.s_r(r, th) / (2.0 * s));
    };
    p.F = [](double, double, double) { return Complex{0.0, 0.0}; };

    const double r0 = sc.domain.r_min;
    auto psi0 = sc.psi0;
    auto psi0_grad = sc.psi0_grad;
    p.u0.value = [bat, depth, psi0, r0](double y, double th) {
        const double s = depth(r0, th);
        return std::sqrt(s) * psi0(y * s, th);
    };
    p.u0.gradient = [bat, depth, psi0, psi0_grad, r0](double y, double th) {
        const double s = depth(r0, th);
        const double st = bat.s_theta(r0, th);
        const double sq = std::sqrt(s);
        const Complex val = psi0(y * s, th);
        const CVec2 gpsi = psi0_grad(y * s, th);
        CVec2 g;
        g.y = sq * gpsi.y * s;
        g.t = 0.5 * st / sq * val + sq * (gpsi.y * y * st + gpsi.t);
        return g;
    };
    return p;
}

namespace {

int find_cell(const std::vector<double>& axis, double x, const char* what) {
    const double tol = 1e-10 * (1.0 + std::abs(axis.front()) + std::abs(axis.back()));
    if (x < axis.front() - tol || x > axis.back() + tol) {
        throw ValidationError(std::string("bathymetry grid: query outside hull in ") + what);
    }
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    int i = static_cast<int>(it - axis.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(axis.size()) - 2);
}

/// Bilinear interpolation of a nodal table over (r_axis, theta_axis).
double bilerp(const std::vector<double>& ra, const std::vector<double>& ta,
              const std::vector<double>& tab, double r, double th) {
    if (ra.size() == 1 && ta.size() == 1) return tab[0];
    const int nt = static_cast<int>(ta.size());
    if (ra.size() == 1) {
        const int j = find_cell(ta, th, "theta");
        const double v = (th - ta[j]) / (ta[j + 1] - ta[j]);
        return (1 - v) * tab[j] + v * tab[j + 1];
    }
    if (ta.size() == 1) {
        const int i = find_cell(ra, r, "r");
        const double u = (r - ra[i]) / (ra[i + 1] - ra[i]);
        return (1 - u) * tab[i] + u * tab[i + 1];
    }
    const int i = find_cell(ra, r, "r");
    const int j = find_cell(ta, th, "theta");
    const double u = (r - ra[i]) / (ra[i + 1] - ra[i]);
    const double v = (th - ta[j]) / (ta[j + 1] - ta[j]);
    const double f00 = tab[i * nt + j], f01 = tab[i * nt + j + 1];
    const double f10 = tab[(i + 1) * nt + j], f11 = tab[(i + 1) * nt + j + 1];
    return (1 - u) * ((1 - v) * f00 + v * f01) + u * ((1 - v) * f10 + v * f11);
}

/// Centered first differences along one axis of a nodal table (one-sided at
/// the ends); returns a table of the same shape.
std::vector<double> diff_table(const std::vector<double>& ra, const std::vector<double>& ta,
                               const std::vector<double>& tab, bool along_r) {
    const int nr = static_cast<int>(ra.size()), nt = static_cast<int>(ta.size());
    std::vector<double> out(tab.size(), 0.0);
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            double d = 0.0;
            if (along_r && nr > 1) {
                const int lo = std::max(i - 1, 0), hi = std::min(i + 1, nr - 1);
                d = (tab[hi * nt + j] - tab[lo * nt + j]) / (ra[hi] - ra[lo]);
            } else if (!along_r && nt > 1) {
                const int lo = std::max(j - 1, 0), hi = std::min(j + 1, nt - 1);
                d = (tab[i * nt + hi] - tab[i * nt + lo]) / (ta[hi] - ta[lo]);
            }
            out[i * nt + j] = d;
        }
    }
    return out;
}

std::vector<double> second_diff_theta(const std::vector<double>& ra, const std::vector<double>& ta,
                                      const std::vector<double>& tab) {
    const int nr = static_cast<int>(ra.size()), nt = static_cast<int>(ta.size());
    std::vector<double> out(tab.size(), 0.0);
    if (nt < 3) return out;
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const int jc = std::clamp(j, 1, nt - 2);
            const double hl = ta[jc] - ta[jc - 1], hr = ta[jc + 1] - ta[jc];
            const double fl = tab[i * nt + jc - 1], fc = tab[i * nt + jc], fr = tab[i * nt + jc + 1];
            out[i * nt + j] = 2.0 * (hl * fr - (hl + hr) * fc + hr * fl) / (hl * hr * (hl + hr));
        }
    }
    return out;
}

} // namespace

Bathymetry bathymetry_from_grid(const DepthGrid& grid) {
    if (grid.r_axis.empty() || grid.theta_axis.empty() ||
        grid.depth.size() != grid.r_axis.size() * grid.theta_axis.size()) {
        throw ValidationError("bathymetry_from_grid: grid must be rectangular and nonempty");
    }
    for (std::size_t i = 1; i < grid.r_axis.size(); ++i) {
        if (!(grid.r_axis[i] > grid.r_axis[i - 1])) throw ValidationError("bathymetry_from_grid: r axis not increasing");
    }
    for (std::size_t j = 1; j < grid.theta_axis.size(); ++j) {
        if (!(grid.theta_axis[j] > grid.theta_axis[j - 1])) throw ValidationError("bathymetry_from_grid: theta axis not increasing");
    }
    for (double v : grid.depth) {
        if (!(v > 0.0)) throw ValidationError("bathymetry_from_grid: nonpositive depth sample");
    }

    auto ra = grid.r_axis;
    auto ta = grid.theta_axis;
    auto s_tab = grid.depth;
    auto sr_tab = diff_table(ra, ta, s_tab, true);
    auto st_tab = diff_table(ra, ta, s_tab, false);
    auto stt_tab = second_diff_theta(ra, ta, s_tab);

    Bathymetry b;
    b.s = [ra, ta, s_tab](double r, double th) { return bilerp(ra, ta, s_tab, r, th); };
    b.s_r = [ra, ta, sr_tab](double r, double th) { return bilerp(ra, ta, sr_tab, r, th); };
    b.s_theta = [ra, ta, st_tab](double r, double th) { return bilerp(ra, ta, st_tab, r, th); };
    b.s_thetatheta = [ra, ta, stt_tab](double r, double th) { return bilerp(ra, ta, stt_tab, r, th); };
    return b;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

DepthGrid grid_from_long_rows(const std::vector<std::array<double, 3>>& rows) {
    std::set<double> rset, tset;
    for (const auto& row : rows) {
        rset.insert(row[0]);
        tset.insert(row[1]);
    }
    DepthGrid g;
    g.r_axis.assign(rset.begin(), rset.end());
    g.theta_axis.assign(tset.begin(), tset.end());
    g.depth.assign(g.r_axis.size() * g.theta_axis.size(),
                   std::numeric_limits<double>::quiet_NaN());
    std::map<double, int> ri, ti;
    for (std::size_t i = 0; i < g.r_axis.size(); ++i) ri[g.r_axis[i]] = static_cast<int>(i);
    for (std::size_t j = 0; j < g.theta_axis.size(); ++j) ti[g.theta_axis[j]] = static_cast<int>(j);
    for (const auto& row : rows) {
        g.depth[ri[row[0]] * g.theta_axis.size() + ti[row[1]]] = row[2];
    }
    for (double v : g.depth) {
        if (std::isnan(v)) throw ValidationError("bathymetry CSV: rows do not form a complete rectangular grid");
    }
    return g;
}

} // namespace

DepthGrid load_bathymetry_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("bathymetry CSV: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("bathymetry CSV: empty file " + path);

    auto head = split_line(line);
    const bool long_form = head.size() >= 3 && trim(head[0]) == "r" && trim(head[1]) == "theta" &&
                           trim(head[2]) == "depth";
    if (long_form) {
        std::vector<std::array<double, 3>> rows;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            auto cells = split_line(line);
            if (cells.size() < 3) throw ValidationError("bathymetry CSV: malformed row '" + line + "'");
            rows.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2])});
        }
        if (rows.empty()) throw ValidationError("bathymetry CSV: no data rows in " + path);
        return grid_from_long_rows(rows);
    }

    // Matrix layout: the file is a plain depth matrix (rows = r, cols = theta);
    // axis vectors come from the sidecar `<path>.axes.csv`.
    std::ifstream ax(path + ".axes.csv");
    if (!ax) {
        throw ValidationError("bathymetry CSV: " + path +
                              " lacks the r,theta,depth header and no sidecar " + path +
                              ".axes.csv was found");
    }
    DepthGrid g;
    std::string axline;
    while (std::getline(ax, axline)) {
        if (trim(axline).empty()) continue;
        auto cells = split_line(axline);
        std::vector<double>* target = nullptr;
        if (trim(cells[0]) == "r") target = &g.r_axis;
        else if (trim(cells[0]) == "theta") target = &g.theta_axis;
        else throw ValidationError("bathymetry sidecar: unknown axis '" + cells[0] + "'");
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (!trim(cells[i]).empty()) target->push_back(std::stod(cells[i]));
        }
    }
    do {
        if (trim(line).empty()) continue;
        for (const auto& cell : split_line(line)) {
            if (!trim(cell).empty()) g.depth.push_back(std::stod(cell));
        }
    } while (std::getline(in, line));
    if (g.depth.size() != g.r_axis.size() * g.theta_axis.size()) {
        throw ValidationError("bathymetry CSV: matrix shape does not match the sidecar axes");
    }
    return g;
}

} // namespace cnpe
