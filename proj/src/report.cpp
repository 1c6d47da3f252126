#include "cnpe/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cnpe {

void StudyReport::compute_pairwise_rates() {
    rates.clear();
    for (const auto& col : columns) {
        std::vector<double> r;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& prev = rows[i - 1];
            const auto& cur = rows[i];
            const auto a = prev.errors.find(col);
            const auto b = cur.errors.find(col);
            if (a == prev.errors.end() || b == cur.errors.end() || a->second <= 0.0 ||
                b->second <= 0.0) {
                r.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            r.push_back(std::log(a->second / b->second) /
                        std::log(prev.resolution / cur.resolution));
        }
        rates[col] = std::move(r);
    }
}

void StudyReport::compute_slopes() {
    slopes.clear();
    for (const auto& col : columns) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& row : rows) {
            const auto it = row.errors.find(col);
            if (it == row.errors.end() || it->second <= 0.0) continue;
            const double x = std::log(row.resolution), y = std::log(it->second);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        if (n >= 2) slopes[col] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
}

std::string format_mantissa_exp(double v) {
    if (v == 0.0) return "0.0000(0)";
    if (std::isnan(v)) return "nan";
    const double av = std::abs(v);
    int e = static_cast<int>(std::floor(std::log10(av)));
    double m = av / std::pow(10.0, e);
    // Rounding to 5 significant digits can push the mantissa to 10.
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", m);
    if (std::string(buf) == "10.0000") {
        m = 1.0;
        ++e;
        std::snprintf(buf, sizeof buf, "%.4f", m);
    }
    std::ostringstream os;
    if (v < 0) os << '-';
    os << buf << '(' << e << ')';
    return os.str();
}

namespace {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_rate(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string render_table(const StudyReport& report, TableFormat format) {
    std::ostringstream os;
    const bool md = format == TableFormat::Markdown;
    const std::string res_head = report.kind == "temporal" ? "k^-1" : "h^-1";

    if (md) {
        os << "# " << report.kind << " study\n\n";
        for (const auto& [k, v] : report.metadata) {
            if (!k.empty() && k[0] == '_') continue; // volatile (wall time etc.)
            os << "- " << k << ": " << v << "\n";
        }
        if (report.saturated) os << "- saturated: true\n";
        for (const auto& [col, slope] : report.slopes) {
            os << "- slope(" << col << "): " << format_rate(slope) << "\n";
        }
        os << "\n| " << res_head << " |";
        for (const auto& col : report.columns) os << " " << col << " | Rate |";
        os << "\n|---:|";
        for (std::size_t i = 0; i < report.columns.size(); ++i) os << "---:|---:|";
        os << "\n";
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& row = report.rows[i];
            os << "| " << row.label << " |";
            for (const auto& col : report.columns) {
                const auto it = row.errors.find(col);
                os << " " << (it == row.errors.end() ? "" : format_mantissa_exp(it->second)) << " |";
                std::string rate;
                if (i > 0) {
                    const auto rit = report.rates.find(col);
                    if (rit != report.rates.end() && i - 1 < rit->second.size()) {
                        rate = format_rate(rit->second[i - 1]);
                    }
                }
                os << " " << rate << " |";
            }
            os << "\n";
        }
        return os.str();
    }

    // CSV: metadata as comments, full-precision values.
    for (const auto& [k, v] : report.metadata) {
        if (!k.empty() && k[0] == '_') continue;
        std::istringstream lines(v);
        std::string line;
        while (std::getline(lines, line)) os << "# " << k << ": " << line << "\n";
    }
    if (report.saturated) os << "# saturated: true\n";
    for (const auto& [col, slope] : report.slopes) {
        os << "# slope(" << col << "): " << format_full(slope) << "\n";
    }
    os << res_head;
    for (const auto& col : report.columns) os << "," << col << ",rate(" << col << ")";
    os << ",stability\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        os << row.label;
        for (const auto& col : report.columns) {
            const auto it = row.errors.find(col);
            os << "," << (it == row.errors.end() ? "" : format_full(it->second));
            std::string rate;
            if (i > 0) {
                const auto rit = report.rates.find(col);
                if (rit != report.rates.end() && i - 1 < rit->second.size() &&
                    !std::isnan(rit->second[i - 1])) {
                    rate = format_full(rit->second[i - 1]);
                }
            }
            os << "," << rate;
        }
        os << "," << (row.stability_factor > 0 ? format_full(row.stability_factor) : "") << "\n";
    }
    return os.str();
}

std::string emit_tables(const StudyReport& report, TableFormat format, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string path =
        (fs::path(dir) / (report.kind + "_study" + (format == TableFormat::Csv ? ".csv" : ".md")))
            .string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_tables: cannot write " + path);
    out << render_table(report, format);
    return path;
}

} // namespace cnpe
