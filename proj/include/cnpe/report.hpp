#pragma once

#include <map>
#include <string>
#include <vector>

namespace cnpe {

/// One resolution row of a convergence study. `errors` is keyed by column
/// name ("E(0.1)", "Estar", "L2", ...); missing keys render blank.
struct StudyRow {
    double resolution = 0.0; // h for spatial/projection studies, k for temporal
    std::string label;       // e.g. "20" for h^-1 = 20
    std::map<std::string, double> errors;
    double stability_factor = 0.0; // max_n ||U^n|| / (||U^0|| + max ||F||), 0 if n/a
};

/// Per-study container: rows sorted coarse-to-fine, pairwise rates computed
/// with log(E1/E2)/log(res1/res2), optional least-squares slopes, flat
/// metadata. Metadata keys starting with '_' are volatile (wall time) and are
/// excluded from emitted files so identical configs emit identical bytes.
struct StudyReport {
    std::string kind; // "spatial" | "temporal" | "projection" | "acoustic"
    std::vector<std::string> columns;
    std::vector<StudyRow> rows;
    std::map<std::string, std::vector<double>> rates;  // column -> rates (size rows-1)
    std::map<std::string, double> slopes;              // column -> least-squares slope
    std::map<std::string, std::string> metadata;
    bool saturated = false; // errors at solver-tolerance level; rates not meaningful

    void compute_pairwise_rates();
    void compute_slopes();
};

/// Paper-style mantissa(exponent) rendering with 5 significant digits,
/// e.g. 0.035162 -> "3.5162(-2)".
std::string format_mantissa_exp(double v);

enum class TableFormat { Csv, Markdown };

std::string render_table(const StudyReport& report, TableFormat format);

/// Writes `<dir>/<kind>_study.csv` or `.md`; returns the path written.
std::string emit_tables(const StudyReport& report, TableFormat format, const std::string& dir);

} // namespace cnpe
