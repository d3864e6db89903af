#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vrcmf {

/// 100 * (base - value) / base. Positive when `value` improves on `base`.
double improvement_percent(double base, double value);

/// Improvement rounded to three decimals, e.g. "4.194%".
std::string format_improvement(double base, double value);

struct ReportRow {
    std::string name;
    /// One RMSE per repeat.
    std::vector<double> rmse;
    double mean() const;
};

/// Aligned table of mean RMSE per model and the improvement over the row
/// named `baseline` (the first row when empty or absent). A zero baseline
/// RMSE leaves the improvement column as "n/a".
void emit_report(std::ostream& out, const std::vector<ReportRow>& rows, const std::string& baseline = "");

}  // namespace vrcmf
