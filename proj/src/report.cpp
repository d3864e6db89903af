#include "vrcmf/report.hpp"

#include <algorithm>
#include <ostream>

#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"

namespace vrcmf {

double improvement_percent(double base, double value) {
    if (base == 0.0) throw Error("baseline RMSE is zero");
    return 100.0 * (base - value) / base;
}

std::string format_improvement(double base, double value) {
    return format_fixed(improvement_percent(base, value), 3) + "%";
}

double ReportRow::mean() const {
    if (rmse.empty()) throw Error("report row '" + name + "' has no results");
    double s = 0.0;
    for (double v : rmse) s += v;
    return s / static_cast<double>(rmse.size());
}

void emit_report(std::ostream& out, const std::vector<ReportRow>& rows, const std::string& baseline) {
    if (rows.empty()) throw Error("nothing to report");
    auto base = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) { return r.name == baseline; });
    if (base == rows.end()) base = rows.begin();
    const double base_rmse = base->mean();

    std::size_t width = 5;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(s.size(), w), ' ');
        return s;
    };
    out << pad("model", width) << "  runs  rmse    improved vs " << base->name << '\n';
    for (const auto& r : rows) {
        out << pad(r.name, width) << "  " << pad(std::to_string(r.rmse.size()), 4) << "  "
            << format_fixed(r.mean(), 4) << "  "
            << (base_rmse == 0.0 ? std::string("n/a") : format_improvement(base_rmse, r.mean())) << '\n';
    }
}

}  // namespace vrcmf
