#include "vrcmf/grid_search.hpp"

#include <ostream>

#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"
#include "vrcmf/metrics.hpp"

namespace vrcmf {

std::vector<double> default_lambda_grid() { return {1e-2, 1e-1, 1.0, 10.0, 100.0, 1e3, 1e4}; }

GridResult grid_search(const RatingsMatrix& train, const RatingsMatrix& validation, const ItemSideData& side,
                       const std::vector<double>& lambda_u_grid, const std::vector<double>& lambda_v_grid,
                       const TrainConfig& config, GridMode mode, FitOptions options) {
    if (lambda_u_grid.empty() || lambda_v_grid.empty()) throw Error("lambda grids must not be empty");
    if (validation.empty()) throw Error("grid search needs a validation set");

    GridResult result;
    auto evaluate = [&](double lu, double lv) {
        for (const auto& p : result.surface)
            if (p.lambda_u == lu && p.lambda_v == lv) return p.val_rmse;
        TrainConfig c = config;
        c.lambda_u = lu;
        c.lambda_v = lv;
        auto model = fit(train, &validation, side, c, options);
        const double rmse = evaluate_rmse(model.factors, validation, c.clamp);
        result.surface.push_back({lu, lv, rmse});
        return rmse;
    };
    auto best_of = [&](auto&& points) {
        bool first = true;
        for (auto [lu, lv] : points) {
            const double rmse = evaluate(lu, lv);
            if (first || rmse < result.best_val_rmse) {
                result.best_lambda_u = lu;
                result.best_lambda_v = lv;
                result.best_val_rmse = rmse;
                first = false;
            }
        }
    };

    std::vector<std::pair<double, double>> points;
    if (mode == GridMode::exhaustive) {
        for (double lu : lambda_u_grid)
            for (double lv : lambda_v_grid) points.emplace_back(lu, lv);
        best_of(points);
        return result;
    }

    for (double lu : lambda_u_grid) points.emplace_back(lu, config.lambda_v);
    best_of(points);
    const double lu_best = result.best_lambda_u;
    points.clear();
    for (double lv : lambda_v_grid) points.emplace_back(lu_best, lv);
    // The incumbent stays eligible: it is already on the surface.
    const GridPoint incumbent{result.best_lambda_u, result.best_lambda_v, result.best_val_rmse};
    best_of(points);
    if (incumbent.val_rmse < result.best_val_rmse) {
        result.best_lambda_u = incumbent.lambda_u;
        result.best_lambda_v = incumbent.lambda_v;
        result.best_val_rmse = incumbent.val_rmse;
    }
    return result;
}

void write_surface(std::ostream& out, const GridResult& result) {
    out << "lambda_u,lambda_v,val_rmse\n";
    for (const auto& p : result.surface)
        out << format_roundtrip(p.lambda_u) << ',' << format_roundtrip(p.lambda_v) << ','
            << format_fixed(p.val_rmse, 6) << '\n';
}

}  // namespace vrcmf
