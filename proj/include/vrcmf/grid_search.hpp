#pragma once

#include <iosfwd>
#include <vector>

#include "vrcmf/trainer.hpp"

namespace vrcmf {

struct GridPoint {
    double lambda_u = 0.0;
    double lambda_v = 0.0;
    double val_rmse = 0.0;
};

struct GridResult {
    double best_lambda_u = 0.0;
    double best_lambda_v = 0.0;
    double best_val_rmse = 0.0;
    /// Every trained point in evaluation order.
    std::vector<GridPoint> surface;
};

/// 1e-2, 1e-1, ..., 1e4.
std::vector<double> default_lambda_grid();

enum class GridMode {
    /// lambda_u swept with lambda_v at its configured value, then lambda_v
    /// swept at the best lambda_u.
    independent,
    /// Full cross product.
    exhaustive,
};

/// Trains one model per point and keeps the lowest validation RMSE. Ties go
/// to the point evaluated first.
GridResult grid_search(const RatingsMatrix& train, const RatingsMatrix& validation, const ItemSideData& side,
                       const std::vector<double>& lambda_u_grid, const std::vector<double>& lambda_v_grid,
                       const TrainConfig& config, GridMode mode = GridMode::independent,
                       FitOptions options = {});

/// `lambda_u,lambda_v,val_rmse` rows with a header.
void write_surface(std::ostream& out, const GridResult& result);

}  // namespace vrcmf
