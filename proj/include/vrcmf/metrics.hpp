#pragma once

#include <cstddef>

#include "vrcmf/factors.hpp"
#include "vrcmf/ratings.hpp"

namespace vrcmf {

/// u_i . v_j, clamped to [1, r_max] when asked.
double predict(const LatentFactors& factors, std::size_t user, std::size_t item, bool clamp = false,
               double r_max = 5.0);

/// sqrt(sum (r - r_hat)^2 / N) over every entry of `entries`, which must share
/// the factors' index space. Empty input is an error.
double evaluate_rmse(const LatentFactors& factors, const RatingsMatrix& entries, bool clamp = false);

/// Same as evaluate_rmse with a constant prediction.
double constant_rmse(double prediction, const RatingsMatrix& entries);

}  // namespace vrcmf
