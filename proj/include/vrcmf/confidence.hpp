#pragma once

#include <string_view>

namespace vrcmf {

enum class DistanceFunction { absolute, square };

DistanceFunction parse_distance(std::string_view name);
std::string_view to_string(DistanceFunction d);

struct ConfidenceParams {
    double alpha = 0.3;
    DistanceFunction distance = DistanceFunction::absolute;
    double r_max = 5.0;
};

/// c = 1 + alpha * f(r - r_max / 2). Extreme ratings get more weight.
double confidence_factor(double rating, const ConfidenceParams& params);

}  // namespace vrcmf
