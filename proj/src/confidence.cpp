#include "vrcmf/confidence.hpp"

#include <cmath>
#include <string>

#include "vrcmf/error.hpp"

namespace vrcmf {

DistanceFunction parse_distance(std::string_view name) {
    if (name == "absolute" || name == "abs") return DistanceFunction::absolute;
    if (name == "square" || name == "squared") return DistanceFunction::square;
    throw Error("unknown distance function '" + std::string(name) + "' (expected absolute or square)");
}

std::string_view to_string(DistanceFunction d) {
    return d == DistanceFunction::absolute ? "absolute" : "square";
}

double confidence_factor(double rating, const ConfidenceParams& params) {
    const double offset = rating - params.r_max / 2.0;
    const double distance = params.distance == DistanceFunction::absolute ? std::abs(offset) : offset * offset;
    return 1.0 + params.alpha * distance;
}

}  // namespace vrcmf
