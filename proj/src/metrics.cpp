#include "vrcmf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "vrcmf/error.hpp"

namespace vrcmf {

double predict(const LatentFactors& factors, std::size_t user, std::size_t item, bool clamp, double r_max) {
    if (user >= static_cast<std::size_t>(factors.users.cols()))
        throw Error("user index " + std::to_string(user) + " out of range");
    if (item >= static_cast<std::size_t>(factors.items.cols()))
        throw Error("item index " + std::to_string(item) + " out of range");
    const double raw = factors.users.col(static_cast<Eigen::Index>(user)).dot(factors.items.col(static_cast<Eigen::Index>(item)));
    return clamp ? std::clamp(raw, 1.0, r_max) : raw;
}

double evaluate_rmse(const LatentFactors& factors, const RatingsMatrix& entries, bool clamp) {
    if (entries.empty()) throw Error("cannot compute RMSE of an empty rating set");
    double sum = 0.0;
    for (const auto& e : entries.entries()) {
        const double d = e.value - predict(factors, e.user, e.item, clamp, entries.r_max());
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(entries.size()));
}

double constant_rmse(double prediction, const RatingsMatrix& entries) {
    if (entries.empty()) throw Error("cannot compute RMSE of an empty rating set");
    double sum = 0.0;
    for (const auto& e : entries.entries()) sum += (e.value - prediction) * (e.value - prediction);
    return std::sqrt(sum / static_cast<double>(entries.size()));
}

}  // namespace vrcmf
