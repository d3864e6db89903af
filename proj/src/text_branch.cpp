#include "vrcmf/text_branch.hpp"

namespace vrcmf {

Eigen::VectorXd make_dropout_mask(Eigen::Index size, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) throw Error("dropout rate must be in [0, 1)");
    Eigen::VectorXd mask(size);
    std::bernoulli_distribution drop(rate);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (Eigen::Index i = 0; i < size; ++i) mask(i) = drop(rng) ? 0.0 : keep_scale;
    return mask;
}

}  // namespace vrcmf
