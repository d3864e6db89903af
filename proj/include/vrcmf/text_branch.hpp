#pragma once

#include <cmath>
#include <span>

#include <Eigen/Dense>

#include "vrcmf/error.hpp"
#include "vrcmf/parameters.hpp"
#include "vrcmf/random.hpp"
#include "vrcmf/rcnn.hpp"
#include "vrcmf/text_cnn.hpp"

namespace vrcmf {

/// Inverted dropout: each entry is 0 with probability `rate`, else 1/(1-rate).
Eigen::VectorXd make_dropout_mask(Eigen::Index size, double rate, Rng& rng);

// Uniform entry points so training code can be written once for both encoders.
inline CnnForward branch_forward(const TextCnnWeights& w, std::span<const int> tokens,
                                 const Eigen::VectorXd* mask = nullptr) {
    return cnn_text_forward(w, tokens, mask);
}
inline RcnnForward branch_forward(const RcnnWeights& w, std::span<const int> tokens,
                                  const Eigen::VectorXd* mask = nullptr) {
    return rcnn_forward(w, tokens, mask);
}
inline void branch_backward(const TextCnnWeights& w, const CnnCache& c, const Eigen::VectorXd& g,
                            TextCnnWeights& grad) {
    cnn_text_backward(w, c, g, grad);
}
inline void branch_backward(const RcnnWeights& w, const RcnnCache& c, const Eigen::VectorXd& g,
                            RcnnWeights& grad) {
    rcnn_backward(w, c, g, grad);
}

struct TextExample {
    std::span<const int> tokens;
    Eigen::VectorXd target;
    /// Optional dropout mask for the pooled vector.
    const Eigen::VectorXd* mask = nullptr;
};

template <typename W>
struct BranchGradient {
    double loss = 0.0;
    W gradient;
};

/// 1/2 lambda_v sum ||target - branch(tokens)||^2 + 1/2 lambda_w ||weights||^2
/// and its exact gradient.
template <typename W>
BranchGradient<W> text_branch_gradient(const W& weights, std::span<const TextExample> batch,
                                       double lambda_v, double lambda_w) {
    BranchGradient<W> out{0.0, weights.zeros_like()};
    for (const auto& ex : batch) {
        auto fwd = branch_forward(weights, ex.tokens, ex.mask);
        const Eigen::VectorXd residual = ex.target - fwd.output;
        out.loss += 0.5 * lambda_v * residual.squaredNorm();
        if (lambda_v != 0.0) branch_backward(weights, fwd.cache, Eigen::VectorXd(-lambda_v * residual), out.gradient);
    }
    out.loss += 0.5 * lambda_w * squared_norm(weights);
    add_scaled(out.gradient, lambda_w, weights);
    if (!std::isfinite(out.loss) || !all_finite(out.gradient)) throw NumericError("non-finite text branch gradient");
    return out;
}

}  // namespace vrcmf
