#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/config.hpp"
#include "vrcmf/parameters.hpp"
#include "vrcmf/random.hpp"
#include "vrcmf/rcnn.hpp"
#include "vrcmf/text_cnn.hpp"

namespace vrcmf {

/// Dense map from [text; visual] to the k-dimensional prior mean.
struct FusionHead {
    Eigen::MatrixXd weight;  // k x (text_dim + visual_dim)
    Eigen::VectorXd bias;    // k

    static FusionHead zeros(std::size_t k, std::size_t input_dim);
    /// Glorot-uniform weight, zero bias.
    static FusionHead random(std::size_t k, std::size_t input_dim, Rng& rng);
    FusionHead zeros_like() const { return zeros(static_cast<std::size_t>(weight.rows()), input_dim()); }
    std::size_t input_dim() const { return static_cast<std::size_t>(weight.cols()); }

    std::vector<ParamView> params();
    std::vector<ConstParamView> params() const;

    Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
};

/// Sizes that fix the layout of a network; everything else is learned.
struct NetworkShape {
    Variant variant = Variant::pmf;
    std::size_t k = 0;
    std::size_t vocab_size = 0;
    std::size_t visual_dim = 0;
};

/// All trainable prior parameters W'. PMF has none; text-only variants own
/// one encoder whose output is mu_j directly; visual variants add a fusion head.
struct PriorNetwork {
    Variant variant = Variant::pmf;
    std::optional<TextCnnWeights> cnn;
    std::optional<RcnnWeights> rcnn;
    std::optional<FusionHead> fusion;

    static PriorNetwork zeros(const TrainConfig& config, const NetworkShape& shape);
    static PriorNetwork random(const TrainConfig& config, const NetworkShape& shape, Rng& rng);
    PriorNetwork zeros_like() const;

    bool empty() const { return !cnn && !rcnn && !fusion; }
    std::size_t text_dim() const;
    std::size_t visual_dim() const;
    std::size_t pooled_dim() const;

    std::vector<ParamView> params();
    std::vector<ConstParamView> params() const;
};

/// Side information for one item.
struct ItemInput {
    std::span<const int> tokens;
    /// Empty for variants without a visual channel.
    const Eigen::VectorXd* visual = nullptr;
};

/// mu_j for one item. PMF yields zeros. `dropout_mask`, when given, applies
/// to the text encoder's pooled vector.
Eigen::VectorXd compute_item_prior(const PriorNetwork& net, std::size_t k, const ItemInput& input,
                                   const Eigen::VectorXd* dropout_mask = nullptr);

struct PriorExample {
    ItemInput input;
    Eigen::VectorXd target;
    const Eigen::VectorXd* mask = nullptr;
};

struct NetworkGradient {
    double loss = 0.0;
    PriorNetwork gradient;
};

/// 1/2 lambda_v sum |target - mu|^2 + 1/2 lambda_w |W'|^2 and its gradient.
NetworkGradient network_gradient(const PriorNetwork& net, std::span<const PriorExample> batch, double lambda_v,
                                 double lambda_w);

}  // namespace vrcmf
