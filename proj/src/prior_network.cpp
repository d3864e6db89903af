#include "vrcmf/prior_network.hpp"

#include <cmath>
#include <random>

#include "vrcmf/error.hpp"
#include "vrcmf/text_branch.hpp"

namespace vrcmf {

namespace {

template <typename T>
void append(std::vector<T>& dst, std::vector<T> src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

TextCnnShape cnn_shape(const TrainConfig& c, const NetworkShape& s, std::size_t output) {
    return {s.vocab_size, c.embed_dim, c.cnn_windows, c.cnn_maps, c.projection_hidden, output};
}

RcnnShape rcnn_shape(const TrainConfig& c, const NetworkShape& s, std::size_t output) {
    return {s.vocab_size, c.embed_dim, c.rcnn_context_dim, c.rcnn_hidden, output, c.context_window};
}

template <typename Make>
PriorNetwork build(const TrainConfig& config, const NetworkShape& shape, Make make) {
    if (shape.k == 0) throw Error("k must be >= 1");
    PriorNetwork net;
    net.variant = shape.variant;
    const auto model = text_model(shape.variant);
    if (model == TextModel::none) return net;
    if (shape.vocab_size == 0) throw Error("text variants need a non-empty vocabulary");
    const bool visual = uses_visual(shape.variant);
    if (visual && shape.visual_dim == 0) throw Error("visual variants need a visual feature dimension");
    const std::size_t text_out = visual ? config.effective_text_dim() : shape.k;
    make(net, model, text_out, visual);
    return net;
}

}  // namespace

FusionHead FusionHead::zeros(std::size_t k, std::size_t input_dim) {
    return {Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(input_dim)),
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k))};
}

FusionHead FusionHead::random(std::size_t k, std::size_t input_dim, Rng& rng) {
    auto head = zeros(k, input_dim);
    const double limit = std::sqrt(6.0 / static_cast<double>(k + input_dim));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < head.weight.size(); ++i) head.weight.data()[i] = dist(rng);
    return head;
}

std::vector<ParamView> FusionHead::params() {
    return {{"fusion_weight", flat(weight)}, {"fusion_bias", flat(bias)}};
}

std::vector<ConstParamView> FusionHead::params() const {
    return {{"fusion_weight", flat(weight)}, {"fusion_bias", flat(bias)}};
}

Eigen::VectorXd FusionHead::forward(const Eigen::VectorXd& input) const {
    if (input.size() != weight.cols())
        throw Error("fusion input has " + std::to_string(input.size()) + " values, expected " +
                    std::to_string(weight.cols()));
    return weight * input + bias;
}

PriorNetwork PriorNetwork::zeros(const TrainConfig& config, const NetworkShape& shape) {
    return build(config, shape, [&](PriorNetwork& net, TextModel model, std::size_t text_out, bool visual) {
        if (model == TextModel::cnn)
            net.cnn = TextCnnWeights::zeros(cnn_shape(config, shape, text_out));
        else
            net.rcnn = RcnnWeights::zeros(rcnn_shape(config, shape, text_out));
        if (visual) net.fusion = FusionHead::zeros(shape.k, text_out + shape.visual_dim);
    });
}

PriorNetwork PriorNetwork::random(const TrainConfig& config, const NetworkShape& shape, Rng& rng) {
    return build(config, shape, [&](PriorNetwork& net, TextModel model, std::size_t text_out, bool visual) {
        if (model == TextModel::cnn)
            net.cnn = TextCnnWeights::random(cnn_shape(config, shape, text_out), rng);
        else
            net.rcnn = RcnnWeights::random(rcnn_shape(config, shape, text_out), rng);
        if (visual) net.fusion = FusionHead::random(shape.k, text_out + shape.visual_dim, rng);
    });
}

PriorNetwork PriorNetwork::zeros_like() const {
    PriorNetwork out;
    out.variant = variant;
    if (cnn) out.cnn = cnn->zeros_like();
    if (rcnn) out.rcnn = rcnn->zeros_like();
    if (fusion) out.fusion = fusion->zeros_like();
    return out;
}

std::size_t PriorNetwork::text_dim() const {
    if (cnn) return cnn->output_dim();
    if (rcnn) return rcnn->output_dim();
    return 0;
}

std::size_t PriorNetwork::visual_dim() const { return fusion ? fusion->input_dim() - text_dim() : 0; }

std::size_t PriorNetwork::pooled_dim() const {
    if (cnn) return cnn->pooled_dim();
    if (rcnn) return rcnn->pooled_dim();
    return 0;
}

std::vector<ParamView> PriorNetwork::params() {
    std::vector<ParamView> out;
    if (cnn) append(out, cnn->params());
    if (rcnn) append(out, rcnn->params());
    if (fusion) append(out, fusion->params());
    return out;
}

std::vector<ConstParamView> PriorNetwork::params() const {
    std::vector<ConstParamView> out;
    if (cnn) append(out, cnn->params());
    if (rcnn) append(out, rcnn->params());
    if (fusion) append(out, fusion->params());
    return out;
}

namespace {

Eigen::VectorXd fusion_input(const Eigen::VectorXd& text, const PriorNetwork& net, const ItemInput& input) {
    const auto vdim = static_cast<Eigen::Index>(net.visual_dim());
    if (!input.visual) throw Error("visual variant called without a visual vector");
    if (input.visual->size() != vdim)
        throw Error("visual vector has " + std::to_string(input.visual->size()) + " values, expected " +
                    std::to_string(vdim));
    Eigen::VectorXd z(text.size() + vdim);
    z << text, *input.visual;
    return z;
}

// Forward, residual and backward for one encoder type.
template <typename W>
void accumulate(const PriorNetwork& net, const W& encoder, W& encoder_grad, FusionHead* fusion_grad,
                const PriorExample& ex, double lambda_v, double& loss) {
    auto fwd = branch_forward(encoder, ex.input.tokens, ex.mask);
    Eigen::VectorXd z;
    Eigen::VectorXd mu;
    if (net.fusion) {
        z = fusion_input(fwd.output, net, ex.input);
        mu = net.fusion->forward(z);
    } else {
        mu = fwd.output;
    }
    if (ex.target.size() != mu.size()) throw Error("prior target dimension does not match k");
    const Eigen::VectorXd residual = ex.target - mu;
    loss += 0.5 * lambda_v * residual.squaredNorm();
    const Eigen::VectorXd grad_mu = -lambda_v * residual;

    Eigen::VectorXd grad_text;
    if (net.fusion) {
        fusion_grad->weight.noalias() += grad_mu * z.transpose();
        fusion_grad->bias += grad_mu;
        grad_text = net.fusion->weight.leftCols(fwd.output.size()).transpose() * grad_mu;
    } else {
        grad_text = grad_mu;
    }
    branch_backward(encoder, fwd.cache, grad_text, encoder_grad);
}

}  // namespace

Eigen::VectorXd compute_item_prior(const PriorNetwork& net, std::size_t k, const ItemInput& input,
                                   const Eigen::VectorXd* dropout_mask) {
    if (net.empty()) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    Eigen::VectorXd text = net.cnn ? cnn_text_forward(*net.cnn, input.tokens, dropout_mask).output
                                   : rcnn_forward(*net.rcnn, input.tokens, dropout_mask).output;
    Eigen::VectorXd mu = net.fusion ? net.fusion->forward(fusion_input(text, net, input)) : text;
    if (mu.size() != static_cast<Eigen::Index>(k))
        throw Error("network produces " + std::to_string(mu.size()) + " values, expected k = " + std::to_string(k));
    return mu;
}

NetworkGradient network_gradient(const PriorNetwork& net, std::span<const PriorExample> batch, double lambda_v,
                                 double lambda_w) {
    NetworkGradient out{0.0, net.zeros_like()};
    if (net.empty()) return out;
    FusionHead* fusion_grad = out.gradient.fusion ? &*out.gradient.fusion : nullptr;
    for (const auto& ex : batch) {
        if (net.cnn)
            accumulate(net, *net.cnn, *out.gradient.cnn, fusion_grad, ex, lambda_v, out.loss);
        else
            accumulate(net, *net.rcnn, *out.gradient.rcnn, fusion_grad, ex, lambda_v, out.loss);
    }
    out.loss += 0.5 * lambda_w * squared_norm(net);
    add_scaled(out.gradient, lambda_w, net);
    if (!std::isfinite(out.loss) || !all_finite(out.gradient)) throw NumericError("non-finite network gradient");
    return out;
}

}  // namespace vrcmf
