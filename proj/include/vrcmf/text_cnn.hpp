#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/parameters.hpp"
#include "vrcmf/random.hpp"
#include "vrcmf/vocabulary.hpp"

namespace vrcmf {

struct TextCnnShape {
    std::size_t vocab_size = 0;
    std::size_t embed_dim = 200;
    std::vector<std::size_t> windows{3, 4, 5};
    std::size_t maps_per_window = 100;
    std::size_t hidden = 200;
    std::size_t output_dim = 50;
};

/// Convolutional text encoder: embedding lookup, one filter bank per window
/// size with ReLU, max-over-time pooling, then two tanh projections.
struct TextCnnWeights {
    std::vector<std::size_t> windows;
    /// embed_dim x (vocab + 1); the last column is the PAD vector, held at zero.
    Eigen::MatrixXd embedding;
    /// maps x (window * embed_dim); columns [o*p, (o+1)*p) weight the token at offset o.
    std::vector<Eigen::MatrixXd> filters;
    std::vector<Eigen::VectorXd> filter_bias;
    Eigen::MatrixXd fc1;
    Eigen::VectorXd fc1_bias;
    Eigen::MatrixXd fc2;
    Eigen::VectorXd fc2_bias;

    static TextCnnWeights zeros(const TextCnnShape& shape);
    /// Embedding uniform in (-0.5/p, 0.5/p), dense layers Glorot-uniform, biases zero.
    static TextCnnWeights random(const TextCnnShape& shape, Rng& rng);
    TextCnnWeights zeros_like() const;

    std::vector<ParamView> params();
    std::vector<ConstParamView> params() const;

    int pad_index() const { return static_cast<int>(embedding.cols()) - 1; }
    std::size_t embed_dim() const { return static_cast<std::size_t>(embedding.rows()); }
    std::size_t max_window() const;
    std::size_t pooled_dim() const;
    std::size_t output_dim() const { return static_cast<std::size_t>(fc2.rows()); }
};

struct CnnCache {
    TokenSequence tokens;
    /// Per window size, per feature map: first position attaining the max.
    std::vector<std::vector<Eigen::Index>> argmax;
    /// Pre-activation at the argmax, same layout as the pooled vector.
    Eigen::VectorXd pooled_preactivation;
    Eigen::VectorXd pooled;
    Eigen::VectorXd mask;
    Eigen::VectorXd dropped;
    Eigen::VectorXd hidden;
    Eigen::VectorXd output;
};

struct CnnForward {
    Eigen::VectorXd output;
    CnnCache cache;
};

/// Right-pads with the PAD index up to `min_length`.
TokenSequence pad_tokens(std::span<const int> tokens, std::size_t min_length, int pad_index);

/// `dropout_mask`, when given, multiplies the pooled vector (inverted
/// dropout: entries are 0 or 1/(1-rate)).
CnnForward cnn_text_forward(const TextCnnWeights& weights, std::span<const int> tokens,
                            const Eigen::VectorXd* dropout_mask = nullptr);

/// Accumulates d(output . grad_output)/d(weights) into `grad`. Max-pool
/// routes to the cached first-occurrence argmax; the PAD column gets nothing.
void cnn_text_backward(const TextCnnWeights& weights, const CnnCache& cache,
                       const Eigen::VectorXd& grad_output, TextCnnWeights& grad);

}  // namespace vrcmf
