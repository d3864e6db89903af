#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/parameters.hpp"
#include "vrcmf/random.hpp"
#include "vrcmf/vocabulary.hpp"

namespace vrcmf {

struct RcnnShape {
    std::size_t vocab_size = 0;
    std::size_t embed_dim = 200;
    /// Width of the left and right context vectors.
    std::size_t context_dim = 100;
    /// Width of the tanh layer that is max-pooled.
    std::size_t hidden = 100;
    std::size_t output_dim = 50;
    /// Odd number of neighbouring word representations concatenated per position.
    std::size_t context_window = 1;
};

/// Recurrent-convolutional text encoder.
///
/// Left contexts run forward and right contexts backward through ReLU
/// recurrences seeded by learned boundary states. Each position is
/// represented by [left; embedding; right]; with a context window of 2s+1
/// the representations of positions i-s..i+s are concatenated, zero outside
/// the document. A tanh layer follows, then coordinate-wise max over
/// positions and a final affine map.
struct RcnnWeights {
    std::size_t context_window = 1;
    /// embed_dim x (vocab + 1); the last column is the PAD vector, held at zero.
    Eigen::MatrixXd embedding;
    Eigen::MatrixXd left_recurrent;   // context x context
    Eigen::MatrixXd right_recurrent;  // context x context
    Eigen::MatrixXd left_input;       // context x embed
    Eigen::MatrixXd right_input;      // context x embed
    Eigen::VectorXd left_start;
    Eigen::VectorXd right_end;
    Eigen::MatrixXd hidden;           // hidden x (window * (2 context + embed))
    Eigen::VectorXd hidden_bias;
    Eigen::MatrixXd output;           // output x hidden
    Eigen::VectorXd output_bias;

    static RcnnWeights zeros(const RcnnShape& shape);
    /// Embedding uniform in (-0.5/p, 0.5/p), matrices Glorot-uniform; biases
    /// and boundary states start at zero.
    static RcnnWeights random(const RcnnShape& shape, Rng& rng);
    RcnnWeights zeros_like() const;

    std::vector<ParamView> params();
    std::vector<ConstParamView> params() const;

    int pad_index() const { return static_cast<int>(embedding.cols()) - 1; }
    std::size_t embed_dim() const { return static_cast<std::size_t>(embedding.rows()); }
    std::size_t context_dim() const { return static_cast<std::size_t>(left_recurrent.rows()); }
    std::size_t representation_dim() const { return 2 * context_dim() + embed_dim(); }
    std::size_t pooled_dim() const { return static_cast<std::size_t>(hidden.rows()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(output.rows()); }
};

struct RcnnCache {
    TokenSequence tokens;
    Eigen::MatrixXd left;        // context x n
    Eigen::MatrixXd right;       // context x n
    Eigen::MatrixXd left_pre;    // pre-activations; column 0 unused
    Eigen::MatrixXd right_pre;   // column n-1 unused
    Eigen::MatrixXd windowed;    // (window * rep) x n
    Eigen::MatrixXd activation;  // hidden x n, after tanh
    std::vector<Eigen::Index> argmax;
    Eigen::VectorXd pooled;
    Eigen::VectorXd mask;
    Eigen::VectorXd dropped;
    Eigen::VectorXd output;
};

struct RcnnForward {
    Eigen::VectorXd output;
    RcnnCache cache;
};

RcnnForward rcnn_forward(const RcnnWeights& weights, std::span<const int> tokens,
                         const Eigen::VectorXd* dropout_mask = nullptr);

void rcnn_backward(const RcnnWeights& weights, const RcnnCache& cache,
                   const Eigen::VectorXd& grad_output, RcnnWeights& grad);

}  // namespace vrcmf
