#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/vocabulary.hpp"

namespace vrcmf {

struct CooccurrenceEntry {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Distance-weighted co-occurrence counts, sorted by (row, col). Both
/// orientations of a pair are stored.
struct CooccurrenceMatrix {
    std::vector<CooccurrenceEntry> entries;
    std::size_t window = 0;
    std::size_t token_count = 0;

    double at(int row, int col) const;
};

/// Each ordered pair at distance d <= window inside one document adds 1/d.
CooccurrenceMatrix build_cooccurrence(std::span<const TokenSequence> documents, std::size_t window);

/// GloVe weighting: (x / x_max)^beta below x_max, 1 at and above it.
double glove_weight(double x, double x_max, double beta);

struct GloveConfig {
    std::size_t dim = 200;
    double x_max = 100.0;
    double beta = 0.75;
    std::size_t epochs = 25;
    double learning_rate = 0.05;
    std::uint64_t seed = 1;
};

/// Main and context vectors are columns. `*_gradsq` hold the adagrad
/// accumulators for the matching parameter.
struct EmbeddingTable {
    Eigen::MatrixXd main;
    Eigen::MatrixXd context;
    Eigen::VectorXd main_bias;
    Eigen::VectorXd context_bias;
    Eigen::MatrixXd main_gradsq;
    Eigen::MatrixXd context_gradsq;
    Eigen::VectorXd main_bias_gradsq;
    Eigen::VectorXd context_bias_gradsq;

    std::size_t dim() const { return static_cast<std::size_t>(main.rows()); }
    std::size_t vocab_size() const { return static_cast<std::size_t>(main.cols()); }

    /// Word vectors used downstream: main + context.
    Eigen::MatrixXd word_vectors() const { return main + context; }
};

struct GloveResult {
    EmbeddingTable table;
    /// loss[0] is J before training; loss[e] is J after epoch e.
    std::vector<double> loss;
};

EmbeddingTable init_embedding_table(std::size_t vocab_size, std::size_t dim, std::uint64_t seed);

/// J = sum f(co_ij) (w_i . w~_j + b_i + b~_j - log co_ij)^2.
double glove_loss(const EmbeddingTable& table, const CooccurrenceMatrix& co, double x_max, double beta);

/// Per-pair adagrad over J, visiting pairs in a seeded shuffled order.
GloveResult train_glove(const CooccurrenceMatrix& co, std::size_t vocab_size, const GloveConfig& config);

/// Word vectors (dim x vocab) with a plain-text header followed by raw doubles.
void save_embeddings(std::ostream& out, const Eigen::MatrixXd& vectors);
Eigen::MatrixXd load_embeddings(std::istream& in, const std::string& source = "<embeddings>");
/// `word v1 v2 ...` per line.
void export_embeddings_text(std::ostream& out, const Vocabulary& vocab, const Eigen::MatrixXd& vectors);

}  // namespace vrcmf
