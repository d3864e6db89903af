#include "vrcmf/text_cnn.hpp"

#include <algorithm>
#include <cmath>

#include "vrcmf/error.hpp"

namespace vrcmf {

namespace {

Eigen::MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-bound, bound);
    return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return dist(rng); });
}

void check_shape(const TextCnnShape& s) {
    if (s.vocab_size == 0 || s.embed_dim == 0 || s.windows.empty() || s.maps_per_window == 0 ||
        s.hidden == 0 || s.output_dim == 0)
        throw Error("text CNN dimensions must be positive");
    for (auto h : s.windows)
        if (h == 0) throw Error("text CNN window sizes must be positive");
}

template <typename Self, typename View>
std::vector<View> collect(Self& w) {
    std::vector<View> out;
    out.push_back({"embedding", flat(w.embedding)});
    for (std::size_t i = 0; i < w.filters.size(); ++i) {
        out.push_back({"filter", flat(w.filters[i])});
        out.push_back({"filter_bias", flat(w.filter_bias[i])});
    }
    out.push_back({"fc1", flat(w.fc1)});
    out.push_back({"fc1_bias", flat(w.fc1_bias)});
    out.push_back({"fc2", flat(w.fc2)});
    out.push_back({"fc2_bias", flat(w.fc2_bias)});
    return out;
}

}  // namespace

TextCnnWeights TextCnnWeights::zeros(const TextCnnShape& s) {
    check_shape(s);
    const auto p = static_cast<Eigen::Index>(s.embed_dim);
    const auto maps = static_cast<Eigen::Index>(s.maps_per_window);
    const auto nc = static_cast<Eigen::Index>(s.windows.size() * s.maps_per_window);
    TextCnnWeights w;
    w.windows = s.windows;
    w.embedding = Eigen::MatrixXd::Zero(p, static_cast<Eigen::Index>(s.vocab_size) + 1);
    for (auto h : s.windows) {
        w.filters.push_back(Eigen::MatrixXd::Zero(maps, static_cast<Eigen::Index>(h) * p));
        w.filter_bias.push_back(Eigen::VectorXd::Zero(maps));
    }
    w.fc1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.hidden), nc);
    w.fc1_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.hidden));
    w.fc2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.output_dim), static_cast<Eigen::Index>(s.hidden));
    w.fc2_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.output_dim));
    return w;
}

TextCnnWeights TextCnnWeights::random(const TextCnnShape& s, Rng& rng) {
    auto w = zeros(s);
    const double bound = 0.5 / static_cast<double>(s.embed_dim);
    std::uniform_real_distribution<double> emb(-bound, bound);
    w.embedding.leftCols(w.embedding.cols() - 1) =
        Eigen::MatrixXd::NullaryExpr(w.embedding.rows(), w.embedding.cols() - 1, [&] { return emb(rng); });
    for (auto& f : w.filters) f = glorot(f.rows(), f.cols(), rng);
    w.fc1 = glorot(w.fc1.rows(), w.fc1.cols(), rng);
    w.fc2 = glorot(w.fc2.rows(), w.fc2.cols(), rng);
    return w;
}

TextCnnWeights TextCnnWeights::zeros_like() const {
    TextCnnWeights z = *this;
    for (auto& p : z.params()) std::fill(p.values.begin(), p.values.end(), 0.0);
    return z;
}

std::vector<ParamView> TextCnnWeights::params() { return collect<TextCnnWeights, ParamView>(*this); }
std::vector<ConstParamView> TextCnnWeights::params() const {
    return collect<const TextCnnWeights, ConstParamView>(*this);
}

std::size_t TextCnnWeights::max_window() const {
    return windows.empty() ? 0 : *std::max_element(windows.begin(), windows.end());
}

std::size_t TextCnnWeights::pooled_dim() const { return static_cast<std::size_t>(fc1.cols()); }

TokenSequence pad_tokens(std::span<const int> tokens, std::size_t min_length, int pad_index) {
    TokenSequence out(tokens.begin(), tokens.end());
    if (out.size() < min_length) out.resize(min_length, pad_index);
    return out;
}

CnnForward cnn_text_forward(const TextCnnWeights& w, std::span<const int> tokens,
                            const Eigen::VectorXd* dropout_mask) {
    if (tokens.empty()) throw Error("text CNN input is empty");
    const int pad = w.pad_index();
    for (int t : tokens)
        if (t < 0 || t > pad) throw Error("token index " + std::to_string(t) + " outside vocabulary");

    CnnForward fwd;
    auto& c = fwd.cache;
    c.tokens = pad_tokens(tokens, w.max_window(), pad);
    const auto q = static_cast<Eigen::Index>(c.tokens.size());
    const auto p = w.embedding.rows();

    Eigen::MatrixXd embedded(p, q);
    for (Eigen::Index i = 0; i < q; ++i) embedded.col(i) = w.embedding.col(c.tokens[static_cast<std::size_t>(i)]);

    const auto nc = static_cast<Eigen::Index>(w.pooled_dim());
    c.pooled.resize(nc);
    c.pooled_preactivation.resize(nc);
    c.argmax.resize(w.windows.size());
    Eigen::Index slot = 0;
    for (std::size_t b = 0; b < w.windows.size(); ++b) {
        const auto h = static_cast<Eigen::Index>(w.windows[b]);
        const Eigen::Index positions = q - h + 1;
        const auto& filt = w.filters[b];
        Eigen::MatrixXd pre = filt.middleCols(0, p) * embedded.middleCols(0, positions);
        for (Eigen::Index o = 1; o < h; ++o) pre.noalias() += filt.middleCols(o * p, p) * embedded.middleCols(o, positions);
        pre.colwise() += w.filter_bias[b];

        c.argmax[b].resize(static_cast<std::size_t>(pre.rows()));
        for (Eigen::Index f = 0; f < pre.rows(); ++f, ++slot) {
            // argmax of ReLU(pre): first position of the largest positive value, else 0
            Eigen::Index best = 0;
            double best_val = std::max(0.0, pre(f, 0));
            for (Eigen::Index i = 1; i < positions; ++i) {
                const double v = std::max(0.0, pre(f, i));
                if (v > best_val) {
                    best_val = v;
                    best = i;
                }
            }
            c.argmax[b][static_cast<std::size_t>(f)] = best;
            c.pooled(slot) = best_val;
            c.pooled_preactivation(slot) = pre(f, best);
        }
    }

    if (dropout_mask) {
        if (dropout_mask->size() != nc) throw Error("dropout mask size mismatch");
        c.mask = *dropout_mask;
        c.dropped = c.pooled.cwiseProduct(c.mask);
    } else {
        c.dropped = c.pooled;
    }
    c.hidden = (w.fc1 * c.dropped + w.fc1_bias).array().tanh();
    c.output = (w.fc2 * c.hidden + w.fc2_bias).array().tanh();
    fwd.output = c.output;
    return fwd;
}

void cnn_text_backward(const TextCnnWeights& w, const CnnCache& c, const Eigen::VectorXd& grad_output,
                       TextCnnWeights& grad) {
    const Eigen::VectorXd dz2 = grad_output.array() * (1.0 - c.output.array().square());
    grad.fc2.noalias() += dz2 * c.hidden.transpose();
    grad.fc2_bias += dz2;
    const Eigen::VectorXd dz1 = (w.fc2.transpose() * dz2).array() * (1.0 - c.hidden.array().square());
    grad.fc1.noalias() += dz1 * c.dropped.transpose();
    grad.fc1_bias += dz1;
    Eigen::VectorXd dpooled = w.fc1.transpose() * dz1;
    if (c.mask.size() > 0) dpooled.array() *= c.mask.array();

    const auto p = w.embedding.rows();
    Eigen::Index slot = 0;
    for (std::size_t b = 0; b < w.windows.size(); ++b) {
        const auto h = static_cast<Eigen::Index>(w.windows[b]);
        for (std::size_t f = 0; f < c.argmax[b].size(); ++f, ++slot) {
            if (!(c.pooled_preactivation(slot) > 0.0)) continue;
            const double g = dpooled(slot);
            const auto fi = static_cast<Eigen::Index>(f);
            const Eigen::Index pos = c.argmax[b][f];
            grad.filter_bias[b](fi) += g;
            for (Eigen::Index o = 0; o < h; ++o) {
                const int token = c.tokens[static_cast<std::size_t>(pos + o)];
                grad.filters[b].row(fi).segment(o * p, p) += g * w.embedding.col(token).transpose();
                grad.embedding.col(token) += g * w.filters[b].row(fi).segment(o * p, p).transpose();
            }
        }
    }
    grad.embedding.col(w.pad_index()).setZero();
}

}  // namespace vrcmf
