#include "vrcmf/rcnn.hpp"

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

template <typename Self, typename View>
std::vector<View> collect(Self& w) {
    return {
        {"embedding", flat(w.embedding)},
        {"left_recurrent", flat(w.left_recurrent)},
        {"right_recurrent", flat(w.right_recurrent)},
        {"left_input", flat(w.left_input)},
        {"right_input", flat(w.right_input)},
        {"left_start", flat(w.left_start)},
        {"right_end", flat(w.right_end)},
        {"hidden", flat(w.hidden)},
        {"hidden_bias", flat(w.hidden_bias)},
        {"output", flat(w.output)},
        {"output_bias", flat(w.output_bias)},
    };
}

}  // namespace

RcnnWeights RcnnWeights::zeros(const RcnnShape& s) {
    if (s.vocab_size == 0 || s.embed_dim == 0 || s.context_dim == 0 || s.hidden == 0 || s.output_dim == 0)
        throw Error("RCNN dimensions must be positive");
    if (s.context_window < 1 || s.context_window % 2 == 0)
        throw Error("RCNN context window must be odd and >= 1");
    const auto e = static_cast<Eigen::Index>(s.embed_dim);
    const auto h = static_cast<Eigen::Index>(s.context_dim);
    const auto rep = 2 * h + e;
    RcnnWeights w;
    w.context_window = s.context_window;
    w.embedding = Eigen::MatrixXd::Zero(e, static_cast<Eigen::Index>(s.vocab_size) + 1);
    w.left_recurrent = Eigen::MatrixXd::Zero(h, h);
    w.right_recurrent = Eigen::MatrixXd::Zero(h, h);
    w.left_input = Eigen::MatrixXd::Zero(h, e);
    w.right_input = Eigen::MatrixXd::Zero(h, e);
    w.left_start = Eigen::VectorXd::Zero(h);
    w.right_end = Eigen::VectorXd::Zero(h);
    w.hidden = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.hidden),
                                     static_cast<Eigen::Index>(s.context_window) * rep);
    w.hidden_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.hidden));
    w.output = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.output_dim), static_cast<Eigen::Index>(s.hidden));
    w.output_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.output_dim));
    return w;
}

RcnnWeights RcnnWeights::random(const RcnnShape& s, Rng& rng) {
    auto w = zeros(s);
    const double bound = 0.5 / static_cast<double>(s.embed_dim);
    std::uniform_real_distribution<double> emb(-bound, bound);
    w.embedding.leftCols(w.embedding.cols() - 1) =
        Eigen::MatrixXd::NullaryExpr(w.embedding.rows(), w.embedding.cols() - 1, [&] { return emb(rng); });
    w.left_recurrent = glorot(w.left_recurrent.rows(), w.left_recurrent.cols(), rng);
    w.right_recurrent = glorot(w.right_recurrent.rows(), w.right_recurrent.cols(), rng);
    w.left_input = glorot(w.left_input.rows(), w.left_input.cols(), rng);
    w.right_input = glorot(w.right_input.rows(), w.right_input.cols(), rng);
    w.hidden = glorot(w.hidden.rows(), w.hidden.cols(), rng);
    w.output = glorot(w.output.rows(), w.output.cols(), rng);
    return w;
}

RcnnWeights RcnnWeights::zeros_like() const {
    RcnnWeights z = *this;
    for (auto& p : z.params()) std::fill(p.values.begin(), p.values.end(), 0.0);
    return z;
}

std::vector<ParamView> RcnnWeights::params() { return collect<RcnnWeights, ParamView>(*this); }
std::vector<ConstParamView> RcnnWeights::params() const {
    return collect<const RcnnWeights, ConstParamView>(*this);
}

RcnnForward rcnn_forward(const RcnnWeights& w, std::span<const int> tokens, const Eigen::VectorXd* dropout_mask) {
    if (tokens.empty()) throw Error("RCNN input is empty");
    const int pad = w.pad_index();
    for (int t : tokens)
        if (t < 0 || t > pad) throw Error("token index " + std::to_string(t) + " outside vocabulary");

    RcnnForward fwd;
    auto& c = fwd.cache;
    c.tokens.assign(tokens.begin(), tokens.end());
    const auto n = static_cast<Eigen::Index>(c.tokens.size());
    const auto h = static_cast<Eigen::Index>(w.context_dim());
    const auto e = static_cast<Eigen::Index>(w.embed_dim());
    const auto rep = 2 * h + e;
    const auto half = static_cast<Eigen::Index>(w.context_window / 2);
    auto emb = [&](Eigen::Index i) { return w.embedding.col(c.tokens[static_cast<std::size_t>(i)]); };

    c.left.resize(h, n);
    c.left_pre = Eigen::MatrixXd::Zero(h, n);
    c.left.col(0) = w.left_start;
    for (Eigen::Index i = 1; i < n; ++i) {
        c.left_pre.col(i) = w.left_recurrent * c.left.col(i - 1) + w.left_input * emb(i - 1);
        c.left.col(i) = c.left_pre.col(i).cwiseMax(0.0);
    }
    c.right.resize(h, n);
    c.right_pre = Eigen::MatrixXd::Zero(h, n);
    c.right.col(n - 1) = w.right_end;
    for (Eigen::Index i = n - 2; i >= 0; --i) {
        c.right_pre.col(i) = w.right_recurrent * c.right.col(i + 1) + w.right_input * emb(i + 1);
        c.right.col(i) = c.right_pre.col(i).cwiseMax(0.0);
    }

    c.windowed = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(w.context_window) * rep, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index o = 0; o < static_cast<Eigen::Index>(w.context_window); ++o) {
            const Eigen::Index src = i + o - half;
            if (src < 0 || src >= n) continue;
            auto block = c.windowed.col(i).segment(o * rep, rep);
            block.head(h) = c.left.col(src);
            block.segment(h, e) = emb(src);
            block.tail(h) = c.right.col(src);
        }
    }

    c.activation = w.hidden * c.windowed;
    c.activation.colwise() += w.hidden_bias;
    c.activation = c.activation.array().tanh();

    const auto hid = c.activation.rows();
    c.pooled.resize(hid);
    c.argmax.resize(static_cast<std::size_t>(hid));
    for (Eigen::Index r = 0; r < hid; ++r) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (c.activation(r, i) > c.activation(r, best)) best = i;
        c.argmax[static_cast<std::size_t>(r)] = best;
        c.pooled(r) = c.activation(r, best);
    }

    if (dropout_mask) {
        if (dropout_mask->size() != hid) throw Error("dropout mask size mismatch");
        c.mask = *dropout_mask;
        c.dropped = c.pooled.cwiseProduct(c.mask);
    } else {
        c.dropped = c.pooled;
    }
    c.output = w.output * c.dropped + w.output_bias;
    fwd.output = c.output;
    return fwd;
}

void rcnn_backward(const RcnnWeights& w, const RcnnCache& c, const Eigen::VectorXd& grad_output, RcnnWeights& grad) {
    const auto n = static_cast<Eigen::Index>(c.tokens.size());
    const auto h = static_cast<Eigen::Index>(w.context_dim());
    const auto e = static_cast<Eigen::Index>(w.embed_dim());
    const auto rep = 2 * h + e;
    const auto half = static_cast<Eigen::Index>(w.context_window / 2);
    auto token = [&](Eigen::Index i) { return c.tokens[static_cast<std::size_t>(i)]; };

    grad.output.noalias() += grad_output * c.dropped.transpose();
    grad.output_bias += grad_output;
    Eigen::VectorXd dpooled = w.output.transpose() * grad_output;
    if (c.mask.size() > 0) dpooled.array() *= c.mask.array();

    // Only argmax columns receive gradient from the pool.
    Eigen::MatrixXd dpre = Eigen::MatrixXd::Zero(c.activation.rows(), n);
    for (Eigen::Index r = 0; r < c.activation.rows(); ++r) {
        const Eigen::Index i = c.argmax[static_cast<std::size_t>(r)];
        const double a = c.activation(r, i);
        dpre(r, i) = dpooled(r) * (1.0 - a * a);
    }
    grad.hidden.noalias() += dpre * c.windowed.transpose();
    grad.hidden_bias += dpre.rowwise().sum();
    const Eigen::MatrixXd dwindowed = w.hidden.transpose() * dpre;

    Eigen::MatrixXd dleft = Eigen::MatrixXd::Zero(h, n);
    Eigen::MatrixXd dright = Eigen::MatrixXd::Zero(h, n);
    Eigen::MatrixXd demb = Eigen::MatrixXd::Zero(e, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index o = 0; o < static_cast<Eigen::Index>(w.context_window); ++o) {
            const Eigen::Index src = i + o - half;
            if (src < 0 || src >= n) continue;
            auto block = dwindowed.col(i).segment(o * rep, rep);
            dleft.col(src) += block.head(h);
            demb.col(src) += block.segment(h, e);
            dright.col(src) += block.tail(h);
        }
    }

    for (Eigen::Index i = n - 1; i >= 1; --i) {
        const Eigen::VectorXd d = (c.left_pre.col(i).array() > 0.0).select(dleft.col(i), 0.0);
        grad.left_recurrent.noalias() += d * c.left.col(i - 1).transpose();
        grad.left_input.noalias() += d * w.embedding.col(token(i - 1)).transpose();
        dleft.col(i - 1).noalias() += w.left_recurrent.transpose() * d;
        demb.col(i - 1).noalias() += w.left_input.transpose() * d;
    }
    grad.left_start += dleft.col(0);

    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::VectorXd d = (c.right_pre.col(i).array() > 0.0).select(dright.col(i), 0.0);
        grad.right_recurrent.noalias() += d * c.right.col(i + 1).transpose();
        grad.right_input.noalias() += d * w.embedding.col(token(i + 1)).transpose();
        dright.col(i + 1).noalias() += w.right_recurrent.transpose() * d;
        demb.col(i + 1).noalias() += w.right_input.transpose() * d;
    }
    grad.right_end += dright.col(n - 1);

    for (Eigen::Index i = 0; i < n; ++i) grad.embedding.col(token(i)) += demb.col(i);
    grad.embedding.col(w.pad_index()).setZero();
}

}  // namespace vrcmf
