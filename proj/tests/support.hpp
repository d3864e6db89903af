#pragma once

// Independent references used by the unit and acceptance tests. Everything
// here is written with scalar loops straight from the model definitions so
// it shares no code path with the library's matrix implementations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/config.hpp"
#include "vrcmf/confidence.hpp"
#include "vrcmf/factors.hpp"
#include "vrcmf/parameters.hpp"
#include "vrcmf/ratings.hpp"
#include "vrcmf/side_data.hpp"
#include "vrcmf/rcnn.hpp"
#include "vrcmf/text_cnn.hpp"

namespace vrcmf::testkit {

/// Random ratings in {1..5} with roughly `density` of the cells observed and
/// at least one rating per user and per item.
inline RatingsMatrix random_ratings(std::size_t m, std::size_t n, double density, std::uint64_t seed,
                                    double r_max = 5.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> value(1, static_cast<int>(r_max));
    std::set<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (unit(rng) < density) cells.insert({i, j});
    for (std::size_t i = 0; i < m; ++i) cells.insert({i, i % n});
    for (std::size_t j = 0; j < n; ++j) cells.insert({j % m, j});
    std::vector<Rating> entries;
    std::int64_t t = 0;
    for (auto [i, j] : cells)
        entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                           static_cast<double>(value(rng)), t++});
    return RatingsMatrix(m, n, std::move(entries), r_max);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double lo = -1.0,
                                     double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
    return m;
}

/// Normal equations assembled entry by entry and solved with an explicit
/// inverse. `fixed` is the other side's factor matrix (k x count).
inline Eigen::VectorXd oracle_update(const RatingsMatrix& r, bool user_side, std::size_t row,
                                     const Eigen::MatrixXd& fixed, const std::optional<ConfidenceParams>& conf,
                                     double lambda, const Eigen::VectorXd* prior) {
    const Eigen::Index k = fixed.rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    for (const auto& e : r.entries()) {
        const std::size_t mine = user_side ? e.user : e.item;
        if (mine != row) continue;
        const std::size_t other = user_side ? e.item : e.user;
        double c = 1.0;
        if (conf) {
            const double x = e.value - conf->r_max / 2.0;
            c = 1.0 + conf->alpha * (conf->distance == DistanceFunction::absolute ? std::fabs(x) : x * x);
        }
        for (Eigen::Index p = 0; p < k; ++p) {
            b(p) += c * e.value * fixed(p, static_cast<Eigen::Index>(other));
            for (Eigen::Index q = 0; q < k; ++q)
                a(p, q) += c * fixed(p, static_cast<Eigen::Index>(other)) * fixed(q, static_cast<Eigen::Index>(other));
        }
    }
    for (Eigen::Index p = 0; p < k; ++p) a(p, p) += lambda;
    if (prior) b += lambda * *prior;
    return a.inverse() * b;
}

/// Loss by brute-force loops over every term.
inline double oracle_loss(const RatingsMatrix& r, const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                          const Eigen::MatrixXd* mu, double w_sq, const std::optional<ConfidenceParams>& conf,
                          double lu, double lv, double lw) {
    double loss = 0.0;
    for (const auto& e : r.entries()) {
        double pred = 0.0;
        for (Eigen::Index p = 0; p < u.rows(); ++p) pred += u(p, e.user) * v(p, e.item);
        double c = 1.0;
        if (conf) {
            const double x = e.value - conf->r_max / 2.0;
            c = 1.0 + conf->alpha * (conf->distance == DistanceFunction::absolute ? std::fabs(x) : x * x);
        }
        loss += c / 2.0 * (e.value - pred) * (e.value - pred);
    }
    for (Eigen::Index i = 0; i < u.size(); ++i) loss += lu / 2.0 * u.data()[i] * u.data()[i];
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        for (Eigen::Index p = 0; p < v.rows(); ++p) {
            const double d = v(p, j) - (mu ? (*mu)(p, j) : 0.0);
            loss += lv / 2.0 * d * d;
        }
    return loss + lw / 2.0 * w_sq;
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// Text CNN from its definition: per filter and window start, a scalar dot
/// product over the stacked embeddings, ReLU, max over positions.
inline Eigen::VectorXd oracle_cnn(const TextCnnWeights& w, std::vector<int> tokens,
                                  const Eigen::VectorXd* mask = nullptr) {
    const std::size_t longest = *std::max_element(w.windows.begin(), w.windows.end());
    while (tokens.size() < longest) tokens.push_back(w.pad_index());
    const std::size_t p = w.embed_dim();
    std::vector<double> pooled;
    for (std::size_t b = 0; b < w.windows.size(); ++b) {
        const std::size_t h = w.windows[b];
        for (Eigen::Index f = 0; f < w.filters[b].rows(); ++f) {
            double best = -1.0;
            for (std::size_t start = 0; start + h <= tokens.size(); ++start) {
                double s = w.filter_bias[b](f);
                for (std::size_t o = 0; o < h; ++o)
                    for (std::size_t d = 0; d < p; ++d)
                        s += w.filters[b](f, static_cast<Eigen::Index>(o * p + d)) *
                             w.embedding(static_cast<Eigen::Index>(d), tokens[start + o]);
                best = std::max(best, relu(s));
            }
            pooled.push_back(best);
        }
    }
    if (mask)
        for (std::size_t i = 0; i < pooled.size(); ++i) pooled[i] *= (*mask)(static_cast<Eigen::Index>(i));
    Eigen::VectorXd hidden(w.fc1.rows());
    for (Eigen::Index r = 0; r < w.fc1.rows(); ++r) {
        double s = w.fc1_bias(r);
        for (std::size_t c = 0; c < pooled.size(); ++c) s += w.fc1(r, static_cast<Eigen::Index>(c)) * pooled[c];
        hidden(r) = std::tanh(s);
    }
    Eigen::VectorXd out(w.fc2.rows());
    for (Eigen::Index r = 0; r < w.fc2.rows(); ++r) {
        double s = w.fc2_bias(r);
        for (Eigen::Index c = 0; c < hidden.size(); ++c) s += w.fc2(r, c) * hidden(c);
        out(r) = std::tanh(s);
    }
    return out;
}

/// RCNN from its definition with explicit recurrences and window assembly.
inline Eigen::VectorXd oracle_rcnn(const RcnnWeights& w, const std::vector<int>& tokens,
                                   const Eigen::VectorXd* mask = nullptr) {
    const std::size_t n = tokens.size();
    const std::size_t h = w.context_dim();
    const std::size_t e = w.embed_dim();
    auto emb = [&](std::size_t pos, std::size_t d) { return w.embedding(static_cast<Eigen::Index>(d), tokens[pos]); };

    std::vector<std::vector<double>> left(n, std::vector<double>(h)), right(n, std::vector<double>(h));
    for (std::size_t d = 0; d < h; ++d) left[0][d] = w.left_start(static_cast<Eigen::Index>(d));
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t d = 0; d < h; ++d) {
            double s = 0.0;
            for (std::size_t q = 0; q < h; ++q) s += w.left_recurrent(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(q)) * left[i - 1][q];
            for (std::size_t q = 0; q < e; ++q) s += w.left_input(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(q)) * emb(i - 1, q);
            left[i][d] = relu(s);
        }
    for (std::size_t d = 0; d < h; ++d) right[n - 1][d] = w.right_end(static_cast<Eigen::Index>(d));
    for (std::size_t i = n - 1; i-- > 0;)
        for (std::size_t d = 0; d < h; ++d) {
            double s = 0.0;
            for (std::size_t q = 0; q < h; ++q) s += w.right_recurrent(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(q)) * right[i + 1][q];
            for (std::size_t q = 0; q < e; ++q) s += w.right_input(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(q)) * emb(i + 1, q);
            right[i][d] = relu(s);
        }

    const std::size_t rep = 2 * h + e;
    const long half = static_cast<long>(w.context_window / 2);
    const auto hid = static_cast<std::size_t>(w.hidden.rows());
    std::vector<double> pooled(hid, -2.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(w.context_window * rep, 0.0);
        for (std::size_t o = 0; o < w.context_window; ++o) {
            const long src = static_cast<long>(i) + static_cast<long>(o) - half;
            if (src < 0 || src >= static_cast<long>(n)) continue;
            const auto s = static_cast<std::size_t>(src);
            for (std::size_t d = 0; d < h; ++d) x[o * rep + d] = left[s][d];
            for (std::size_t d = 0; d < e; ++d) x[o * rep + h + d] = emb(s, d);
            for (std::size_t d = 0; d < h; ++d) x[o * rep + h + e + d] = right[s][d];
        }
        for (std::size_t r = 0; r < hid; ++r) {
            double s = w.hidden_bias(static_cast<Eigen::Index>(r));
            for (std::size_t c = 0; c < x.size(); ++c) s += w.hidden(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
            pooled[r] = std::max(pooled[r], std::tanh(s));
        }
    }
    if (mask)
        for (std::size_t r = 0; r < hid; ++r) pooled[r] *= (*mask)(static_cast<Eigen::Index>(r));
    Eigen::VectorXd out(w.output.rows());
    for (Eigen::Index r = 0; r < w.output.rows(); ++r) {
        double s = w.output_bias(r);
        for (std::size_t c = 0; c < hid; ++c) s += w.output(r, static_cast<Eigen::Index>(c)) * pooled[c];
        out(r) = s;
    }
    return out;
}

struct TensorCheck {
    std::string name;
    double relative_error = 0.0;
};

/// Central differences of `loss` against `analytic` for every tensor of
/// `weights`. Each tensor's error is |g_a - g_n| / (|g_a| + |g_n|) over the
/// whole tensor; tensors whose gradient is identically zero report 0.
template <typename W>
std::vector<TensorCheck> finite_difference_check(W weights, const W& analytic, const std::function<double(const W&)>& loss,
                                                 double step = 1e-6) {
    std::vector<TensorCheck> out;
    auto views = weights.params();
    auto grads = analytic.params();
    for (std::size_t t = 0; t < views.size(); ++t) {
        double diff = 0.0, norm_a = 0.0, norm_n = 0.0;
        for (std::size_t i = 0; i < views[t].values.size(); ++i) {
            const double saved = views[t].values[i];
            views[t].values[i] = saved + step;
            const double up = loss(weights);
            views[t].values[i] = saved - step;
            const double down = loss(weights);
            views[t].values[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double a = grads[t].values[i];
            diff += (a - numeric) * (a - numeric);
            norm_a += a * a;
            norm_n += numeric * numeric;
        }
        const double denom = std::sqrt(norm_a) + std::sqrt(norm_n);
        out.push_back({std::string(views[t].name), denom == 0.0 ? 0.0 : std::sqrt(diff) / denom});
    }
    return out;
}

/// Random token sequence over [0, vocab); never empty.
inline std::vector<int> random_tokens(std::size_t vocab, std::size_t max_len, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_int_distribution<int> tok(0, static_cast<int>(vocab) - 1);
    std::vector<int> t(len(rng));
    for (auto& x : t) x = tok(rng);
    return t;
}

/// Tiny network sizes so training tests run in milliseconds.
inline TrainConfig small_config(Variant variant, std::size_t k = 3) {
    TrainConfig c;
    c.variant = variant;
    c.k = k;
    c.lambda_u = 0.5;
    c.lambda_v = 2.0;
    c.iterations = 5;
    c.repeats = 1;
    c.embed_dim = 4;
    c.cnn_windows = {1, 2};
    c.cnn_maps = 3;
    c.projection_hidden = 5;
    c.rcnn_context_dim = 3;
    c.rcnn_hidden = 4;
    c.batch_size = 4;
    c.dropout = 0.0;
    c.learning_rate = 0.05;
    c.visual_levels = {2};
    return c;
}

/// Random documents for every item and, when `visual_dim` > 0, random visual vectors.
inline ItemSideData random_side_data(std::size_t items, std::size_t vocab, std::size_t visual_dim,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ItemSideData side;
    side.vocab_size = vocab;
    side.visual_dim = visual_dim;
    for (std::size_t j = 0; j < items; ++j) {
        side.documents.push_back(random_tokens(vocab, 8, rng));
        if (visual_dim) side.visual.push_back(random_matrix(static_cast<Eigen::Index>(visual_dim), 1, rng, 0, 1));
    }
    return side;
}

}  // namespace vrcmf::testkit
