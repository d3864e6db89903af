#include "vrcmf/glove.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "vrcmf/binary_io.hpp"
#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"
#include "vrcmf/random.hpp"

namespace vrcmf {

namespace {
constexpr std::string_view kEmbeddingMagic = "vrcmf-emb";
constexpr int kEmbeddingVersion = 1;
}  // namespace

double CooccurrenceMatrix::at(int row, int col) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{row, col},
                               [](const CooccurrenceEntry& e, const std::pair<int, int>& key) {
                                   return std::pair{e.row, e.col} < key;
                               });
    if (it != entries.end() && it->row == row && it->col == col) return it->value;
    return 0.0;
}

CooccurrenceMatrix build_cooccurrence(std::span<const TokenSequence> documents, std::size_t window) {
    if (window < 1) throw Error("co-occurrence window must be >= 1");
    std::unordered_map<std::uint64_t, double> counts;
    CooccurrenceMatrix co;
    co.window = window;
    auto key = [](int a, int b) {
        return (std::uint64_t{static_cast<std::uint32_t>(a)} << 32) | static_cast<std::uint32_t>(b);
    };
    for (const auto& doc : documents) {
        co.token_count += doc.size();
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const std::size_t last = std::min(doc.size(), i + window + 1);
            for (std::size_t j = i + 1; j < last; ++j) {
                const double decay = 1.0 / static_cast<double>(j - i);
                counts[key(doc[i], doc[j])] += decay;
                counts[key(doc[j], doc[i])] += decay;
            }
        }
    }
    co.entries.reserve(counts.size());
    for (const auto& [k, v] : counts) {
        co.entries.push_back({static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffU), v});
    }
    std::sort(co.entries.begin(), co.entries.end(), [](const auto& a, const auto& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return co;
}

double glove_weight(double x, double x_max, double beta) {
    if (x >= x_max) return 1.0;
    return std::pow(x / x_max, beta);
}

EmbeddingTable init_embedding_table(std::size_t vocab_size, std::size_t dim, std::uint64_t seed) {
    const auto v = static_cast<Eigen::Index>(vocab_size);
    const auto d = static_cast<Eigen::Index>(dim);
    const double bound = 0.5 / static_cast<double>(dim);
    Rng rng(seed);
    std::uniform_real_distribution<double> dist(-bound, bound);
    EmbeddingTable t;
    t.main = Eigen::MatrixXd::NullaryExpr(d, v, [&] { return dist(rng); });
    t.context = Eigen::MatrixXd::NullaryExpr(d, v, [&] { return dist(rng); });
    t.main_bias = Eigen::VectorXd::NullaryExpr(v, [&] { return dist(rng); });
    t.context_bias = Eigen::VectorXd::NullaryExpr(v, [&] { return dist(rng); });
    t.main_gradsq = Eigen::MatrixXd::Ones(d, v);
    t.context_gradsq = Eigen::MatrixXd::Ones(d, v);
    t.main_bias_gradsq = Eigen::VectorXd::Ones(v);
    t.context_bias_gradsq = Eigen::VectorXd::Ones(v);
    return t;
}

double glove_loss(const EmbeddingTable& table, const CooccurrenceMatrix& co, double x_max, double beta) {
    double j = 0.0;
    for (const auto& e : co.entries) {
        const double diff = table.main.col(e.row).dot(table.context.col(e.col)) +
                            table.main_bias(e.row) + table.context_bias(e.col) - std::log(e.value);
        j += glove_weight(e.value, x_max, beta) * diff * diff;
    }
    return j;
}

GloveResult train_glove(const CooccurrenceMatrix& co, std::size_t vocab_size, const GloveConfig& config) {
    if (co.entries.empty()) throw Error("co-occurrence matrix is empty");
    if (!(config.beta > 0.0 && config.beta <= 1.0)) throw Error("beta must be in (0, 1]");
    if (!(config.x_max > 0.0)) throw Error("x_max must be > 0");
    for (const auto& e : co.entries) {
        if (e.row < 0 || e.col < 0 || static_cast<std::size_t>(std::max(e.row, e.col)) >= vocab_size)
            throw Error("co-occurrence index outside vocabulary");
    }

    GloveResult result;
    auto& t = result.table;
    t = init_embedding_table(vocab_size, config.dim, config.seed);
    result.loss.push_back(glove_loss(t, co, config.x_max, config.beta));

    std::vector<std::size_t> order(co.entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, SeedStream::network_shuffle));
    const double lr = config.learning_rate;

    Eigen::VectorXd grad_main(t.main.rows()), grad_ctx(t.main.rows());
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (auto idx : order) {
            const auto& e = co.entries[idx];
            auto wi = t.main.col(e.row);
            auto wj = t.context.col(e.col);
            const double diff = wi.dot(wj) + t.main_bias(e.row) + t.context_bias(e.col) - std::log(e.value);
            const double g = 2.0 * glove_weight(e.value, config.x_max, config.beta) * diff;

            grad_main = g * wj;
            grad_ctx = g * wi;
            auto hi = t.main_gradsq.col(e.row);
            auto hj = t.context_gradsq.col(e.col);
            wi.array() -= lr * grad_main.array() / hi.array().sqrt();
            wj.array() -= lr * grad_ctx.array() / hj.array().sqrt();
            hi.array() += grad_main.array().square();
            hj.array() += grad_ctx.array().square();

            t.main_bias(e.row) -= lr * g / std::sqrt(t.main_bias_gradsq(e.row));
            t.context_bias(e.col) -= lr * g / std::sqrt(t.context_bias_gradsq(e.col));
            t.main_bias_gradsq(e.row) += g * g;
            t.context_bias_gradsq(e.col) += g * g;
        }
        const double j = glove_loss(t, co, config.x_max, config.beta);
        if (!std::isfinite(j)) throw NumericError("GloVe training diverged; lower lr");
        result.loss.push_back(j);
    }
    return result;
}

void save_embeddings(std::ostream& out, const Eigen::MatrixXd& vectors) {
    out << kEmbeddingMagic << ' ' << kEmbeddingVersion << ' ' << vectors.cols() << ' ' << vectors.rows()
        << '\n';
    BinaryWriter(out).write_matrix(vectors);
}

Eigen::MatrixXd load_embeddings(std::istream& in, const std::string& source) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError(source + ": missing header");
    auto parts = split(header, " ");
    if (parts.size() != 4 || parts[0] != kEmbeddingMagic) throw ParseError(source + ": not an embedding file");
    if (parse_int(parts[1]) != kEmbeddingVersion) throw ParseError(source + ": unsupported embedding version");
    auto words = parse_int(parts[2]);
    auto dim = parse_int(parts[3]);
    auto m = BinaryReader(in, source).read_matrix();
    if (!words || !dim || m.cols() != *words || m.rows() != *dim)
        throw ParseError(source + ": header dimensions do not match payload");
    return m;
}

void export_embeddings_text(std::ostream& out, const Vocabulary& vocab, const Eigen::MatrixXd& vectors) {
    for (std::size_t w = 0; w < vocab.size() && static_cast<Eigen::Index>(w) < vectors.cols(); ++w) {
        out << vocab.words[w];
        for (Eigen::Index d = 0; d < vectors.rows(); ++d)
            out << ' ' << format_roundtrip(vectors(d, static_cast<Eigen::Index>(w)));
        out << '\n';
    }
}

}  // namespace vrcmf
