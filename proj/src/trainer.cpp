#include "vrcmf/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"
#include "vrcmf/metrics.hpp"
#include "vrcmf/text_branch.hpp"

namespace vrcmf {

namespace {

void check_side_data(const RatingsMatrix& train, const ItemSideData& side, const TrainConfig& config) {
    if (!learns_prior(config.variant)) return;
    if (side.num_items() != train.num_items())
        throw Error(std::string(to_string(config.variant)) + " needs a document for each of the " +
                    std::to_string(train.num_items()) + " items");
    if (uses_visual(config.variant) && side.visual.size() != train.num_items())
        throw Error(std::string(to_string(config.variant)) + " needs visual features");
}

void load_embeddings_into(PriorNetwork& net, const Eigen::MatrixXd& vectors) {
    Eigen::MatrixXd* table = net.cnn ? &net.cnn->embedding : net.rcnn ? &net.rcnn->embedding : nullptr;
    if (!table) return;
    if (vectors.rows() != table->rows() || vectors.cols() != table->cols() - 1)
        throw Error("pretrained embeddings are " + std::to_string(vectors.rows()) + "x" +
                    std::to_string(vectors.cols()) + ", expected " + std::to_string(table->rows()) + "x" +
                    std::to_string(table->cols() - 1));
    table->leftCols(vectors.cols()) = vectors;
}

double network_norm(const PriorNetwork& net) { return net.empty() ? 0.0 : squared_norm(net); }

}  // namespace

void network_epoch(PriorNetwork& net, const ItemSideData& side, const Eigen::MatrixXd& targets,
                   std::vector<std::size_t> items, const TrainConfig& config, Rng& shuffle_rng, Rng& dropout_rng) {
    if (net.empty() || items.empty()) return;
    std::shuffle(items.begin(), items.end(), shuffle_rng);
    const auto pooled = static_cast<Eigen::Index>(net.pooled_dim());
    for (std::size_t start = 0; start < items.size(); start += config.batch_size) {
        const std::size_t end = std::min(items.size(), start + config.batch_size);
        std::vector<Eigen::VectorXd> masks;
        masks.reserve(end - start);
        std::vector<PriorExample> batch;
        batch.reserve(end - start);
        for (std::size_t t = start; t < end; ++t) {
            const auto j = items[t];
            const Eigen::VectorXd* mask = nullptr;
            if (config.dropout > 0.0) {
                masks.push_back(make_dropout_mask(pooled, config.dropout, dropout_rng));
                mask = &masks.back();
            }
            batch.push_back({side.input(j), targets.col(static_cast<Eigen::Index>(j)), mask});
        }
        auto grad = network_gradient(net, batch, config.lambda_v, config.lambda_w);
        const double step = config.learning_rate / (config.lambda_v * static_cast<double>(batch.size()));
        add_scaled(net, -step, grad.gradient);
    }
}

TrainedModel fit(const RatingsMatrix& train, const RatingsMatrix* validation, const ItemSideData& side,
                 const TrainConfig& config, FitOptions options) {
    config.validate();
    if (train.empty()) throw Error("training set is empty");
    check_side_data(train, side, config);
    if (validation && validation->empty()) validation = nullptr;
    if (validation &&
        (validation->num_users() != train.num_users() || validation->num_items() != train.num_items()))
        throw Error("validation set uses a different index space");

    const auto k = config.k;
    TrainedModel model;
    model.config = config;
    model.factors = init_factors(train.num_users(), train.num_items(), k, derive_seed(config.seed, SeedStream::factors));

    if (learns_prior(config.variant)) {
        Rng init_rng(derive_seed(config.seed, SeedStream::network_init));
        NetworkShape shape{config.variant, k, side.vocab_size, side.visual_dim};
        model.network = PriorNetwork::random(config, shape, init_rng);
        if (options.embeddings) load_embeddings_into(model.network, *options.embeddings);
    } else {
        model.network.variant = config.variant;
    }
    Rng shuffle_rng(derive_seed(config.seed, SeedStream::network_shuffle));
    Rng dropout_rng(derive_seed(config.seed, SeedStream::dropout));

    std::optional<ConfidenceParams> conf;
    if (config.confidence_enabled()) conf = config.confidence_params;

    // Only items with training ratings carry information about W'.
    std::vector<std::size_t> rated_items;
    for (std::size_t j = 0; j < train.num_items(); ++j)
        if (!train.item_ratings(j).empty()) rated_items.push_back(j);

    const bool learn = learns_prior(config.variant);
    Eigen::MatrixXd priors = learn ? compute_priors(model.network, k, side)
                                   : Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                           static_cast<Eigen::Index>(train.num_items()));
    const Eigen::MatrixXd* prior_ptr = learn ? &priors : nullptr;

    auto observer = options.observer;
    const bool watch = observer && observer->wants_half_sweeps();
    auto loss_now = [&] {
        return total_loss(train, model.factors, prior_ptr, network_norm(model.network), conf, config.lambda_u,
                          config.lambda_v, config.lambda_w);
    };

    LatentFactors best_factors = model.factors;
    PriorNetwork best_network = model.network;
    Eigen::MatrixXd best_priors = priors;
    double best_val = std::numeric_limits<double>::infinity();

    for (std::size_t it = 1; it <= config.iterations; ++it) {
        double before = watch ? loss_now() : 0.0;
        sweep_users(model.factors, train, conf, config.lambda_u, config.threads);
        if (watch) observer->on_half_sweep(SweepPhase::users, it, before, loss_now());

        before = watch ? loss_now() : 0.0;
        sweep_items(model.factors, train, conf, config.lambda_v, prior_ptr, config.threads);
        if (watch) observer->on_half_sweep(SweepPhase::items, it, before, loss_now());

        if (learn) {
            for (std::size_t e = 0; e < config.network_epochs; ++e)
                network_epoch(model.network, side, model.factors.items, rated_items, config, shuffle_rng,
                              dropout_rng);
            priors = compute_priors(model.network, k, side);
            // Unrated items are pure prior; keep them on the current one.
            for (std::size_t j = 0; j < train.num_items(); ++j)
                if (train.item_ratings(j).empty())
                    model.factors.items.col(static_cast<Eigen::Index>(j)) = priors.col(static_cast<Eigen::Index>(j));
        }

        IterationLog entry;
        entry.iteration = it;
        entry.loss = loss_now();
        entry.train_rmse = evaluate_rmse(model.factors, train);
        entry.val_rmse = validation ? evaluate_rmse(model.factors, *validation)
                                    : std::numeric_limits<double>::quiet_NaN();
        model.log.push_back(entry);
        if (observer) observer->on_iteration(entry);

        if (!validation || entry.val_rmse < best_val) {
            best_val = validation ? entry.val_rmse : best_val;
            best_factors = model.factors;
            best_network = model.network;
            best_priors = priors;
            model.best_iteration = it;
        }
    }

    model.factors = std::move(best_factors);
    model.network = std::move(best_network);
    model.priors = std::move(best_priors);
    return model;
}

void write_training_log(std::ostream& out, const std::vector<IterationLog>& log) {
    out << "iter,loss,train_rmse,val_rmse\n";
    for (const auto& e : log) {
        out << e.iteration << ',' << format_fixed(e.loss, 6) << ',' << format_fixed(e.train_rmse, 6) << ','
            << (std::isnan(e.val_rmse) ? std::string("nan") : format_fixed(e.val_rmse, 6)) << '\n';
    }
}

}  // namespace vrcmf
