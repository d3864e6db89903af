#include "vrcmf/factors.hpp"

#include <cmath>
#include <random>

#include "vrcmf/error.hpp"
#include "vrcmf/parallel.hpp"
#include "vrcmf/random.hpp"

namespace vrcmf {

namespace {

// Shared body of both updates: `others` holds the fixed side, `neighbors`
// the observed ratings of the row being solved.
Eigen::VectorXd solve_row(std::span<const Neighbor> neighbors, const Eigen::MatrixXd& others,
                          const std::optional<ConfidenceParams>& confidence, double lambda,
                          const Eigen::VectorXd* prior) {
    const Eigen::Index k = others.rows();
    const auto count = static_cast<Eigen::Index>(neighbors.size());
    // No data: the minimizer is the prior mean itself. Returned directly so
    // it is exact rather than lambda * mu / lambda.
    if (count == 0) return prior ? Eigen::VectorXd(*prior) : Eigen::VectorXd::Zero(k);
    Eigen::MatrixXd gathered(k, count);
    Eigen::VectorXd values(count);
    for (Eigen::Index t = 0; t < count; ++t) {
        gathered.col(t) = others.col(neighbors[static_cast<std::size_t>(t)].index);
        values(t) = neighbors[static_cast<std::size_t>(t)].value;
    }

    Eigen::MatrixXd a(k, k);
    Eigen::VectorXd b(k);
    if (confidence) {
        Eigen::VectorXd c(count);
        for (Eigen::Index t = 0; t < count; ++t) c(t) = confidence_factor(values(t), *confidence);
        Eigen::MatrixXd weighted = gathered * c.asDiagonal();
        a.noalias() = weighted * gathered.transpose();
        b.noalias() = weighted * values;
    } else {
        a.noalias() = gathered * gathered.transpose();
        b.noalias() = gathered * values;
    }
    a.diagonal().array() += lambda;
    if (prior) b += lambda * *prior;
    return solve_spd(std::move(a), b);
}

}  // namespace

LatentFactors init_factors(std::size_t num_users, std::size_t num_items, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw Error("k must be >= 1");
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LatentFactors f;
    f.users.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(num_users));
    f.items.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(num_items));
    for (Eigen::Index i = 0; i < f.users.size(); ++i) f.users.data()[i] = unit(rng);
    for (Eigen::Index i = 0; i < f.items.size(); ++i) f.items.data()[i] = unit(rng);
    return f;
}

Eigen::VectorXd solve_spd(Eigen::MatrixXd a, const Eigen::VectorXd& b) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        a.diagonal().array() += 1e-10;
        llt.compute(a);
        if (llt.info() != Eigen::Success) throw NumericError("normal equations are not positive definite");
    }
    Eigen::VectorXd x = llt.solve(b);
    if (!x.allFinite()) throw NumericError("non-finite latent vector");
    return x;
}

Eigen::VectorXd als_update_user(std::size_t user, const Eigen::MatrixXd& items, const RatingsMatrix& ratings,
                                const std::optional<ConfidenceParams>& confidence, double lambda_u) {
    if (!(lambda_u > 0.0)) throw Error("lambda_u must be > 0");
    if (items.cols() != static_cast<Eigen::Index>(ratings.num_items())) throw Error("item factor count mismatch");
    return solve_row(ratings.user_ratings(user), items, confidence, lambda_u, nullptr);
}

Eigen::VectorXd als_update_item(std::size_t item, const Eigen::MatrixXd& users, const RatingsMatrix& ratings,
                                const std::optional<ConfidenceParams>& confidence, double lambda_v,
                                const Eigen::VectorXd* prior) {
    if (!(lambda_v > 0.0)) throw Error("lambda_v must be > 0");
    if (users.cols() != static_cast<Eigen::Index>(ratings.num_users())) throw Error("user factor count mismatch");
    if (prior && prior->size() != users.rows()) throw Error("prior dimension does not match k");
    return solve_row(ratings.item_ratings(item), users, confidence, lambda_v, prior);
}

void sweep_users(LatentFactors& factors, const RatingsMatrix& ratings,
                 const std::optional<ConfidenceParams>& confidence, double lambda_u, std::size_t threads) {
    parallel_for(ratings.num_users(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            factors.users.col(static_cast<Eigen::Index>(i)) =
                als_update_user(i, factors.items, ratings, confidence, lambda_u);
    });
}

void sweep_items(LatentFactors& factors, const RatingsMatrix& ratings,
                 const std::optional<ConfidenceParams>& confidence, double lambda_v,
                 const Eigen::MatrixXd* priors, std::size_t threads) {
    if (priors && (priors->rows() != factors.items.rows() || priors->cols() != factors.items.cols()))
        throw Error("prior matrix shape does not match item factors");
    parallel_for(ratings.num_items(), threads, [&](std::size_t begin, std::size_t end) {
        Eigen::VectorXd mu;
        for (std::size_t j = begin; j < end; ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            if (priors) mu = priors->col(col);
            factors.items.col(col) =
                als_update_item(j, factors.users, ratings, confidence, lambda_v, priors ? &mu : nullptr);
        }
    });
}

LossTerms loss_terms(const RatingsMatrix& ratings, const LatentFactors& factors, const Eigen::MatrixXd* priors,
                     double network_squared_norm, const std::optional<ConfidenceParams>& confidence,
                     double lambda_u, double lambda_v, double lambda_w) {
    if (factors.users.cols() != static_cast<Eigen::Index>(ratings.num_users()) ||
        factors.items.cols() != static_cast<Eigen::Index>(ratings.num_items()))
        throw Error("factor shapes do not match the ratings matrix");
    LossTerms t;
    for (const auto& e : ratings.entries()) {
        const double residual = e.value - factors.users.col(e.user).dot(factors.items.col(e.item));
        const double c = confidence ? confidence_factor(e.value, *confidence) : 1.0;
        t.data += 0.5 * c * residual * residual;
    }
    t.users = 0.5 * lambda_u * factors.users.squaredNorm();
    t.items = 0.5 * lambda_v * (priors ? (factors.items - *priors).squaredNorm() : factors.items.squaredNorm());
    t.network = 0.5 * lambda_w * network_squared_norm;
    if (!std::isfinite(t.total())) throw NumericError("total loss is not finite");
    return t;
}

double total_loss(const RatingsMatrix& ratings, const LatentFactors& factors, const Eigen::MatrixXd* priors,
                  double network_squared_norm, const std::optional<ConfidenceParams>& confidence,
                  double lambda_u, double lambda_v, double lambda_w) {
    return loss_terms(ratings, factors, priors, network_squared_norm, confidence, lambda_u, lambda_v, lambda_w)
        .total();
}

}  // namespace vrcmf
