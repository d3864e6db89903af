#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "vrcmf/confidence.hpp"
#include "vrcmf/ratings.hpp"

namespace vrcmf {

/// Columns are latent vectors: users is k x m, items is k x n.
struct LatentFactors {
    Eigen::MatrixXd users;
    Eigen::MatrixXd items;

    std::size_t k() const { return static_cast<std::size_t>(users.rows()); }
};

/// Entries uniform in (0, 1).
LatentFactors init_factors(std::size_t num_users, std::size_t num_items, std::size_t k, std::uint64_t seed);

/// Solves (A + lambda I) x = b for symmetric positive-definite A + lambda I.
/// Retries once with 1e-10 added to the diagonal before giving up.
Eigen::VectorXd solve_spd(Eigen::MatrixXd a, const Eigen::VectorXd& b);

/// u_i = (V C_i V^T + lambda_u I)^-1 V C_i R_i over user i's observed items.
/// Without confidence C_i is the identity.
Eigen::VectorXd als_update_user(std::size_t user, const Eigen::MatrixXd& items, const RatingsMatrix& ratings,
                                const std::optional<ConfidenceParams>& confidence, double lambda_u);

/// v_j = (U C_j U^T + lambda_v I)^-1 (U C_j R_j + lambda_v mu_j). A null
/// prior means mu_j = 0.
Eigen::VectorXd als_update_item(std::size_t item, const Eigen::MatrixXd& users, const RatingsMatrix& ratings,
                                const std::optional<ConfidenceParams>& confidence, double lambda_v,
                                const Eigen::VectorXd* prior);

/// Every u_i in turn with V fixed. Columns are independent, so the result
/// does not depend on `threads`.
void sweep_users(LatentFactors& factors, const RatingsMatrix& ratings,
                 const std::optional<ConfidenceParams>& confidence, double lambda_u, std::size_t threads = 1);

/// `priors` is k x n (column j is mu_j) or null for a zero prior.
void sweep_items(LatentFactors& factors, const RatingsMatrix& ratings,
                 const std::optional<ConfidenceParams>& confidence, double lambda_v,
                 const Eigen::MatrixXd* priors, std::size_t threads = 1);

struct LossTerms {
    double data = 0.0;
    double users = 0.0;
    double items = 0.0;
    double network = 0.0;
    double total() const { return data + users + items + network; }
};

/// sum c_ij/2 (r_ij - u_i.v_j)^2 + lambda_u/2 sum |u_i|^2
///   + lambda_v/2 sum |v_j - mu_j|^2 + lambda_w/2 |W|^2.
/// Confidence weights the data term only. Throws NumericError when the
/// result is not finite.
LossTerms loss_terms(const RatingsMatrix& ratings, const LatentFactors& factors, const Eigen::MatrixXd* priors,
                     double network_squared_norm, const std::optional<ConfidenceParams>& confidence,
                     double lambda_u, double lambda_v, double lambda_w);

double total_loss(const RatingsMatrix& ratings, const LatentFactors& factors, const Eigen::MatrixXd* priors,
                  double network_squared_norm, const std::optional<ConfidenceParams>& confidence,
                  double lambda_u, double lambda_v, double lambda_w);

}  // namespace vrcmf
