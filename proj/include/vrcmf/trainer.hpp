#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/config.hpp"
#include "vrcmf/factors.hpp"
#include "vrcmf/prior_network.hpp"
#include "vrcmf/ratings.hpp"
#include "vrcmf/side_data.hpp"

namespace vrcmf {

enum class SweepPhase { users, items };

struct IterationLog {
    std::size_t iteration = 0;
    double loss = 0.0;
    double train_rmse = 0.0;
    /// NaN when no validation set is given.
    double val_rmse = 0.0;
};

/// Hooks for tests and progress output. Loss is only evaluated around the
/// half-sweeps when an observer asks for it.
class FitObserver {
public:
    virtual ~FitObserver() = default;
    virtual bool wants_half_sweeps() const { return false; }
    virtual void on_half_sweep(SweepPhase, std::size_t /*iteration*/, double /*before*/, double /*after*/) {}
    virtual void on_iteration(const IterationLog&) {}
};

struct FitOptions {
    FitObserver* observer = nullptr;
    /// embed_dim x vocab word vectors copied into the text encoder before training.
    const Eigen::MatrixXd* embeddings = nullptr;
};

struct TrainedModel {
    TrainConfig config;
    LatentFactors factors;
    PriorNetwork network;
    /// k x n; column j is mu_j at the returned iterate.
    Eigen::MatrixXd priors;
    std::size_t best_iteration = 0;
    std::vector<IterationLog> log;
};

/// Alternates user sweeps, item sweeps against the current priors, and one
/// epoch of mini-batch gradient descent on the prior network. Returns the
/// iterate with the lowest validation RMSE (the last one without validation).
TrainedModel fit(const RatingsMatrix& train, const RatingsMatrix* validation, const ItemSideData& side,
                 const TrainConfig& config, FitOptions options = {});

/// One pass of mini-batch descent over `items`, regressing mu_j on targets
/// v_j. The step is lr / (lambda_v * batch) times the gradient.
void network_epoch(PriorNetwork& net, const ItemSideData& side, const Eigen::MatrixXd& targets,
                   std::vector<std::size_t> items, const TrainConfig& config, Rng& shuffle_rng, Rng& dropout_rng);

/// `iter,loss,train_rmse,val_rmse` with a header row.
void write_training_log(std::ostream& out, const std::vector<IterationLog>& log);

}  // namespace vrcmf
