#pragma once

#include <cstddef>
#include <vector>

#include "vrcmf/ratings.hpp"

namespace vrcmf {

/// User-based collaborative filtering baseline. Similarity is cosine over
/// co-rated items after subtracting each user's mean rating. A prediction is
/// the user's mean plus the similarity-weighted deviations of the `neighbors`
/// most similar users (positive similarity only) who rated the item. With no
/// such neighbour it falls back to the user's mean, and to the global mean
/// for users without training ratings.
class UserCf {
public:
    UserCf(const RatingsMatrix& train, std::size_t neighbors);

    double similarity(std::size_t a, std::size_t b) const;
    /// Similarity of `user` to every user (0 where nothing is co-rated).
    std::vector<double> similarities(std::size_t user) const;
    double predict(std::size_t user, std::size_t item) const;
    double predict(std::size_t user, std::size_t item, const std::vector<double>& sims) const;

    double user_mean(std::size_t user) const { return means_[user]; }
    double global_mean() const { return global_mean_; }

private:
    const RatingsMatrix& train_;
    std::size_t neighbors_;
    std::vector<double> means_;
    std::vector<bool> has_ratings_;
    double global_mean_ = 0.0;
};

/// RMSE of UserCf over `entries`, computing each user's similarities once.
double baseline_user_cf(const RatingsMatrix& train, const RatingsMatrix& entries, std::size_t neighbors);

/// RMSE of always predicting the training mean.
double baseline_global_mean(const RatingsMatrix& train, const RatingsMatrix& entries);

}  // namespace vrcmf
