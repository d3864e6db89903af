#include "vrcmf/user_cf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "vrcmf/error.hpp"
#include "vrcmf/metrics.hpp"

namespace vrcmf {

UserCf::UserCf(const RatingsMatrix& train, std::size_t neighbors) : train_(train), neighbors_(neighbors) {
    if (neighbors < 1) throw Error("neighbors must be >= 1");
    if (train.empty()) throw Error("UserCF needs training ratings");
    global_mean_ = train.mean_rating();
    means_.assign(train.num_users(), global_mean_);
    has_ratings_.assign(train.num_users(), false);
    for (std::size_t u = 0; u < train.num_users(); ++u) {
        auto row = train.user_ratings(u);
        if (row.empty()) continue;
        double s = 0.0;
        for (const auto& n : row) s += n.value;
        means_[u] = s / static_cast<double>(row.size());
        has_ratings_[u] = true;
    }
}

double UserCf::similarity(std::size_t a, std::size_t b) const {
    std::map<std::uint32_t, double> ra;
    for (const auto& n : train_.user_ratings(a)) ra[n.index] = n.value - means_[a];
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& n : train_.user_ratings(b)) {
        auto it = ra.find(n.index);
        if (it == ra.end()) continue;
        const double db = n.value - means_[b];
        dot += it->second * db;
        na += it->second * it->second;
        nb += db * db;
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> UserCf::similarities(std::size_t user) const {
    const std::size_t m = train_.num_users();
    std::vector<double> dot(m, 0.0), na(m, 0.0), nb(m, 0.0);
    for (const auto& mine : train_.user_ratings(user)) {
        const double da = mine.value - means_[user];
        for (const auto& other : train_.item_ratings(mine.index)) {
            const double db = other.value - means_[other.index];
            dot[other.index] += da * db;
            na[other.index] += da * da;
            nb[other.index] += db * db;
        }
    }
    std::vector<double> sims(m, 0.0);
    for (std::size_t b = 0; b < m; ++b)
        if (b != user && na[b] > 0.0 && nb[b] > 0.0) sims[b] = dot[b] / (std::sqrt(na[b]) * std::sqrt(nb[b]));
    return sims;
}

double UserCf::predict(std::size_t user, std::size_t item) const { return predict(user, item, similarities(user)); }

double UserCf::predict(std::size_t user, std::size_t item, const std::vector<double>& sims) const {
    if (!has_ratings_[user]) return global_mean_;
    std::vector<std::pair<double, std::size_t>> cands;  // (similarity, rater) with rating looked up below
    std::vector<double> rating_of;
    for (const auto& n : train_.item_ratings(item)) {
        if (n.index == user || !(sims[n.index] > 0.0)) continue;
        cands.emplace_back(sims[n.index], rating_of.size());
        rating_of.push_back(n.value - means_[n.index]);
    }
    if (cands.empty()) return means_[user];
    const auto keep = std::min(neighbors_, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const auto& x, const auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < keep; ++t) {
        num += cands[t].first * rating_of[cands[t].second];
        den += cands[t].first;
    }
    return means_[user] + num / den;
}

double baseline_user_cf(const RatingsMatrix& train, const RatingsMatrix& entries, std::size_t neighbors) {
    if (entries.empty()) throw Error("cannot compute RMSE of an empty rating set");
    if (entries.num_users() != train.num_users() || entries.num_items() != train.num_items())
        throw Error("held-out ratings use a different index space");
    UserCf cf(train, neighbors);
    double sum = 0.0;
    for (std::size_t u = 0; u < entries.num_users(); ++u) {
        auto row = entries.user_ratings(u);
        if (row.empty()) continue;
        const auto sims = cf.similarities(u);
        for (const auto& n : row) {
            const double d = n.value - cf.predict(u, n.index, sims);
            sum += d * d;
        }
    }
    return std::sqrt(sum / static_cast<double>(entries.size()));
}

double baseline_global_mean(const RatingsMatrix& train, const RatingsMatrix& entries) {
    if (train.empty()) throw Error("training set is empty");
    return constant_rmse(train.mean_rating(), entries);
}

}  // namespace vrcmf
