#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vrcmf/prior_network.hpp"
#include "vrcmf/ratings.hpp"
#include "vrcmf/visual.hpp"
#include "vrcmf/vocabulary.hpp"

namespace vrcmf {

/// Per-item network inputs, indexed like the item factors.
struct ItemSideData {
    std::vector<TokenSequence> documents;
    /// One vector per item, or empty when no visual channel is used.
    std::vector<Eigen::VectorXd> visual;
    std::size_t vocab_size = 0;
    std::size_t visual_dim = 0;

    std::size_t num_items() const { return documents.size(); }
    ItemInput input(std::size_t item) const;
};

struct SideDataSummary {
    std::size_t missing_documents = 0;
    std::size_t empty_documents = 0;
    std::size_t missing_visual = 0;
};

/// Lines the CLI prints as warnings; at most a handful of item ids are named.
std::vector<std::string> describe(const SideDataSummary& summary);

/// Aligns documents (already encoded, keyed by raw item id) and visual
/// features to the dense item index. Items without any in-vocabulary token
/// get a single PAD token; items without visual features get a zero vector.
ItemSideData build_side_data(const IdMap& items, std::size_t vocab_size,
                             const std::map<std::string, TokenSequence>& documents,
                             const FeatureMapTable* features, const std::vector<int>& levels,
                             SideDataSummary* summary = nullptr);

/// Documents parsed and encoded against `vocab`, keyed by raw item id.
std::map<std::string, TokenSequence> encode_documents(const std::vector<std::pair<std::string, std::string>>& docs,
                                                      const Vocabulary& vocab,
                                                      const std::set<std::string>& stopwords);

/// k x n matrix of item priors; zeros for PMF.
Eigen::MatrixXd compute_priors(const PriorNetwork& net, std::size_t k, const ItemSideData& side);

}  // namespace vrcmf
