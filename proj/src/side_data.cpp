#include "vrcmf/side_data.hpp"

#include "vrcmf/error.hpp"

namespace vrcmf {

ItemInput ItemSideData::input(std::size_t item) const {
    ItemInput in;
    if (item < documents.size()) in.tokens = documents[item];
    if (item < visual.size()) in.visual = &visual[item];
    return in;
}

std::vector<std::string> describe(const SideDataSummary& s) {
    std::vector<std::string> out;
    if (s.missing_documents)
        out.push_back(std::to_string(s.missing_documents) + " item(s) have no document; using a PAD-only document");
    if (s.empty_documents)
        out.push_back(std::to_string(s.empty_documents) +
                      " document(s) have no in-vocabulary token; using a PAD-only document");
    if (s.missing_visual)
        out.push_back(std::to_string(s.missing_visual) + " item(s) lack visual features; using a zero vector");
    return out;
}

ItemSideData build_side_data(const IdMap& items, std::size_t vocab_size,
                             const std::map<std::string, TokenSequence>& documents,
                             const FeatureMapTable* features, const std::vector<int>& levels,
                             SideDataSummary* summary) {
    SideDataSummary local;
    auto& sum = summary ? *summary : local;
    ItemSideData side;
    side.vocab_size = vocab_size;
    const int pad = static_cast<int>(vocab_size);
    side.documents.reserve(items.size());
    for (const auto& id : items.ids()) {
        auto it = documents.find(id);
        if (it == documents.end()) {
            ++sum.missing_documents;
            side.documents.push_back({pad});
        } else if (it->second.empty()) {
            ++sum.empty_documents;
            side.documents.push_back({pad});
        } else {
            side.documents.push_back(it->second);
        }
    }
    if (features) {
        side.visual_dim = cascade_dim(levels);
        side.visual.reserve(items.size());
        for (const auto& id : items.ids()) {
            auto it = features->find(id);
            if (it == features->end() || !missing_levels(it->second, levels).empty()) {
                ++sum.missing_visual;
                side.visual.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(side.visual_dim)));
            } else {
                side.visual.push_back(cascade_visual(it->second, levels).vector);
            }
        }
    }
    return side;
}

std::map<std::string, TokenSequence> encode_documents(const std::vector<std::pair<std::string, std::string>>& docs,
                                                      const Vocabulary& vocab,
                                                      const std::set<std::string>& stopwords) {
    std::map<std::string, TokenSequence> out;
    for (const auto& [id, text] : docs) out[id] = encode_document(vocab, text, stopwords);
    return out;
}

Eigen::MatrixXd compute_priors(const PriorNetwork& net, std::size_t k, const ItemSideData& side) {
    const auto n = static_cast<Eigen::Index>(side.num_items());
    Eigen::MatrixXd priors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), n);
    if (net.empty()) return priors;
    for (Eigen::Index j = 0; j < n; ++j)
        priors.col(j) = compute_item_prior(net, k, side.input(static_cast<std::size_t>(j)));
    return priors;
}

}  // namespace vrcmf
