#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "vrcmf/config.hpp"
#include "vrcmf/factors.hpp"
#include "vrcmf/prior_network.hpp"
#include "vrcmf/ratings.hpp"

namespace vrcmf {

/// Everything needed to predict without the training inputs.
struct ModelArtifact {
    TrainConfig config;
    IdMap users;
    IdMap items;
    LatentFactors factors;
    PriorNetwork network;
    std::size_t vocab_size = 0;
    std::size_t visual_dim = 0;
    std::size_t best_iteration = 0;

    /// Dense indices for raw ids; the message names the unknown identifier.
    std::size_t user_index(const std::string& id) const;
    std::size_t item_index(const std::string& id) const;
    double predict(const std::string& user, const std::string& item, bool clamp) const;
};

/// `vrcmf-model 1` text header, then little-endian binary blocks.
void save_model(std::ostream& out, const ModelArtifact& model);
ModelArtifact load_model(std::istream& in, const std::string& source = "<model>");

void save_model(const std::string& path, const ModelArtifact& model);
ModelArtifact load_model(const std::string& path);

}  // namespace vrcmf
