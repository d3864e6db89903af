#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vrcmf {

/// Pooling levels accepted from the feature exporter and their channel counts.
inline constexpr std::array<int, 4> kVisualLevels{2, 3, 4, 5};
std::size_t level_channels(int level);

/// One activation map, row-major over (height, width, channels).
struct FeatureTensor {
    std::size_t height = 1;
    std::size_t width = 1;
    std::size_t channels = 0;
    std::vector<double> values;

    double at(std::size_t y, std::size_t x, std::size_t ch) const {
        return values[(y * width + x) * channels + ch];
    }
};

struct FeatureMapSet {
    std::string item_id;
    std::map<int, FeatureTensor> levels;
};

struct VisualFeature {
    std::string item_id;
    Eigen::VectorXd vector;
    std::vector<int> levels;
};

/// Keyed by raw item id.
using FeatureMapTable = std::map<std::string, FeatureMapSet>;

/// Reads the `#vrcmf-feat v1` format:
/// `item_id<TAB>level<TAB>h,w,c<TAB>v1,v2,...` per line.
FeatureMapTable load_feature_maps(std::istream& in, const std::string& source = "<features>");
FeatureMapTable load_feature_maps(const std::string& path);

/// Writes the same format with round-trip precision.
void write_feature_maps(std::ostream& out, const FeatureMapTable& table);

/// Per-channel mean over all spatial positions.
Eigen::VectorXd global_average_pool(const FeatureTensor& map);

/// Requested levels of `set` that are absent.
std::vector<int> missing_levels(const FeatureMapSet& set, std::span<const int> levels);

/// Pools each requested level and concatenates in ascending level order.
VisualFeature cascade_visual(const FeatureMapSet& set, std::span<const int> levels);

std::size_t cascade_dim(std::span<const int> levels);

}  // namespace vrcmf
