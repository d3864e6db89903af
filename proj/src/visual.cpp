#include "vrcmf/visual.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"

namespace vrcmf {

namespace {
constexpr std::string_view kFeatureHeader = "#vrcmf-feat v1";

std::vector<int> normalized_levels(std::span<const int> levels) {
    if (levels.empty()) throw Error("empty level selection");
    std::set<int> uniq(levels.begin(), levels.end());
    for (int l : uniq) level_channels(l);
    return {uniq.begin(), uniq.end()};
}
}  // namespace

std::size_t level_channels(int level) {
    switch (level) {
        case 2: return 128;
        case 3: return 256;
        case 4: return 512;
        case 5: return 512;
        default: throw Error("unsupported visual level " + std::to_string(level) + " (expected 2..5)");
    }
}

FeatureMapTable load_feature_maps(std::istream& in, const std::string& source) {
    FeatureMapTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header_seen) {
            if (trim(line) != kFeatureHeader) throw ParseError(source, line_no, "missing '#vrcmf-feat v1' header");
            header_seen = true;
            continue;
        }
        if (trim(line).empty()) continue;

        auto fields = split(line, "\t");
        if (fields.size() != 4) throw ParseError(source, line_no, "expected 4 tab-separated fields");
        std::string item(trim(fields[0]));
        auto level = parse_int(fields[1]);
        if (item.empty() || !level) throw ParseError(source, line_no, "bad item id or level");
        if (*level < 2 || *level > 5)
            throw ParseError(source, line_no, "unsupported level " + std::to_string(*level) + " for item '" + item + "'");

        auto dims = split(fields[2], ",");
        if (dims.size() != 3) throw ParseError(source, line_no, "shape must be h,w,c");
        FeatureTensor t;
        auto h = parse_int(dims[0]), w = parse_int(dims[1]), c = parse_int(dims[2]);
        if (!h || !w || !c || *h < 1 || *w < 1 || *c < 1) throw ParseError(source, line_no, "shape must be positive");
        t.height = static_cast<std::size_t>(*h);
        t.width = static_cast<std::size_t>(*w);
        t.channels = static_cast<std::size_t>(*c);

        const auto expected = level_channels(static_cast<int>(*level));
        if (t.channels != expected) {
            throw ParseError(source, line_no,
                             "item '" + item + "': level " + std::to_string(*level) + " expects " +
                                 std::to_string(expected) + " channels, got " + std::to_string(t.channels));
        }
        auto values = split(fields[3], ",");
        if (values.size() != t.height * t.width * t.channels) {
            throw ParseError(source, line_no,
                             "item '" + item + "': level " + std::to_string(*level) + " expects " +
                                 std::to_string(expected) + " channels, got " +
                                 std::to_string(values.size() / std::max<std::size_t>(1, t.height * t.width)) +
                                 " (" + std::to_string(values.size()) + " values for shape " +
                                 std::string(fields[2]) + ")");
        }
        t.values.reserve(values.size());
        for (auto v : values) {
            auto d = parse_double(v);
            if (!d || !std::isfinite(*d)) throw ParseError(source, line_no, "non-finite or malformed value");
            t.values.push_back(*d);
        }

        auto& set = table[item];
        set.item_id = item;
        if (!set.levels.emplace(static_cast<int>(*level), std::move(t)).second)
            throw ParseError(source, line_no, "duplicate level " + std::to_string(*level) + " for item '" + item + "'");
    }
    if (!header_seen) throw ParseError(source + ": missing '#vrcmf-feat v1' header");
    return table;
}

FeatureMapTable load_feature_maps(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open feature file '" + path + "'");
    return load_feature_maps(in, path);
}

void write_feature_maps(std::ostream& out, const FeatureMapTable& table) {
    out << kFeatureHeader << '\n';
    for (const auto& [id, set] : table) {
        for (const auto& [level, t] : set.levels) {
            out << id << '\t' << level << '\t' << t.height << ',' << t.width << ',' << t.channels << '\t';
            for (std::size_t i = 0; i < t.values.size(); ++i) {
                if (i) out << ',';
                out << format_roundtrip(t.values[i]);
            }
            out << '\n';
        }
    }
}

Eigen::VectorXd global_average_pool(const FeatureTensor& map) {
    if (map.height == 0 || map.width == 0 || map.channels == 0) throw Error("feature map has an empty dimension");
    if (map.values.size() != map.height * map.width * map.channels) throw Error("feature map size mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.channels));
    for (std::size_t pos = 0; pos < map.height * map.width; ++pos)
        for (std::size_t ch = 0; ch < map.channels; ++ch)
            out(static_cast<Eigen::Index>(ch)) += map.values[pos * map.channels + ch];
    return out / static_cast<double>(map.height * map.width);
}

std::vector<int> missing_levels(const FeatureMapSet& set, std::span<const int> levels) {
    std::vector<int> missing;
    for (int l : levels)
        if (!set.levels.count(l)) missing.push_back(l);
    return missing;
}

std::size_t cascade_dim(std::span<const int> levels) {
    std::size_t d = 0;
    for (int l : normalized_levels(levels)) d += level_channels(l);
    return d;
}

VisualFeature cascade_visual(const FeatureMapSet& set, std::span<const int> levels) {
    auto sorted = normalized_levels(levels);
    VisualFeature vf;
    vf.item_id = set.item_id;
    vf.levels = sorted;
    vf.vector.resize(static_cast<Eigen::Index>(cascade_dim(sorted)));
    Eigen::Index offset = 0;
    for (int l : sorted) {
        auto it = set.levels.find(l);
        if (it == set.levels.end())
            throw Error("item '" + set.item_id + "' has no level " + std::to_string(l) + " features");
        auto pooled = global_average_pool(it->second);
        vf.vector.segment(offset, pooled.size()) = pooled;
        offset += pooled.size();
    }
    return vf;
}

}  // namespace vrcmf
