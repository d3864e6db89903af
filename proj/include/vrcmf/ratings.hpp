#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vrcmf {

/// Field separator of a ratings file.
enum class RatingsFormat { double_colon, tab, comma };

RatingsFormat parse_ratings_format(std::string_view name);
std::string_view to_string(RatingsFormat format);

struct Rating {
    std::uint32_t user = 0;
    std::uint32_t item = 0;
    double value = 0.0;
    std::int64_t timestamp = 0;
};

/// One adjacency entry: the index on the other side plus the rating.
struct Neighbor {
    std::uint32_t index = 0;
    double value = 0.0;
};

/// Bidirectional map between raw identifiers and dense 0-based indices,
/// assigned in order of first appearance.
class IdMap {
public:
    std::uint32_t add(std::string_view id);
    std::optional<std::uint32_t> find(std::string_view id) const;
    const std::string& id(std::size_t index) const { return ids_.at(index); }
    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }

private:
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::string> ids_;
};

/// Sparse m x n matrix of observed ratings with CSR adjacency in both
/// directions. Immutable after construction.
class RatingsMatrix {
public:
    RatingsMatrix() = default;

    /// Validates every invariant: indices in range, ratings in [1, r_max],
    /// no duplicated (user, item) pair.
    RatingsMatrix(std::size_t num_users, std::size_t num_items, std::vector<Rating> entries,
                  double r_max = 5.0);

    std::size_t num_users() const { return num_users_; }
    std::size_t num_items() const { return num_items_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    double r_max() const { return r_max_; }

    std::span<const Rating> entries() const { return entries_; }
    std::span<const Neighbor> user_ratings(std::size_t user) const;
    std::span<const Neighbor> item_ratings(std::size_t item) const;

    /// Same index space, restricted to the listed entry positions.
    RatingsMatrix subset(std::span<const std::size_t> positions) const;

    double mean_rating() const;

private:
    std::size_t num_users_ = 0;
    std::size_t num_items_ = 0;
    double r_max_ = 5.0;
    std::vector<Rating> entries_;
    std::vector<std::size_t> user_offsets_;
    std::vector<Neighbor> user_adjacency_;
    std::vector<std::size_t> item_offsets_;
    std::vector<Neighbor> item_adjacency_;
};

/// A parsed ratings file: the matrix plus the identifier maps needed to
/// translate predictions back to raw ids.
struct RatingsDataset {
    RatingsMatrix matrix;
    IdMap users;
    IdMap items;
};

RatingsDataset parse_ratings(std::istream& in, RatingsFormat format, double r_max = 5.0,
                             const std::string& source = "<ratings>");
RatingsDataset parse_ratings(const std::string& path, RatingsFormat format, double r_max = 5.0);

/// Parses entries against existing id maps (e.g. a held-out file written by
/// `train`). Unknown ids are an error.
RatingsMatrix parse_ratings_with_ids(std::istream& in, RatingsFormat format, const IdMap& users,
                                     const IdMap& items, double r_max,
                                     const std::string& source = "<ratings>");

/// Writes entries using raw identifiers; timestamps are always emitted.
void write_ratings(std::ostream& out, const RatingsMatrix& matrix, const IdMap& users,
                   const IdMap& items, RatingsFormat format);

struct SplitFractions {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

/// Positions into RatingsMatrix::entries(); the three lists partition it.
struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

/// Seeded random partition. Validation and test sizes are round(N * fraction),
/// training takes the remainder. Afterwards every user and item with at least
/// one rating is given a training rating: its earliest held-out rating is
/// swapped with a training rating whose user and item both keep another one.
DatasetSplit split_dataset(const RatingsMatrix& ratings, SplitFractions fractions,
                           std::uint64_t seed);

struct DatasetStats {
    std::size_t num_users = 0;
    std::size_t num_items = 0;
    std::size_t rating_count = 0;
    double sparsity = 0.0;
};

DatasetStats sparsity_stats(std::size_t num_users, std::size_t num_items, std::size_t rating_count);
DatasetStats sparsity_stats(const RatingsMatrix& ratings);

/// Sparsity as a percentage with two decimals, truncated.
std::string format_sparsity_percent(double sparsity);

/// Aligned table followed by machine-readable key=value lines.
void write_stats_report(std::ostream& out, const std::string& name, const DatasetStats& stats);

}  // namespace vrcmf
