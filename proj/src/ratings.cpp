#include "vrcmf/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"
#include "vrcmf/random.hpp"

namespace vrcmf {

namespace {

std::string_view delimiter_of(RatingsFormat format) {
    switch (format) {
        case RatingsFormat::double_colon: return "::";
        case RatingsFormat::tab: return "\t";
        case RatingsFormat::comma: return ",";
    }
    return "::";
}

std::uint64_t pair_key(std::uint32_t user, std::uint32_t item) {
    return (std::uint64_t{user} << 32) | item;
}

struct ParsedLine {
    std::string_view user;
    std::string_view item;
    double value = 0.0;
    std::int64_t timestamp = 0;
};

// Returns nullopt for blank lines.
std::optional<ParsedLine> parse_line(std::string_view line, RatingsFormat format, double r_max,
                                     const std::string& source, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) return std::nullopt;

    auto fields = split(line, delimiter_of(format));
    if (fields.size() < 3) {
        throw ParseError(source, line_no, "expected at least 3 fields, found " +
                                              std::to_string(fields.size()));
    }
    ParsedLine parsed;
    parsed.user = trim(fields[0]);
    parsed.item = trim(fields[1]);
    if (parsed.user.empty() || parsed.item.empty()) {
        throw ParseError(source, line_no, "empty user or item identifier");
    }
    auto value = parse_double(fields[2]);
    if (!value || !std::isfinite(*value)) {
        throw ParseError(source, line_no, "rating is not numeric: '" + std::string(fields[2]) + "'");
    }
    if (*value < 1.0 || *value > r_max) {
        throw ParseError(source, line_no, "rating " + format_roundtrip(*value) +
                                              " outside [1, " + format_roundtrip(r_max) + "]");
    }
    parsed.value = *value;
    if (fields.size() >= 4 && !trim(fields[3]).empty()) {
        auto ts = parse_int(fields[3]);
        if (!ts) {
            throw ParseError(source, line_no,
                             "timestamp is not an integer: '" + std::string(fields[3]) + "'");
        }
        parsed.timestamp = *ts;
    }
    return parsed;
}

}  // namespace

RatingsFormat parse_ratings_format(std::string_view name) {
    if (name == "double-colon" || name == "dc" || name == "::") return RatingsFormat::double_colon;
    if (name == "tab" || name == "tsv") return RatingsFormat::tab;
    if (name == "comma" || name == "csv") return RatingsFormat::comma;
    throw Error("unknown ratings format '" + std::string(name) +
                "' (expected double-colon, tab or comma)");
}

std::string_view to_string(RatingsFormat format) {
    switch (format) {
        case RatingsFormat::double_colon: return "double-colon";
        case RatingsFormat::tab: return "tab";
        case RatingsFormat::comma: return "comma";
    }
    return "double-colon";
}

std::uint32_t IdMap::add(std::string_view id) {
    std::string key(id);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto idx = static_cast<std::uint32_t>(ids_.size());
    index_.emplace(key, idx);
    ids_.push_back(std::move(key));
    return idx;
}

std::optional<std::uint32_t> IdMap::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

RatingsMatrix::RatingsMatrix(std::size_t num_users, std::size_t num_items,
                             std::vector<Rating> entries, double r_max)
    : num_users_(num_users), num_items_(num_items), r_max_(r_max), entries_(std::move(entries)) {
    if (!(r_max_ >= 1.0)) throw Error("r_max must be >= 1");

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(entries_.size());
    user_offsets_.assign(num_users_ + 1, 0);
    item_offsets_.assign(num_items_ + 1, 0);
    for (const auto& e : entries_) {
        if (e.user >= num_users_ || e.item >= num_items_) {
            throw Error("rating index (" + std::to_string(e.user) + ", " + std::to_string(e.item) +
                        ") out of range for " + std::to_string(num_users_) + "x" +
                        std::to_string(num_items_) + " matrix");
        }
        if (!(e.value >= 1.0 && e.value <= r_max_)) {
            throw Error("rating " + format_roundtrip(e.value) + " outside [1, " +
                        format_roundtrip(r_max_) + "]");
        }
        if (!seen.insert(pair_key(e.user, e.item)).second) {
            throw Error("duplicate rating for (user " + std::to_string(e.user) + ", item " +
                        std::to_string(e.item) + ")");
        }
        ++user_offsets_[e.user + 1];
        ++item_offsets_[e.item + 1];
    }
    std::partial_sum(user_offsets_.begin(), user_offsets_.end(), user_offsets_.begin());
    std::partial_sum(item_offsets_.begin(), item_offsets_.end(), item_offsets_.begin());

    user_adjacency_.resize(entries_.size());
    item_adjacency_.resize(entries_.size());
    std::vector<std::size_t> ucur(user_offsets_.begin(), user_offsets_.end() - 1);
    std::vector<std::size_t> icur(item_offsets_.begin(), item_offsets_.end() - 1);
    for (const auto& e : entries_) {
        user_adjacency_[ucur[e.user]++] = Neighbor{e.item, e.value};
        item_adjacency_[icur[e.item]++] = Neighbor{e.user, e.value};
    }
}

std::span<const Neighbor> RatingsMatrix::user_ratings(std::size_t user) const {
    return std::span<const Neighbor>(user_adjacency_)
        .subspan(user_offsets_[user], user_offsets_[user + 1] - user_offsets_[user]);
}

std::span<const Neighbor> RatingsMatrix::item_ratings(std::size_t item) const {
    return std::span<const Neighbor>(item_adjacency_)
        .subspan(item_offsets_[item], item_offsets_[item + 1] - item_offsets_[item]);
}

RatingsMatrix RatingsMatrix::subset(std::span<const std::size_t> positions) const {
    std::vector<Rating> picked;
    picked.reserve(positions.size());
    for (auto p : positions) picked.push_back(entries_.at(p));
    return RatingsMatrix(num_users_, num_items_, std::move(picked), r_max_);
}

double RatingsMatrix::mean_rating() const {
    if (entries_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : entries_) sum += e.value;
    return sum / static_cast<double>(entries_.size());
}

RatingsDataset parse_ratings(std::istream& in, RatingsFormat format, double r_max,
                             const std::string& source) {
    RatingsDataset ds;
    std::vector<Rating> entries;
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto parsed = parse_line(line, format, r_max, source, line_no);
        if (!parsed) continue;
        Rating r;
        r.user = ds.users.add(parsed->user);
        r.item = ds.items.add(parsed->item);
        r.value = parsed->value;
        r.timestamp = parsed->timestamp;
        if (!seen.insert(pair_key(r.user, r.item)).second) {
            throw ParseError(source, line_no,
                             "duplicate rating for user '" + std::string(parsed->user) +
                                 "' and item '" + std::string(parsed->item) + "'");
        }
        entries.push_back(r);
    }
    if (entries.empty()) throw ParseError(source + ": no entries");
    ds.matrix = RatingsMatrix(ds.users.size(), ds.items.size(), std::move(entries), r_max);
    return ds;
}

RatingsDataset parse_ratings(const std::string& path, RatingsFormat format, double r_max) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open ratings file '" + path + "'");
    return parse_ratings(in, format, r_max, path);
}

RatingsMatrix parse_ratings_with_ids(std::istream& in, RatingsFormat format, const IdMap& users,
                                     const IdMap& items, double r_max, const std::string& source) {
    std::vector<Rating> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto parsed = parse_line(line, format, r_max, source, line_no);
        if (!parsed) continue;
        auto u = users.find(parsed->user);
        if (!u) throw ParseError(source, line_no, "unknown user id '" + std::string(parsed->user) + "'");
        auto i = items.find(parsed->item);
        if (!i) throw ParseError(source, line_no, "unknown item id '" + std::string(parsed->item) + "'");
        entries.push_back(Rating{*u, *i, parsed->value, parsed->timestamp});
    }
    if (entries.empty()) throw ParseError(source + ": no entries");
    return RatingsMatrix(users.size(), items.size(), std::move(entries), r_max);
}

void write_ratings(std::ostream& out, const RatingsMatrix& matrix, const IdMap& users,
                   const IdMap& items, RatingsFormat format) {
    auto delim = delimiter_of(format);
    for (const auto& e : matrix.entries()) {
        out << users.id(e.user) << delim << items.id(e.item) << delim << format_roundtrip(e.value)
            << delim << e.timestamp << '\n';
    }
}

DatasetSplit split_dataset(const RatingsMatrix& ratings, SplitFractions fractions,
                           std::uint64_t seed) {
    const std::size_t n = ratings.size();
    if (n < 3) throw Error("cannot split fewer than 3 entries (got " + std::to_string(n) + ")");
    if (!(fractions.train > 0 && fractions.validation > 0 && fractions.test > 0) ||
        std::abs(fractions.train + fractions.validation + fractions.test - 1.0) > 1e-9) {
        throw Error("split fractions must be positive and sum to 1");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fractions.validation));
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fractions.test));
    const std::size_t n_train = n - n_val - n_test;

    // 0 = train, 1 = validation, 2 = test
    std::vector<std::uint8_t> side(n);
    for (std::size_t r = 0; r < n; ++r) side[order[r]] = r < n_train ? 0 : (r < n_train + n_val ? 1 : 2);

    auto entries = ratings.entries();
    std::vector<std::size_t> user_train(ratings.num_users(), 0), item_train(ratings.num_items(), 0);
    std::vector<std::vector<std::size_t>> held_by_user(ratings.num_users()), held_by_item(ratings.num_items());
    for (std::size_t p = 0; p < n; ++p) {
        if (side[p] == 0) {
            ++user_train[entries[p].user];
            ++item_train[entries[p].item];
        } else {
            held_by_user[entries[p].user].push_back(p);
            held_by_item[entries[p].item].push_back(p);
        }
    }

    // Swap partners are drawn from the tail of the shuffled training block.
    std::size_t cursor = n_train;
    auto swap_in = [&](std::span<const std::size_t> candidates) {
        std::size_t best = n;
        for (auto p : candidates) {
            if (side[p] == 0) continue;
            if (best == n || entries[p].timestamp < entries[best].timestamp ||
                (entries[p].timestamp == entries[best].timestamp && p < best)) {
                best = p;
            }
        }
        if (best == n) return;
        const auto from = side[best];
        side[best] = 0;
        ++user_train[entries[best].user];
        ++item_train[entries[best].item];
        while (cursor > 0) {
            auto q = order[--cursor];
            if (side[q] != 0 || q == best) continue;
            if (user_train[entries[q].user] >= 2 && item_train[entries[q].item] >= 2) {
                side[q] = from;
                --user_train[entries[q].user];
                --item_train[entries[q].item];
                return;
            }
        }
    };

    for (std::size_t u = 0; u < ratings.num_users(); ++u)
        if (user_train[u] == 0 && !held_by_user[u].empty()) swap_in(held_by_user[u]);
    for (std::size_t i = 0; i < ratings.num_items(); ++i)
        if (item_train[i] == 0 && !held_by_item[i].empty()) swap_in(held_by_item[i]);

    DatasetSplit split;
    split.seed = seed;
    for (std::size_t p = 0; p < n; ++p) {
        (side[p] == 0 ? split.train : side[p] == 1 ? split.validation : split.test).push_back(p);
    }
    return split;
}

DatasetStats sparsity_stats(std::size_t num_users, std::size_t num_items, std::size_t rating_count) {
    if (num_users == 0 || num_items == 0) throw Error("sparsity undefined for an empty matrix");
    DatasetStats s;
    s.num_users = num_users;
    s.num_items = num_items;
    s.rating_count = rating_count;
    s.sparsity = 1.0 - static_cast<double>(rating_count) /
                           (static_cast<double>(num_users) * static_cast<double>(num_items));
    return s;
}

DatasetStats sparsity_stats(const RatingsMatrix& ratings) {
    return sparsity_stats(ratings.num_users(), ratings.num_items(), ratings.size());
}

std::string format_sparsity_percent(double sparsity) {
    return format_truncated(sparsity * 100.0, 2) + "%";
}

void write_stats_report(std::ostream& out, const std::string& name, const DatasetStats& stats) {
    const std::string percent = format_sparsity_percent(stats.sparsity);
    out << std::left << std::setw(16) << "Dataset" << std::right << std::setw(10) << "Users"
        << std::setw(10) << "Items" << std::setw(12) << "Ratings" << std::setw(11) << "Sparsity"
        << '\n';
    out << std::left << std::setw(16) << name << std::right << std::setw(10) << stats.num_users
        << std::setw(10) << stats.num_items << std::setw(12) << stats.rating_count
        << std::setw(11) << percent << '\n';
    out << "m=" << stats.num_users << '\n'
        << "n=" << stats.num_items << '\n'
        << "ratings=" << stats.rating_count << '\n'
        << "sparsity=" << format_truncated(stats.sparsity, 4) << '\n'
        << "sparsity_percent=" << percent << '\n';
}

}  // namespace vrcmf
