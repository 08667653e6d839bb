#pragma once

// The element map M: x -> Omega_x.
//
// Every element of a master set is assigned a set of non-negative integers
// drawn from [0, i_max]. Words map to synset offsets loaded from a text map
// file; grid cells map to randomized position hashes; benchmarks use
// synthetic maps sampled uniformly.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nsum/rect.hpp"

namespace nsum {

using ElementId = std::string;
using Value = std::uint64_t;

// True for a usable element token: non-empty with no whitespace.
bool is_valid_element_id(std::string_view id);

// Sorted, duplicate-free set of Omega values.
class OmegaSet {
public:
    OmegaSet() = default;
    OmegaSet(std::initializer_list<Value> values);

    // Sorts and deduplicates `values`.
    static OmegaSet from_values(std::vector<Value> values);

    std::span<const Value> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    Value max() const { return values_.back(); }
    bool contains(Value v) const;

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    friend bool operator==(const OmegaSet&, const OmegaSet&) = default;

private:
    std::vector<Value> values_;
};

class ElementMap {
public:
    explicit ElementMap(Value i_max = 0) : i_max_(i_max) {}

    // Inserts or replaces the entry for `id`. Raises i_max when
    // `grow_i_max` is set, otherwise rejects values above it.
    void set(ElementId id, OmegaSet omega, bool grow_i_max = false);

    void add_stopword(ElementId id) { stopwords_.insert(std::move(id)); }
    bool is_stopword(std::string_view id) const;

    // Empty for unknown ids and stopwords.
    const OmegaSet& lookup(std::string_view id) const;
    bool contains(std::string_view id) const;

    Value i_max() const { return i_max_; }
    void set_i_max(Value i_max);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Entries in first-insertion order.
    const std::vector<std::pair<ElementId, OmegaSet>>& entries() const { return entries_; }

private:
    Value i_max_ = 0;
    std::vector<std::pair<ElementId, OmegaSet>> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_set<std::string> stopwords_;
};

struct MapLoadOptions {
    std::vector<ElementId> stopwords;
    // Overrides the observed maximum; values above it are rejected.
    std::optional<Value> i_max;
    // Receives non-fatal diagnostics (duplicate tokens). Defaults to stderr.
    std::function<void(const std::string&)> warn;
};

// Parses the whitespace-delimited "token v1 v2 ... vk" format. Blank lines
// are skipped; a repeated token replaces the earlier record.
ElementMap read_map(std::istream& in, const MapLoadOptions& options = {});
ElementMap load_map_file(const std::filesystem::path& path, const MapLoadOptions& options = {});
void write_map(std::ostream& out, const ElementMap& map);

// Splits a message into tokens the way a POSIX shell would: whitespace
// separates, quotes group, backslash escapes. No punctuation handling.
std::vector<std::string> tokenize_message(std::string_view text);

enum class HashDistribution {
    flat,
    // Density proportional to 1/sqrt(x) + 1/sqrt(i_max - x); pushes mass to
    // both ends of the range so that pair sums come out closer to flat.
    edge_weighted,
};

// Injective map from grid indices 1..world_dim^2 to integers in [1, i_max].
class PositionHash {
public:
    PositionHash(std::uint32_t world_dim, Value i_max, std::vector<Value> forward);

    std::uint32_t world_dim() const { return world_dim_; }
    Value i_max() const { return i_max_; }
    std::uint64_t cell_count() const { return forward_.size(); }

    Value hash(std::uint64_t grid_index) const;
    std::optional<std::uint64_t> grid_index(Value hash) const;

    // forward()[g - 1] is the hash of grid index g.
    std::span<const Value> forward() const { return forward_; }

private:
    std::uint32_t world_dim_;
    Value i_max_;
    std::vector<Value> forward_;
    std::unordered_map<Value, std::uint64_t> reverse_;
};

PositionHash make_position_hash(std::uint32_t world_dim, Value i_max, std::uint64_t seed,
                                HashDistribution distribution = HashDistribution::flat);

// Linearized grid index of cell (x, y): x + world_dim * y.
inline std::uint64_t grid_index_of(std::uint32_t x, std::uint32_t y, std::uint32_t world_dim) {
    return std::uint64_t{x} + std::uint64_t{world_dim} * y;
}

// Element "k" (1-based, decimal) maps to the hashes of every cell colony k covers.
ElementMap colony_omega(std::span<const Rect> colonies, const PositionHash& hash);

struct SyntheticMapSpec {
    std::size_t word_count = 0;
    std::size_t omega_min = 1;
    std::size_t omega_max = 1;
    Value i_max = 16'000'000;
};

// Synthetic stand-in for a WordNet export: ids "w<k>", each with an Omega of
// uniformly drawn size whose values are uniform on [0, i_max] (deduplicated).
ElementMap sample_synthetic_map(const SyntheticMapSpec& spec, std::uint64_t seed);

}  // namespace nsum
