#include "nsum/omega_map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "nsum/error.hpp"

namespace nsum {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

const OmegaSet& empty_omega() {
    static const OmegaSet empty;
    return empty;
}

}  // namespace

bool is_valid_element_id(std::string_view id) {
    return !id.empty() && std::none_of(id.begin(), id.end(), is_space);
}

OmegaSet::OmegaSet(std::initializer_list<Value> values)
    : OmegaSet(from_values(std::vector<Value>(values))) {}

OmegaSet OmegaSet::from_values(std::vector<Value> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    OmegaSet out;
    out.values_ = std::move(values);
    return out;
}

bool OmegaSet::contains(Value v) const {
    return std::binary_search(values_.begin(), values_.end(), v);
}

void ElementMap::set(ElementId id, OmegaSet omega, bool grow_i_max) {
    if (!is_valid_element_id(id)) {
        throw PreconditionError("element id must be non-empty and contain no whitespace: '" + id + "'");
    }
    if (!omega.empty() && omega.max() > i_max_) {
        if (!grow_i_max) {
            throw PreconditionError("value " + std::to_string(omega.max()) + " of element '" + id +
                                    "' exceeds i_max " + std::to_string(i_max_));
        }
        i_max_ = omega.max();
    }
    if (auto it = index_.find(id); it != index_.end()) {
        entries_[it->second].second = std::move(omega);
        return;
    }
    index_.emplace(id, entries_.size());
    entries_.emplace_back(std::move(id), std::move(omega));
}

bool ElementMap::is_stopword(std::string_view id) const {
    return stopwords_.count(std::string(id)) != 0;
}

const OmegaSet& ElementMap::lookup(std::string_view id) const {
    const std::string key(id);
    if (stopwords_.count(key) != 0) return empty_omega();
    auto it = index_.find(key);
    if (it == index_.end()) return empty_omega();
    return entries_[it->second].second;
}

bool ElementMap::contains(std::string_view id) const {
    return index_.count(std::string(id)) != 0;
}

void ElementMap::set_i_max(Value i_max) {
    for (const auto& [id, omega] : entries_) {
        if (!omega.empty() && omega.max() > i_max) {
            throw PreconditionError("i_max " + std::to_string(i_max) + " is below value " +
                                    std::to_string(omega.max()) + " of element '" + id + "'");
        }
    }
    i_max_ = i_max;
}

ElementMap read_map(std::istream& in, const MapLoadOptions& options) {
    auto warn = options.warn ? options.warn
                             : [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    ElementMap map(options.i_max.value_or(0));
    const bool grow = !options.i_max.has_value();
    for (const auto& s : options.stopwords) map.add_stopword(s);

    std::unordered_map<std::string, std::size_t> seen_on;
    std::string line;
    std::size_t line_no = 0;
    std::size_t records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue;

        std::vector<Value> values;
        std::string field;
        while (fields >> field) {
            Value v = 0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc{} || ptr != field.data() + field.size()) {
                throw FormatError("map line " + std::to_string(line_no) + ": '" + field +
                                  "' is not a non-negative integer");
            }
            values.push_back(v);
        }
        if (values.empty()) {
            throw FormatError("map line " + std::to_string(line_no) + ": element '" + token +
                              "' has no values");
        }
        if (auto it = seen_on.find(token); it != seen_on.end()) {
            warn("map line " + std::to_string(line_no) + ": element '" + token +
                 "' repeats line " + std::to_string(it->second) + "; keeping the later record");
        }
        seen_on[token] = line_no;
        try {
            map.set(token, OmegaSet::from_values(std::move(values)), grow);
        } catch (const PreconditionError& e) {
            throw FormatError("map line " + std::to_string(line_no) + ": " + e.what());
        }
        ++records;
    }
    if (records == 0) throw FormatError("map file contains no records");
    return map;
}

ElementMap load_map_file(const std::filesystem::path& path, const MapLoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open map file " + path.string());
    return read_map(in, options);
}

void write_map(std::ostream& out, const ElementMap& map) {
    for (const auto& [id, omega] : map.entries()) {
        out << id;
        for (Value v : omega) out << ' ' << v;
        out << '\n';
    }
}

std::vector<std::string> tokenize_message(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    bool in_token = false;
    char quote = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quote == '\'') {
            if (c == '\'') quote = 0;
            else current += c;
            continue;
        }
        if (quote == '"') {
            if (c == '"') {
                quote = 0;
            } else if (c == '\\' && i + 1 < text.size() &&
                       (text[i + 1] == '"' || text[i + 1] == '\\')) {
                current += text[++i];
            } else {
                current += c;
            }
            continue;
        }
        if (is_space(c)) {
            if (in_token) {
                tokens.push_back(std::move(current));
                current.clear();
                in_token = false;
            }
            continue;
        }
        in_token = true;
        if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == '\\') {
            if (i + 1 >= text.size()) throw FormatError("message ends with a dangling escape");
            current += text[++i];
        } else {
            current += c;
        }
    }
    if (quote != 0) throw FormatError("message has no closing quotation");
    if (in_token) tokens.push_back(std::move(current));
    return tokens;
}

PositionHash::PositionHash(std::uint32_t world_dim, Value i_max, std::vector<Value> forward)
    : world_dim_(world_dim), i_max_(i_max), forward_(std::move(forward)) {
    if (forward_.size() != std::uint64_t{world_dim} * world_dim) {
        throw PreconditionError("position hash needs exactly world_dim^2 entries");
    }
    reverse_.reserve(forward_.size());
    for (std::size_t i = 0; i < forward_.size(); ++i) {
        const Value h = forward_[i];
        if (h < 1 || h > i_max_) throw PreconditionError("position hash value outside [1, i_max]");
        if (!reverse_.emplace(h, i + 1).second) throw PreconditionError("position hash is not injective");
    }
}

Value PositionHash::hash(std::uint64_t grid_index) const {
    if (grid_index < 1 || grid_index > forward_.size()) {
        throw PreconditionError("grid index " + std::to_string(grid_index) + " outside 1.." +
                                std::to_string(forward_.size()));
    }
    return forward_[grid_index - 1];
}

std::optional<std::uint64_t> PositionHash::grid_index(Value hash) const {
    auto it = reverse_.find(hash);
    if (it == reverse_.end()) return std::nullopt;
    return it->second;
}

namespace {

// Inverse CDF of rho(x) ~ 1/sqrt(x) + 1/sqrt(I - x) on [0, I].
// F(x) = (sqrt(x) + sqrt(I) - sqrt(I - x)) / (2 sqrt(I)).
double edge_weighted_quantile(double u, double i_max) {
    const double c = (2.0 * u - 1.0) * std::sqrt(i_max);
    const double a = 0.5 * (c + std::sqrt(std::max(0.0, 2.0 * i_max - c * c)));
    return a * a;
}

}  // namespace

PositionHash make_position_hash(std::uint32_t world_dim, Value i_max, std::uint64_t seed,
                                HashDistribution distribution) {
    if (world_dim == 0) throw PreconditionError("world_dim must be positive");
    const std::uint64_t cells = std::uint64_t{world_dim} * world_dim;
    if (cells > i_max) {
        throw PreconditionError("cannot hash " + std::to_string(cells) + " cells injectively into [1, " +
                                std::to_string(i_max) + "]");
    }
    std::mt19937_64 rng(seed);
    std::vector<Value> forward;
    forward.reserve(cells);

    if (distribution == HashDistribution::flat && cells * 2 > i_max) {
        // Dense case: partial Fisher-Yates over the whole range.
        std::vector<Value> pool(i_max);
        std::iota(pool.begin(), pool.end(), Value{1});
        for (std::uint64_t i = 0; i < cells; ++i) {
            std::uniform_int_distribution<std::uint64_t> pick(i, i_max - 1);
            std::swap(pool[i], pool[pick(rng)]);
            forward.push_back(pool[i]);
        }
        return PositionHash(world_dim, i_max, std::move(forward));
    }

    std::unordered_set<Value> used;
    used.reserve(cells);
    std::uniform_int_distribution<Value> flat(1, i_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::uint64_t max_draws = 64 * cells + 1024;
    std::uint64_t draws = 0;
    while (forward.size() < cells) {
        if (++draws > max_draws) {
            throw ResourceLimitError("position hash sampling did not converge; raise i_max");
        }
        Value h = 0;
        if (distribution == HashDistribution::flat) {
            h = flat(rng);
        } else {
            const double x = edge_weighted_quantile(unit(rng), static_cast<double>(i_max));
            h = std::clamp<Value>(static_cast<Value>(std::llround(x)), 1, i_max);
        }
        if (used.insert(h).second) forward.push_back(h);
    }
    return PositionHash(world_dim, i_max, std::move(forward));
}

ElementMap colony_omega(std::span<const Rect> colonies, const PositionHash& hash) {
    const std::uint32_t dim = hash.world_dim();
    ElementMap map(hash.i_max());
    std::size_t count = 0;
    for (const Rect& colony : colonies) {
        ++count;
        if (!colony.inside(dim)) {
            throw PreconditionError("colony " + std::to_string(count) + " lies outside the " +
                                    std::to_string(dim) + "x" + std::to_string(dim) + " grid");
        }
        std::vector<Value> values;
        values.reserve(colony.area());
        for (std::uint32_t i = 0; i < colony.width; ++i) {
            for (std::uint32_t j = 0; j < colony.height; ++j) {
                values.push_back(hash.hash(grid_index_of(colony.x + i, colony.y + j, dim)));
            }
        }
        map.set(std::to_string(count), OmegaSet::from_values(std::move(values)));
    }
    return map;
}

ElementMap sample_synthetic_map(const SyntheticMapSpec& spec, std::uint64_t seed) {
    if (spec.omega_min < 1 || spec.omega_min > spec.omega_max || spec.omega_max > spec.i_max) {
        throw PreconditionError("synthetic omega size range must lie within [1, i_max]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size_dist(spec.omega_min, spec.omega_max);
    std::uniform_int_distribution<Value> value_dist(0, spec.i_max);
    ElementMap map(spec.i_max);
    for (std::size_t k = 0; k < spec.word_count; ++k) {
        std::vector<Value> values(size_dist(rng));
        for (auto& v : values) v = value_dist(rng);
        map.set("w" + std::to_string(k), OmegaSet::from_values(std::move(values)));
    }
    return map;
}

}  // namespace nsum
