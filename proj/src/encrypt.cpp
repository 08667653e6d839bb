#include "nsum/encrypt.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "nsum/error.hpp"

namespace nsum {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// Refuse encryptions whose term table would not fit in memory.
constexpr std::uint64_t kMaxSumTerms = 200'000'000;

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kSaturated / b ? kSaturated : a * b;
}

// Lexicographic combination of `level` indices out of `n` with the given rank.
std::vector<std::size_t> unrank_combination(std::size_t n, unsigned level, std::uint64_t rank) {
    std::vector<std::size_t> combo(level);
    std::size_t candidate = 0;
    for (unsigned pos = 0; pos < level; ++pos) {
        for (;; ++candidate) {
            const std::uint64_t with_candidate = binomial(n - candidate - 1, level - pos - 1);
            if (rank < with_candidate) break;
            rank -= with_candidate;
        }
        combo[pos] = candidate++;
    }
    return combo;
}

bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
    const std::size_t k = combo.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (combo[pos] < n - k + pos) {
            ++combo[pos];
            for (std::size_t q = pos + 1; q < k; ++q) combo[q] = combo[q - 1] + 1;
            return true;
        }
    }
    return false;
}

struct Grouped {
    std::vector<Key> keys;
    std::vector<std::size_t> offsets{0};
    std::vector<Value> values;
};

// Encrypts combinations [first_rank, first_rank + count) and groups the
// resulting terms by key, preserving enumeration order inside each posting.
Grouped encrypt_slice(const PrivateSet& set, unsigned level, std::uint64_t first_rank,
                      std::uint64_t count) {
    Grouped out;
    if (count == 0) return out;
    const auto omegas = set.resolved();

    std::vector<Key> sums;
    std::vector<Value> term_values;
    std::vector<std::size_t> combo = unrank_combination(set.size(), level, first_rank);
    std::vector<std::size_t> digit(level);
    for (std::uint64_t c = 0; c < count; ++c) {
        std::fill(digit.begin(), digit.end(), 0);
        for (;;) {
            Key sum = 0;
            for (unsigned p = 0; p < level; ++p) {
                const Value v = omegas[combo[p]].values()[digit[p]];
                sum += v;
                term_values.push_back(v);
            }
            sums.push_back(sum);
            // Odometer over the Cartesian product of the chosen Omega sets.
            unsigned p = level;
            while (p-- > 0) {
                if (++digit[p] < omegas[combo[p]].size()) break;
                digit[p] = 0;
            }
            if (p == static_cast<unsigned>(-1)) break;
        }
        if (c + 1 < count) next_combination(combo, set.size());
    }

    std::vector<std::size_t> order(sums.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sums[a] < sums[b]; });

    out.values.reserve(term_values.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t t = order[i];
        if (out.keys.empty() || out.keys.back() != sums[t]) {
            if (!out.keys.empty()) out.offsets.push_back(out.values.size());
            out.keys.push_back(sums[t]);
        }
        const auto first = term_values.begin() + static_cast<std::ptrdiff_t>(t * level);
        out.values.insert(out.values.end(), first, first + level);
    }
    if (!out.keys.empty()) out.offsets.push_back(out.values.size());
    return out;
}

Grouped merge_runs(std::vector<Grouped>& runs) {
    if (runs.size() == 1) return std::move(runs.front());
    Grouped out;
    std::vector<std::size_t> head(runs.size(), 0);
    for (;;) {
        bool any = false;
        Key smallest = 0;
        for (std::size_t w = 0; w < runs.size(); ++w) {
            if (head[w] < runs[w].keys.size() && (!any || runs[w].keys[head[w]] < smallest)) {
                smallest = runs[w].keys[head[w]];
                any = true;
            }
        }
        if (!any) break;
        out.keys.push_back(smallest);
        // Equal keys are appended in worker order, which is enumeration order.
        for (std::size_t w = 0; w < runs.size(); ++w) {
            if (head[w] < runs[w].keys.size() && runs[w].keys[head[w]] == smallest) {
                const auto& run = runs[w];
                out.values.insert(out.values.end(),
                                  run.values.begin() + static_cast<std::ptrdiff_t>(run.offsets[head[w]]),
                                  run.values.begin() + static_cast<std::ptrdiff_t>(run.offsets[head[w] + 1]));
                ++head[w];
            }
        }
        out.offsets.push_back(out.values.size());
    }
    return out;
}

void check_encryptable(const PrivateSet& set, unsigned level) {
    if (level == 0) throw PreconditionError("security level must be at least 1");
    if (set.size() < level) {
        throw PreconditionError("level-" + std::to_string(level) + " encryption needs at least " +
                                std::to_string(level) + " resolved elements, got N=" +
                                std::to_string(set.size()));
    }
    // The n largest maxima must sum without overflowing 64 bits.
    std::vector<Value> maxima;
    for (const auto& omega : set.resolved()) maxima.push_back(omega.max());
    std::partial_sort(maxima.begin(), maxima.begin() + level, maxima.end(), std::greater<>());
    Value total = 0;
    for (unsigned p = 0; p < level; ++p) {
        if (maxima[p] > kSaturated - total) throw PreconditionError("sum keys would overflow 64 bits");
        total += maxima[p];
    }
    const std::uint64_t terms = key_count_bound(omega_sizes(set), level);
    if (terms > kMaxSumTerms) {
        throw ResourceLimitError("encryption would enumerate " + std::to_string(terms) +
                                 " sum terms (limit " + std::to_string(kMaxSumTerms) + ")");
    }
}

Encryption finish(const PrivateSet& set, unsigned level, Grouped grouped) {
    Encryption result;
    result.encrypted.level = level;
    result.encrypted.keys = grouped.keys;
    result.encrypted.source_element_count = set.size();
    result.index = InvertedIndex(level, std::move(grouped.keys), std::move(grouped.offsets),
                                 std::move(grouped.values));
    return result;
}

}  // namespace

void PrivateSet::add(ElementId id, OmegaSet omega) {
    if (omega.empty()) throw PreconditionError("element '" + id + "' has an empty Omega set");
    if (contains(id)) throw PreconditionError("element '" + id + "' is already in the set");
    elements_.push_back(std::move(id));
    resolved_.push_back(std::move(omega));
}

bool PrivateSet::contains(std::string_view id) const {
    return std::find(elements_.begin(), elements_.end(), id) != elements_.end();
}

Resolution resolve(const ElementMap& map, std::span<const ElementId> ids) {
    Resolution out;
    std::unordered_set<std::string> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) continue;
        const OmegaSet& omega = map.lookup(id);
        if (omega.empty()) {
            out.dropped.push_back(id);
            continue;
        }
        out.set.add(id, omega);
    }
    return out;
}

InvertedIndex::InvertedIndex(unsigned level, std::vector<Key> keys, std::vector<std::size_t> offsets,
                             std::vector<Value> values)
    : level_(level), keys_(std::move(keys)), offsets_(std::move(offsets)), values_(std::move(values)) {
    if (offsets_.size() != keys_.size() + 1 || offsets_.front() != 0 || offsets_.back() != values_.size()) {
        throw FormatError("inverted index offsets do not match its keys and values");
    }
    for (std::size_t i = 1; i < keys_.size(); ++i) {
        if (keys_[i - 1] >= keys_[i]) throw FormatError("inverted index keys are not strictly ascending");
    }
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        const std::size_t len = offsets_[i + 1] - offsets_[i];
        if (offsets_[i + 1] < offsets_[i] || len == 0 || len % level_ != 0) {
            throw FormatError("inverted index posting of key " + std::to_string(keys_[i]) +
                              " is not a whole number of " + std::to_string(level_) + "-tuples");
        }
    }
}

std::span<const Value> InvertedIndex::posting_at(std::size_t i) const {
    return std::span<const Value>(values_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::span<const Value> InvertedIndex::posting(Key key) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) {
        throw FormatError("key " + std::to_string(key) + " is missing from the inverted index");
    }
    return posting_at(static_cast<std::size_t>(it - keys_.begin()));
}

bool InvertedIndex::contains(Key key) const {
    return std::binary_search(keys_.begin(), keys_.end(), key);
}

Encryption encrypt(const PrivateSet& set, unsigned level) {
    check_encryptable(set, level);
    return finish(set, level, encrypt_slice(set, level, 0, binomial(set.size(), level)));
}

Encryption encrypt_parallel(const PrivateSet& set, unsigned level, unsigned workers) {
    check_encryptable(set, level);
    if (workers == 0) throw PreconditionError("worker count must be positive");
    const std::uint64_t combos = binomial(set.size(), level);
    const std::uint64_t slices = std::min<std::uint64_t>(workers, combos);
    if (slices <= 1) return encrypt(set, level);

    std::vector<Grouped> runs(slices);
    {
        std::vector<std::jthread> threads;
        threads.reserve(slices);
        for (std::uint64_t w = 0; w < slices; ++w) {
            const std::uint64_t first = combos * w / slices;
            const std::uint64_t last = combos * (w + 1) / slices;
            threads.emplace_back([&, w, first, last] { runs[w] = encrypt_slice(set, level, first, last - first); });
        }
    }
    return finish(set, level, merge_runs(runs));
}

std::uint64_t key_count_bound(std::span<const std::uint64_t> omega_sizes, unsigned level) {
    // Elementary symmetric polynomial e_level(sizes) by dynamic programming.
    std::vector<std::uint64_t> e(level + 1, 0);
    e[0] = 1;
    for (std::uint64_t s : omega_sizes) {
        for (unsigned k = level; k >= 1; --k) e[k] = saturating_add(e[k], saturating_mul(e[k - 1], s));
    }
    return e[level];
}

std::vector<std::uint64_t> omega_sizes(const PrivateSet& set) {
    std::vector<std::uint64_t> sizes;
    for (const auto& omega : set.resolved()) sizes.push_back(omega.size());
    return sizes;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace nsum
