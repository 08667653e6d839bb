#include "nsum/compare.hpp"

#include <algorithm>

#include "nsum/error.hpp"

namespace nsum {

namespace {

constexpr std::size_t kGallopRatio = 16;

// Walks the short list and gallops through the long one: exponential probe
// then binary search within the bracketed window.
std::vector<Key> gallop_intersect(std::span<const Key> small, std::span<const Key> large) {
    std::vector<Key> out;
    out.reserve(small.size());
    std::size_t lo = 0;
    for (Key k : small) {
        if (lo >= large.size()) break;
        std::size_t step = 1;
        std::size_t hi = lo;
        while (hi < large.size() && large[hi] < k) {
            lo = hi + 1;
            hi += step;
            step *= 2;
        }
        hi = std::min(hi + 1, large.size());
        auto it = std::lower_bound(large.begin() + static_cast<std::ptrdiff_t>(lo),
                                   large.begin() + static_cast<std::ptrdiff_t>(hi), k);
        lo = static_cast<std::size_t>(it - large.begin());
        if (it != large.end() && *it == k) {
            out.push_back(k);
            ++lo;
        }
    }
    return out;
}

}  // namespace

std::vector<Key> intersect_sorted(std::span<const Key> a, std::span<const Key> b) {
    if (a.size() > b.size()) std::swap(a, b);
    if (a.empty()) return {};
    if (b.size() / a.size() > kGallopRatio) return gallop_intersect(a, b);

    std::vector<Key> out;
    out.reserve(a.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            out.push_back(a[i]);
            ++i;
            ++j;
        }
    }
    return out;
}

std::vector<Key> intersect_keys(const EncryptedSet& a, const EncryptedSet& b) {
    if (a.level != b.level) {
        throw PreconditionError("cannot compare a level-" + std::to_string(a.level) +
                                " encryption with a level-" + std::to_string(b.level) + " encryption");
    }
    return intersect_sorted(a.keys, b.keys);
}

OmegaSet recover(std::span<const Key> common, const InvertedIndex& index) {
    std::vector<Value> values;
    for (Key k : common) {
        const auto posting = index.posting(k);
        values.insert(values.end(), posting.begin(), posting.end());
    }
    return OmegaSet::from_values(std::move(values));
}

std::vector<ElementScore> score_elements(const PrivateSet& set, const OmegaSet& recovered) {
    std::vector<ElementScore> scores;
    scores.reserve(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        const OmegaSet& omega = set.resolved()[i];
        std::size_t hits = 0;
        for (Value v : omega) hits += recovered.contains(v) ? 1 : 0;
        scores.push_back({set.elements()[i], static_cast<double>(hits) / static_cast<double>(omega.size())});
    }
    return scores;
}

MatchReport compare(const OwnEncryption& mine, const EncryptedSet& theirs, double threshold) {
    MatchReport report;
    report.level = mine.encrypted.level;
    report.threshold = threshold;
    report.common_keys = intersect_keys(mine.encrypted, theirs);
    report.my_key_count = mine.encrypted.keys.size();
    report.my_overlap_fraction =
        report.my_key_count == 0
            ? 0.0
            : static_cast<double>(report.common_keys.size()) / static_cast<double>(report.my_key_count);
    report.recovered_values = recover(report.common_keys, mine.index);
    report.element_scores = score_elements(mine.set, report.recovered_values);
    report.high_confidence = report.my_overlap_fraction > threshold;
    return report;
}

}  // namespace nsum
