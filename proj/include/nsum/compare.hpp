#pragma once

// Private comparison of two encrypted sets.
//
// Each party intersects its own keys with the counterparty's keys, maps the
// common keys back through its private inverted index to the value set Y,
// and scores every element by |Y n Omega_i| / |Omega_i|. Reports are
// one-sided: each party divides by its own key count.

#include <span>
#include <string>
#include <vector>

#include "nsum/encrypt.hpp"

namespace nsum {

inline constexpr double kDefaultConfidenceThreshold = 0.01;

// Sorted intersection of two strictly ascending lists. Linear merge, or a
// galloping search from the smaller side when the sizes differ by > 16x.
std::vector<Key> intersect_sorted(std::span<const Key> a, std::span<const Key> b);

// Throws PreconditionError when the levels differ.
std::vector<Key> intersect_keys(const EncryptedSet& a, const EncryptedSet& b);

// Union of the postings of `common`. Throws FormatError for a key the index
// does not hold.
OmegaSet recover(std::span<const Key> common, const InvertedIndex& index);

struct ElementScore {
    ElementId id;
    double score = 0.0;

    friend bool operator==(const ElementScore&, const ElementScore&) = default;
};

// One score per element, in set order, zero scores included.
std::vector<ElementScore> score_elements(const PrivateSet& set, const OmegaSet& recovered);

struct MatchReport {
    unsigned level = 1;
    std::vector<Key> common_keys;
    std::size_t my_key_count = 0;
    double my_overlap_fraction = 0.0;
    OmegaSet recovered_values;
    std::vector<ElementScore> element_scores;
    double threshold = kDefaultConfidenceThreshold;
    bool high_confidence = false;
};

// The owner's side of a comparison: what it keeps after encrypting.
struct OwnEncryption {
    const PrivateSet& set;
    const EncryptedSet& encrypted;
    const InvertedIndex& index;
};

MatchReport compare(const OwnEncryption& mine, const EncryptedSet& theirs,
                    double threshold = kDefaultConfidenceThreshold);

}  // namespace nsum
