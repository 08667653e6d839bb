#pragma once

// n-Sum encryption.
//
// A private set of N elements is encrypted at level n into the set of every
// sum obtained by choosing n distinct elements i_1 < ... < i_n and one Omega
// value from each, with duplicate sums removed. Level 1 is the union of the
// Omega sets. The owner also keeps an inverted index from each key back to
// the values that produced it; only the keys are ever shared.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nsum/omega_map.hpp"

namespace nsum {

using Key = std::uint64_t;

// Distinct elements with their non-empty Omega sets, in insertion order.
class PrivateSet {
public:
    PrivateSet() = default;

    // Rejects duplicate ids and empty Omega sets.
    void add(ElementId id, OmegaSet omega);

    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    bool contains(std::string_view id) const;

    std::span<const ElementId> elements() const { return elements_; }
    std::span<const OmegaSet> resolved() const { return resolved_; }

private:
    std::vector<ElementId> elements_;
    std::vector<OmegaSet> resolved_;
};

struct Resolution {
    PrivateSet set;
    // Ids whose lookup came back empty (unknown or stopword), in input order.
    std::vector<ElementId> dropped;
};

// Keeps the first occurrence of each id; drops ids without an Omega set.
Resolution resolve(const ElementMap& map, std::span<const ElementId> ids);

struct EncryptedSet {
    unsigned level = 1;
    std::vector<Key> keys;  // strictly ascending
    std::size_t source_element_count = 0;

    friend bool operator==(const EncryptedSet&, const EncryptedSet&) = default;
};

// Key -> contributing Omega values. Each n-tuple that produced a key adds
// its n summands to the key's posting, in enumeration order.
class InvertedIndex {
public:
    InvertedIndex() = default;
    InvertedIndex(unsigned level, std::vector<Key> keys, std::vector<std::size_t> offsets,
                  std::vector<Value> values);

    unsigned level() const { return level_; }
    std::size_t size() const { return keys_.size(); }
    std::span<const Key> keys() const { return keys_; }

    // Posting of the i-th key.
    std::span<const Value> posting_at(std::size_t i) const;
    // Posting of `key`; throws FormatError when the key is absent.
    std::span<const Value> posting(Key key) const;
    bool contains(Key key) const;

    // Number of values stored across all postings.
    std::size_t value_count() const { return values_.size(); }

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

private:
    unsigned level_ = 1;
    std::vector<Key> keys_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Value> values_;
};

struct Encryption {
    EncryptedSet encrypted;
    InvertedIndex index;
};

// Throws PreconditionError when level == 0 or set.size() < level.
Encryption encrypt(const PrivateSet& set, unsigned level);

// Same result as encrypt(), computed by `workers` threads over contiguous
// slices of the n-subset enumeration and merged with a k-way sorted union.
Encryption encrypt_parallel(const PrivateSet& set, unsigned level, unsigned workers);

// Sum over all n-subsets of the product of their Omega sizes: the number of
// sum terms before deduplication, hence an upper bound on the key count.
// Saturates at UINT64_MAX.
std::uint64_t key_count_bound(std::span<const std::uint64_t> omega_sizes, unsigned level);

std::vector<std::uint64_t> omega_sizes(const PrivateSet& set);

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace nsum
