#pragma once

// Brute-force decryption attacks against n-Sum encryption.
//
// An attacker who knows the public map M can test every element against a
// level-1 encryption in linear time, or tabulate all pairwise sums of the
// map's values and look up a level-2 encryption's keys in that table. Both
// attacks over-approximate: they never miss a member but are swamped with
// candidates produced by sum collisions. Level 3 and above is only costed.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "nsum/encrypt.hpp"
#include "nsum/omega_map.hpp"

namespace nsum {

// The identifiers an attacker enumerates, each with its Omega set.
struct AttackDomain {
    std::vector<std::string> labels;
    std::vector<OmegaSet> omegas;

    std::size_t size() const { return labels.size(); }
    // Total number of Omega values across the domain.
    std::uint64_t value_count() const;

    // Every non-stopword entry with a non-empty Omega set.
    static AttackDomain from_map(const ElementMap& map);
    // Grid index g (decimal label) with Omega = {hash(g)}, g = 1..world_dim^2.
    static AttackDomain from_hash(const PositionHash& hash);
};

struct AttackOptions {
    // Above this many candidates only a random sample of labels is kept.
    std::size_t max_retained = 1'000'000;
    std::size_t sample_size = 10'000;
    std::uint64_t sample_seed = 0;
    // Ground truth for true/false positive accounting, when known.
    const std::unordered_set<std::string>* truth = nullptr;
};

struct AttackResult {
    // Candidate labels in domain order; a random sample when `sampled`.
    std::vector<std::string> candidates;
    // Domain indices of all candidates, ascending.
    std::vector<std::uint32_t> candidate_indices;
    std::size_t candidate_count = 0;
    bool sampled = false;

    bool evaluated = false;
    std::size_t true_positive_count = 0;
    std::size_t false_positive_count = 0;
    // Truth members missing from the candidates; always 0 for a sound attack.
    std::size_t missed_truth_count = 0;
};

// Flags every element whose whole Omega set appears among the keys.
// Requires s1.level == 1.
AttackResult attack_s1(const EncryptedSet& s1, const ElementMap& map, const AttackOptions& options = {});

inline constexpr std::uint64_t kDefaultSumTableCap = 100'000'000;

// Number of rows in a level-n sum table over a domain with `value_count`
// values: multisets of size n, C(value_count + n - 1, n). Floating point so
// that infeasible levels can still be reported.
long double sum_table_entry_estimate(std::uint64_t value_count, unsigned level);

// Throws ResourceLimitError, quoting the estimate, when a level-n table over
// the domain exceeds `cap` rows or when level > 2 (no runnable attack).
void require_attack_feasible(std::uint64_t value_count, unsigned level,
                             std::uint64_t cap = kDefaultSumTableCap);

// All pairwise sums over the domain, self pairs included, each row carrying
// the two contributing identifiers. Sorted by (sum, first, second).
class SumTable {
public:
    struct Row {
        Key sum;
        std::uint32_t first;
        std::uint32_t second;
    };

    SumTable(AttackDomain domain, std::vector<Row> rows);

    unsigned level() const { return 2; }
    const AttackDomain& domain() const { return domain_; }
    std::span<const Row> rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    // Rows whose sum equals `sum`.
    std::span<const Row> find(Key sum) const;

private:
    AttackDomain domain_;
    std::vector<Row> rows_;
};

SumTable build_sum_table(AttackDomain domain, std::uint64_t cap = kDefaultSumTableCap,
                         unsigned workers = 1);

// Union of the contributors of every table row whose sum is a key of s2.
// Requires s2.level == 2.
AttackResult attack_s2(const EncryptedSet& s2, const SumTable& table, const AttackOptions& options = {});

// |candidates \ truth| / |candidates|, 0 for no candidates. Uses the exact
// counts recorded during the attack when the label list was sampled.
double false_positive_rate(const AttackResult& result, const std::unordered_set<std::string>& truth);

}  // namespace nsum
