#include "nsum/attack.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "nsum/error.hpp"

namespace nsum {

namespace {

std::string format_estimate(long double rows) {
    std::ostringstream os;
    os.precision(3);
    os << static_cast<double>(rows);
    return os.str();
}

// Builds the result from a membership bitmap over the domain.
AttackResult collect(const AttackDomain& domain, const std::vector<char>& flagged, const AttackOptions& options) {
    AttackResult result;
    for (std::size_t i = 0; i < flagged.size(); ++i) {
        if (flagged[i]) result.candidate_indices.push_back(static_cast<std::uint32_t>(i));
    }
    result.candidate_count = result.candidate_indices.size();

    if (options.truth != nullptr) {
        result.evaluated = true;
        for (std::uint32_t i : result.candidate_indices) {
            if (options.truth->count(domain.labels[i]) != 0) ++result.true_positive_count;
            else ++result.false_positive_count;
        }
        std::size_t truth_in_domain = 0;
        for (std::size_t i = 0; i < domain.size(); ++i) truth_in_domain += options.truth->count(domain.labels[i]);
        result.missed_truth_count = truth_in_domain - result.true_positive_count;
    }

    if (result.candidate_count > options.max_retained) {
        result.sampled = true;
        std::vector<std::uint32_t> sample;
        std::sample(result.candidate_indices.begin(), result.candidate_indices.end(), std::back_inserter(sample),
                    options.sample_size, std::mt19937_64(options.sample_seed));
        for (std::uint32_t i : sample) result.candidates.push_back(domain.labels[i]);
    } else {
        for (std::uint32_t i : result.candidate_indices) result.candidates.push_back(domain.labels[i]);
    }
    return result;
}

}  // namespace

std::uint64_t AttackDomain::value_count() const {
    std::uint64_t total = 0;
    for (const auto& omega : omegas) total += omega.size();
    return total;
}

AttackDomain AttackDomain::from_map(const ElementMap& map) {
    AttackDomain domain;
    for (const auto& [id, omega] : map.entries()) {
        if (omega.empty() || map.is_stopword(id)) continue;
        domain.labels.push_back(id);
        domain.omegas.push_back(omega);
    }
    return domain;
}

AttackDomain AttackDomain::from_hash(const PositionHash& hash) {
    AttackDomain domain;
    const auto forward = hash.forward();
    domain.labels.reserve(forward.size());
    domain.omegas.reserve(forward.size());
    for (std::size_t g = 0; g < forward.size(); ++g) {
        domain.labels.push_back(std::to_string(g + 1));
        domain.omegas.push_back(OmegaSet{forward[g]});
    }
    return domain;
}

AttackResult attack_s1(const EncryptedSet& s1, const ElementMap& map, const AttackOptions& options) {
    if (s1.level != 1) {
        throw PreconditionError("the linear attack needs a level-1 encryption, got level " + std::to_string(s1.level));
    }
    const AttackDomain domain = AttackDomain::from_map(map);
    std::vector<char> flagged(domain.size(), 0);
    if (!s1.keys.empty()) {
        for (std::size_t i = 0; i < domain.size(); ++i) {
            const auto& omega = domain.omegas[i];
            flagged[i] = std::all_of(omega.begin(), omega.end(), [&](Value v) {
                return std::binary_search(s1.keys.begin(), s1.keys.end(), v);
            });
        }
    }
    return collect(domain, flagged, options);
}

long double sum_table_entry_estimate(std::uint64_t value_count, unsigned level) {
    // C(V + n - 1, n) in log space.
    const long double v = static_cast<long double>(value_count);
    if (value_count == 0) return 0.0L;
    return std::exp(std::lgamma(v + level) - std::lgamma(static_cast<long double>(level) + 1) - std::lgamma(v));
}

void require_attack_feasible(std::uint64_t value_count, unsigned level, std::uint64_t cap) {
    if (level == 0) throw PreconditionError("attack level must be at least 1");
    if (level == 1) return;
    const long double rows = sum_table_entry_estimate(value_count, level);
    if (level > 2) {
        throw ResourceLimitError("level-" + std::to_string(level) + " brute force needs a sum table of about " +
                                 format_estimate(rows) + " rows over " + std::to_string(value_count) +
                                 " values; no attack is implemented beyond level 2");
    }
    if (rows > static_cast<long double>(cap)) {
        throw ResourceLimitError("pairwise sum table would hold about " + format_estimate(rows) + " rows over " +
                                 std::to_string(value_count) + " values (cap " + std::to_string(cap) +
                                 "); tabulating all pairs costs quadratic time and memory");
    }
}

SumTable::SumTable(AttackDomain domain, std::vector<Row> rows) : domain_(std::move(domain)), rows_(std::move(rows)) {}

std::span<const SumTable::Row> SumTable::find(Key sum) const {
    auto lo = std::lower_bound(rows_.begin(), rows_.end(), sum, [](const Row& r, Key s) { return r.sum < s; });
    auto hi = std::upper_bound(lo, rows_.end(), sum, [](Key s, const Row& r) { return s < r.sum; });
    return {lo, hi};
}

SumTable build_sum_table(AttackDomain domain, std::uint64_t cap, unsigned workers) {
    require_attack_feasible(domain.value_count(), 2, cap);
    if (domain.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw ResourceLimitError("attack domain too large to index");
    }
    workers = std::max(1u, workers);
    const std::size_t n = domain.size();

    auto rows_for = [&](std::size_t first, std::size_t last) {
        std::vector<SumTable::Row> rows;
        for (std::size_t i = first; i < last; ++i) {
            const auto& a = domain.omegas[i].values();
            for (std::size_t j = i; j < n; ++j) {
                const auto& b = domain.omegas[j].values();
                for (std::size_t p = 0; p < a.size(); ++p) {
                    for (std::size_t q = (i == j ? p : 0); q < b.size(); ++q) {
                        rows.push_back({a[p] + b[q], static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
                    }
                }
            }
        }
        return rows;
    };

    std::vector<std::vector<SumTable::Row>> parts(workers);
    {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            // Row i pairs with n - i partners; split so each worker gets a similar share.
            auto bound = [&](unsigned k) {
                const double frac = static_cast<double>(k) / workers;
                return static_cast<std::size_t>(static_cast<double>(n) * (1.0 - std::sqrt(1.0 - frac)));
            };
            const std::size_t first = bound(w);
            const std::size_t last = w + 1 == workers ? n : bound(w + 1);
            threads.emplace_back([&, w, first, last] { parts[w] = rows_for(first, last); });
        }
    }
    std::vector<SumTable::Row> rows;
    std::size_t total = 0;
    for (const auto& part : parts) total += part.size();
    rows.reserve(total);
    for (auto& part : parts) {
        rows.insert(rows.end(), part.begin(), part.end());
        part = {};
    }
    std::sort(rows.begin(), rows.end(), [](const SumTable::Row& x, const SumTable::Row& y) {
        if (x.sum != y.sum) return x.sum < y.sum;
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
    });
    return SumTable(std::move(domain), std::move(rows));
}

AttackResult attack_s2(const EncryptedSet& s2, const SumTable& table, const AttackOptions& options) {
    if (s2.level != 2) {
        throw PreconditionError("the pair-sum attack needs a level-2 encryption, got level " +
                                std::to_string(s2.level));
    }
    std::vector<char> flagged(table.domain().size(), 0);
    const auto rows = table.rows();
    // Both lists are sorted by sum: walk them together.
    std::size_t r = 0;
    for (Key k : s2.keys) {
        while (r < rows.size() && rows[r].sum < k) ++r;
        for (std::size_t t = r; t < rows.size() && rows[t].sum == k; ++t) {
            flagged[rows[t].first] = 1;
            flagged[rows[t].second] = 1;
        }
    }
    return collect(table.domain(), flagged, options);
}

double false_positive_rate(const AttackResult& result, const std::unordered_set<std::string>& truth) {
    if (result.candidate_count == 0) return 0.0;
    if (result.sampled) {
        if (!result.evaluated) {
            throw PreconditionError("sampled attack results need ground truth supplied during the attack");
        }
        return static_cast<double>(result.false_positive_count) / static_cast<double>(result.candidate_count);
    }
    std::size_t false_positives = 0;
    for (const auto& c : result.candidates) false_positives += truth.count(c) == 0 ? 1 : 0;
    return static_cast<double>(false_positives) / static_cast<double>(result.candidates.size());
}

}  // namespace nsum
