#include "nsum/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "nsum/compare.hpp"
#include "nsum/error.hpp"

namespace nsum {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    if (xs.size() % 2 == 1) return xs[mid];
    const double upper = xs[mid];
    const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

// splitmix64 finalizer; derives independent per-cell seeds.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

PrivateSet make_set(const ElementMap& map, const std::vector<ElementId>& words) {
    return resolve(map, words).set;
}

std::vector<std::size_t> usable_entries(const ElementMap& map) {
    std::vector<std::size_t> usable;
    const auto& entries = map.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!map.lookup(entries[i].first).empty()) usable.push_back(i);
    }
    return usable;
}

}  // namespace

std::vector<ElementId> sample_words(const ElementMap& map, std::size_t count, std::mt19937_64& rng) {
    const auto& entries = map.entries();
    std::vector<std::size_t> usable;
    const bool dense = entries.size() <= 4 * count;
    if (dense) usable = usable_entries(map);
    std::vector<ElementId> words;
    std::unordered_set<std::size_t> taken;
    if (dense) {
        if (usable.size() < count) {
            throw PreconditionError("map has only " + std::to_string(usable.size()) + " usable elements, need " +
                                    std::to_string(count));
        }
        std::shuffle(usable.begin(), usable.end(), rng);
        for (std::size_t i = 0; i < count; ++i) words.push_back(entries[usable[i]].first);
        return words;
    }
    std::uniform_int_distribution<std::size_t> pick(0, entries.size() - 1);
    std::size_t draws = 0;
    while (words.size() < count) {
        if (++draws > 1000 * count + 1000) throw PreconditionError("map has too few usable elements");
        const std::size_t i = pick(rng);
        if (map.lookup(entries[i].first).empty() || !taken.insert(i).second) continue;
        words.push_back(entries[i].first);
    }
    return words;
}

OmegaSet truly_common_values(const PrivateSet& mine, const PrivateSet& theirs) {
    std::unordered_set<Value> their_values;
    for (const auto& omega : theirs.resolved()) their_values.insert(omega.begin(), omega.end());
    std::vector<Value> common;
    for (const auto& omega : mine.resolved()) {
        for (Value v : omega) {
            if (their_values.count(v) != 0) common.push_back(v);
        }
    }
    return OmegaSet::from_values(std::move(common));
}

std::vector<BenchRecord> run_bench(const ElementMap& map, const BenchConfig& config) {
    if (config.trials == 0) throw PreconditionError("bench needs at least one trial");
    std::vector<BenchRecord> records;
    for (unsigned level : config.levels) {
        if (level == 0) throw PreconditionError("bench levels must be positive");
        for (std::size_t words : config.word_counts) {
            if (words < level) continue;
            std::vector<double> keys, enc, enc_mt, cmp, overlap;
            std::size_t with_false_positive = 0;
            std::uint64_t total_keys = 0;
            std::mt19937_64 rng(mix(config.seed ^ mix(level) ^ mix(words * 0x100000001ULL)));
            for (std::size_t t = 0; t < config.trials; ++t) {
                const PrivateSet mine = make_set(map, sample_words(map, words, rng));
                const PrivateSet theirs = make_set(map, sample_words(map, words, rng));

                auto start = Clock::now();
                const Encryption single = encrypt(mine, level);
                enc.push_back(elapsed_ms(start));

                start = Clock::now();
                const Encryption multi = encrypt_parallel(mine, level, config.workers);
                enc_mt.push_back(elapsed_ms(start));
                if (!(multi.encrypted == single.encrypted) || !(multi.index == single.index)) {
                    throw Error("parallel encryption diverged from the sequential result");
                }

                const Encryption counterpart = encrypt(theirs, level);
                start = Clock::now();
                const MatchReport report = compare({mine, single.encrypted, single.index}, counterpart.encrypted);
                cmp.push_back(elapsed_ms(start));

                keys.push_back(static_cast<double>(single.encrypted.keys.size()));
                total_keys += single.encrypted.keys.size();
                overlap.push_back(report.my_overlap_fraction);
                const OmegaSet truth = truly_common_values(mine, theirs);
                const bool false_positive =
                    std::any_of(report.recovered_values.begin(), report.recovered_values.end(),
                                [&](Value v) { return !truth.contains(v); });
                with_false_positive += false_positive ? 1 : 0;
            }
            BenchRecord r;
            r.word_count = words;
            r.level = level;
            r.trials = config.trials;
            r.mean_key_count = mean(keys);
            r.mean_encrypt_ms = mean(enc);
            r.median_encrypt_ms = median(enc);
            r.mean_encrypt_parallel_ms = mean(enc_mt);
            r.median_encrypt_parallel_ms = median(enc_mt);
            r.mean_compare_ms = mean(cmp);
            r.median_compare_ms = median(cmp);
            r.mean_overlap_fraction = mean(overlap);
            r.false_positive_rate = static_cast<double>(with_false_positive) / static_cast<double>(config.trials);
            r.total_key_count = total_keys;
            records.push_back(r);
        }
    }
    return records;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "word_count,level,trials,mean_key_count,mean_encrypt_ms,median_encrypt_ms,"
           "mean_encrypt_parallel_ms,median_encrypt_parallel_ms,mean_compare_ms,median_compare_ms,"
           "mean_overlap_fraction,false_positive_rate\n";
    for (const auto& r : records) {
        out << r.word_count << ',' << r.level << ',' << r.trials << ',' << r.mean_key_count << ','
            << r.mean_encrypt_ms << ',' << r.median_encrypt_ms << ',' << r.mean_encrypt_parallel_ms << ','
            << r.median_encrypt_parallel_ms << ',' << r.mean_compare_ms << ',' << r.median_compare_ms << ','
            << r.mean_overlap_fraction << ',' << r.false_positive_rate << '\n';
    }
}

std::vector<ConfidenceRecord> run_confidence_experiment(const ElementMap& map, const ConfidenceConfig& config) {
    if (config.words < config.level) throw PreconditionError("messages must have at least `level` words");
    if (config.max_shared > config.words) throw PreconditionError("cannot share more words than a message has");
    std::mt19937_64 rng(mix(config.seed));
    std::uniform_int_distribution<std::size_t> shared_dist(0, config.max_shared);
    std::vector<ConfidenceRecord> records;
    records.reserve(config.pairs);
    for (std::size_t p = 0; p < config.pairs; ++p) {
        const std::size_t shared = shared_dist(rng);
        // Draw 2*words - shared distinct words: A takes the first `words`,
        // B reuses the first `shared` of them plus the remainder.
        const auto pool = sample_words(map, 2 * config.words - shared, rng);
        std::vector<ElementId> a(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(config.words));
        std::vector<ElementId> b(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(shared));
        b.insert(b.end(), pool.begin() + static_cast<std::ptrdiff_t>(config.words), pool.end());
        std::shuffle(b.begin(), b.end(), rng);

        const PrivateSet mine = make_set(map, a);
        const PrivateSet theirs = make_set(map, b);
        const Encryption my_enc = encrypt(mine, config.level);
        const Encryption their_enc = encrypt(theirs, config.level);
        const MatchReport report =
            compare({mine, my_enc.encrypted, my_enc.index}, their_enc.encrypted, config.threshold);
        const OmegaSet truth = truly_common_values(mine, theirs);

        ConfidenceRecord r;
        r.pair = p;
        r.shared_words = shared;
        r.my_key_count = my_enc.encrypted.keys.size();
        r.their_key_count = their_enc.encrypted.keys.size();
        r.common_key_count = report.common_keys.size();
        r.overlap_fraction = report.my_overlap_fraction;
        r.recovered_count = report.recovered_values.size();
        r.false_positive_count = static_cast<std::size_t>(
            std::count_if(report.recovered_values.begin(), report.recovered_values.end(),
                          [&](Value v) { return !truth.contains(v); }));
        records.push_back(r);
    }
    return records;
}

ConfidenceSummary summarize(const std::vector<ConfidenceRecord>& records, double threshold) {
    ConfidenceSummary s;
    s.pairs = records.size();
    for (const auto& r : records) {
        const bool clean = r.false_positive_count == 0;
        if (r.overlap_fraction > threshold) {
            ++s.above_threshold;
            s.above_threshold_clean += clean ? 1 : 0;
        } else {
            ++s.below_threshold;
            s.below_threshold_clean += clean ? 1 : 0;
        }
    }
    return s;
}

void write_confidence_csv(std::ostream& out, const std::vector<ConfidenceRecord>& records) {
    out << "pair,shared_words,my_key_count,their_key_count,common_key_count,overlap_fraction,"
           "recovered_count,false_positive_count\n";
    for (const auto& r : records) {
        out << r.pair << ',' << r.shared_words << ',' << r.my_key_count << ',' << r.their_key_count << ','
            << r.common_key_count << ',' << r.overlap_fraction << ',' << r.recovered_count << ','
            << r.false_positive_count << '\n';
    }
}

}  // namespace nsum
