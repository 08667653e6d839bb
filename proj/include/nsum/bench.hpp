#pragma once

// Experiment harness: key-set growth and timing across word counts and
// levels, and the overlap-versus-false-positive confidence experiment.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "nsum/encrypt.hpp"
#include "nsum/omega_map.hpp"

namespace nsum {

// Draws `count` distinct elements with non-empty Omega sets, uniformly.
std::vector<ElementId> sample_words(const ElementMap& map, std::size_t count, std::mt19937_64& rng);

// Values of `mine` that genuinely appear in one of `theirs`' Omega sets.
OmegaSet truly_common_values(const PrivateSet& mine, const PrivateSet& theirs);

struct BenchConfig {
    std::vector<unsigned> levels{1, 2, 3};
    std::vector<std::size_t> word_counts{3, 5, 10};
    std::size_t trials = 10;
    // Worker count for the multi-threaded encryption column.
    unsigned workers = 4;
    std::uint64_t seed = 1;
};

struct BenchRecord {
    std::size_t word_count = 0;
    unsigned level = 0;
    std::size_t trials = 0;
    double mean_key_count = 0;
    double mean_encrypt_ms = 0;
    double median_encrypt_ms = 0;
    double mean_encrypt_parallel_ms = 0;
    double median_encrypt_parallel_ms = 0;
    double mean_compare_ms = 0;
    double median_compare_ms = 0;
    double mean_overlap_fraction = 0;
    // Fraction of trials whose recovered values include a false positive.
    double false_positive_rate = 0;
    // Sum of key counts over trials; identical across runs with one seed.
    std::uint64_t total_key_count = 0;
};

// One record per (level, word_count) cell with word_count >= level. Each
// trial encrypts a random message single- and multi-threaded (outputs must
// agree), then compares it against a fresh random counterpart.
std::vector<BenchRecord> run_bench(const ElementMap& map, const BenchConfig& config);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

struct ConfidenceConfig {
    std::size_t pairs = 300;
    std::size_t words = 10;
    unsigned level = 2;
    // Each pair shares a uniformly drawn number of words in [0, max_shared].
    std::size_t max_shared = 5;
    double threshold = 0.01;
    std::uint64_t seed = 1;
};

struct ConfidenceRecord {
    std::size_t pair = 0;
    std::size_t shared_words = 0;
    std::size_t my_key_count = 0;
    std::size_t their_key_count = 0;
    std::size_t common_key_count = 0;
    double overlap_fraction = 0;
    std::size_t recovered_count = 0;
    std::size_t false_positive_count = 0;
};

std::vector<ConfidenceRecord> run_confidence_experiment(const ElementMap& map, const ConfidenceConfig& config);

struct ConfidenceSummary {
    std::size_t pairs = 0;
    std::size_t above_threshold = 0;
    std::size_t above_threshold_clean = 0;
    std::size_t below_threshold = 0;
    std::size_t below_threshold_clean = 0;

    // Share of above-threshold pairs without false positives; 1 when none.
    double clean_fraction_above() const {
        return above_threshold == 0 ? 1.0 : static_cast<double>(above_threshold_clean) / above_threshold;
    }
};

ConfidenceSummary summarize(const std::vector<ConfidenceRecord>& records, double threshold);

void write_confidence_csv(std::ostream& out, const std::vector<ConfidenceRecord>& records);

}  // namespace nsum
