#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "nsum/attack.hpp"
#include "nsum/bench.hpp"
#include "nsum/compare.hpp"
#include "nsum/encrypt.hpp"
#include "nsum/error.hpp"
#include "nsum/key_file.hpp"
#include "nsum/shapes.hpp"

namespace nsum::cli {
namespace {

namespace fs = std::filesystem;

// Accepts "100000000" as well as "1e8".
Value parse_count(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size()) return v;
        const double d = std::stod(text, &used);
        if (used == text.size() && d >= 0 && d < 1.8e19 && std::floor(d) == d) return static_cast<Value>(d);
    } catch (const std::exception&) {
    }
    throw PreconditionError(what + " must be a non-negative integer, got '" + text + "'");
}

std::vector<ElementId> read_tokens(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw FormatError("cannot write " + path.string());
    return out;
}

KeyFormat parse_format(const std::string& name) { return name == "packed" ? KeyFormat::packed : KeyFormat::text; }

HashDistribution parse_distribution(const std::string& name) {
    return name == "edge" ? HashDistribution::edge_weighted : HashDistribution::flat;
}

// Level-1 attacks need a map; every grid index maps to its single hash.
ElementMap grid_map(const PositionHash& hash) {
    ElementMap map(hash.i_max());
    for (std::uint64_t g = 1; g <= hash.cell_count(); ++g) map.set(std::to_string(g), OmegaSet{hash.hash(g)});
    return map;
}

AttackResult run_attack(const EncryptedSet& keys, const ElementMap& map, std::uint64_t cap,
                        const AttackOptions& options) {
    if (keys.level == 1) return attack_s1(keys, map, options);
    AttackDomain domain = AttackDomain::from_map(map);
    require_attack_feasible(domain.value_count(), keys.level, cap);
    return attack_s2(keys, build_sum_table(std::move(domain), cap), options);
}

// Splits a "seed" into independent streams for the hash and both worlds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// --- encrypt -----------------------------------------------------------------

struct EncryptArgs {
    std::string map_path;
    std::string message;
    std::vector<std::string> ids;
    std::string ids_file;
    unsigned level = 2;
    std::string out_path;
    std::string index_path;
    std::string format = "text";
    unsigned key_width = 0;
    std::string stopwords_path;
    unsigned workers = 1;
};

int cmd_encrypt(const EncryptArgs& a, std::ostream& out, std::ostream& err) {
    MapLoadOptions options;
    if (!a.stopwords_path.empty()) options.stopwords = read_tokens(a.stopwords_path);
    options.warn = [&err](const std::string& message) { err << "warning: " << message << '\n'; };
    const ElementMap map = load_map_file(a.map_path, options);

    std::vector<ElementId> tokens = tokenize_message(a.message);
    tokens.insert(tokens.end(), a.ids.begin(), a.ids.end());
    if (!a.ids_file.empty()) {
        const auto more = read_tokens(a.ids_file);
        tokens.insert(tokens.end(), more.begin(), more.end());
    }
    if (tokens.empty()) throw PreconditionError("empty message: give --message, --ids or --ids-file");

    const Resolution r = resolve(map, tokens);
    std::string dropped;
    for (const auto& d : r.dropped) dropped += (dropped.empty() ? "" : " ") + d;
    if (r.set.size() < a.level) {
        throw PreconditionError("only " + std::to_string(r.set.size()) + " of " + std::to_string(tokens.size()) +
                                " tokens resolve, level " + std::to_string(a.level) + " needs " +
                                std::to_string(a.level) + (dropped.empty() ? "" : "; dropped: " + dropped));
    }
    if (!dropped.empty()) err << "skipped (unknown or stopword): " << dropped << '\n';

    const Encryption e = a.workers > 1 ? encrypt_parallel(r.set, a.level, a.workers) : encrypt(r.set, a.level);
    save_key_file(a.out_path, e.encrypted, parse_format(a.format), static_cast<std::uint8_t>(a.key_width));
    const std::string index_path = a.index_path.empty() ? a.out_path + ".idx" : a.index_path;
    save_index(index_path, r.set, e.index);
    out << "wrote " << e.encrypted.keys.size() << " keys (level " << a.level << ", " << r.set.size()
        << " elements) to " << a.out_path << "; private index " << index_path << '\n';
    return kOk;
}

// --- compare -----------------------------------------------------------------

struct CompareArgs {
    std::string my_keys;
    std::string my_index;
    std::string their_keys;
    double threshold = kDefaultConfidenceThreshold;
    std::string format = "human";
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
    const IndexSidecar sidecar = load_index(a.my_index);
    const EncryptedSet mine = sidecar.encrypted();
    const KeyFile my_file = load_key_file(a.my_keys);
    if (my_file.keys != mine.keys || (my_file.level && *my_file.level != mine.level)) {
        throw FormatError(a.my_keys + " does not match the private index " + a.my_index);
    }
    const EncryptedSet theirs = to_encrypted_set(load_key_file(a.their_keys), mine.level);
    const MatchReport r = compare({sidecar.set, mine, sidecar.index}, theirs, a.threshold);

    if (a.format == "csv") {
        out << "level,my_key_count,their_key_count,common_key_count,overlap_fraction,high_confidence,element,score\n";
        for (const auto& s : r.element_scores) {
            out << r.level << ',' << r.my_key_count << ',' << theirs.keys.size() << ',' << r.common_keys.size() << ','
                << r.my_overlap_fraction << ',' << (r.high_confidence ? 1 : 0) << ',' << s.id << ',' << s.score
                << '\n';
        }
    } else if (a.format == "jsonl") {
        nlohmann::json summary{{"type", "summary"},
                               {"level", r.level},
                               {"my_key_count", r.my_key_count},
                               {"their_key_count", theirs.keys.size()},
                               {"common_key_count", r.common_keys.size()},
                               {"overlap_fraction", r.my_overlap_fraction},
                               {"threshold", r.threshold},
                               {"high_confidence", r.high_confidence},
                               {"recovered_value_count", r.recovered_values.size()}};
        out << summary.dump() << '\n';
        for (const auto& s : r.element_scores) {
            out << nlohmann::json{{"type", "element"}, {"id", s.id}, {"score", s.score}}.dump() << '\n';
        }
    } else {
        out << "level " << r.level << ": " << r.common_keys.size() << " common keys of my " << r.my_key_count
            << " (theirs " << theirs.keys.size() << ")\n";
        out << "overlap " << r.my_overlap_fraction << ", " << (r.high_confidence ? "high confidence" : "low confidence")
            << " at threshold " << r.threshold << '\n';
        out << "recovered values " << r.recovered_values.size() << '\n';
        for (const auto& s : r.element_scores) out << "  " << s.id << ' ' << s.score << '\n';
    }
    return kOk;
}

// --- convert -----------------------------------------------------------------

struct ConvertArgs {
    std::string in_path;
    std::string out_path;
    std::string format = "packed";
    unsigned level = 0;
    unsigned key_width = 0;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
    const KeyFile file = load_key_file(a.in_path);
    if (!file.level && a.level == 0 && a.format == "packed") {
        throw PreconditionError(a.in_path + " carries no level; pass --level");
    }
    if (file.level && a.level != 0 && *file.level != a.level) {
        throw PreconditionError(a.in_path + " is level " + std::to_string(*file.level) + ", not " +
                                std::to_string(a.level));
    }
    const EncryptedSet set = to_encrypted_set(file, a.level == 0 ? 1 : a.level);
    save_key_file(a.out_path, set, parse_format(a.format), static_cast<std::uint8_t>(a.key_width));
    out << "wrote " << set.keys.size() << " keys to " << a.out_path << '\n';
    return kOk;
}

// --- demo-shapes -------------------------------------------------------------

struct DemoArgs {
    std::size_t colonies = 10;
    std::uint32_t world_dim = 50;
    std::uint32_t min_dim = 5;
    std::uint32_t max_dim = 10;
    std::string i_max = "1e8";
    std::uint64_t seed = 1;
    std::string out_dir = "shapes";
    unsigned level = 2;
    std::string filter = "strict";
    std::string distribution = "flat";
};

void save_pgm(const fs::path& path, const CandidateGrid& grid) {
    auto f = open_out(path, std::ios::binary);
    write_pgm(f, grid);
}

void save_indices(const fs::path& path, const CandidateGrid& grid) {
    auto f = open_out(path);
    const std::uint32_t dim = grid.world_dim();
    for (std::uint32_t y = 0; y < dim; ++y) {
        for (std::uint32_t x = 0; x < dim; ++x) {
            if (grid.at(x, y)) f << grid_index_of(x, y, dim) << '\n';
        }
    }
}

int cmd_demo_shapes(const DemoArgs& a, std::ostream& out) {
    if (a.level < 1 || a.level > 2) throw PreconditionError("demo-shapes supports level 1 or 2");
    const Value i_max = parse_count(a.i_max, "--i-max");
    const PositionHash hash =
        make_position_hash(a.world_dim, i_max, derive_seed(a.seed, 0), parse_distribution(a.distribution));
    const World blue = random_world(a.colonies, a.world_dim, a.min_dim, a.max_dim, derive_seed(a.seed, 1));
    const World orange = random_world(a.colonies, a.world_dim, a.min_dim, a.max_dim, derive_seed(a.seed, 2));
    const EncryptedWorld eb = encrypt_world(blue, hash, a.level);
    const EncryptedWorld eo = encrypt_world(orange, hash, a.level);

    const FilterMode mode = a.filter == "relaxed" ? FilterMode::relaxed_area : FilterMode::strict_square;
    const CandidateGrid raw = psi_overlap(eb, eo.encryption.encrypted, hash);
    const CandidateGrid filtered = geometric_filter(raw, a.min_dim, mode);
    const CandidateGrid truth = true_intersection(blue, orange);

    // What an outsider learns from Orange's keys alone.
    const AttackResult attack = run_attack(eo.encryption.encrypted, grid_map(hash), kDefaultSumTableCap, {});
    CandidateGrid attacked(a.world_dim);
    for (std::uint32_t i : attack.candidate_indices) attacked.set_grid_index(i + 1);

    const fs::path dir = a.out_dir;
    fs::create_directories(dir);
    save_pgm(dir / "raw.pgm", raw);
    save_pgm(dir / "filtered.pgm", filtered);
    save_pgm(dir / "truth.pgm", truth);
    save_pgm(dir / "attack.pgm", attacked);
    {
        auto f = open_out(dir / "cells.csv");
        write_cell_csv(f, raw, filtered, truth);
    }
    {
        auto f = open_out(dir / "scores.csv");
        f << "world,colony,x,y,width,height,score\n";
        for (const auto& [name, world] : {std::pair{"blue", &blue}, std::pair{"orange", &orange}}) {
            const EncryptedWorld& theirs = world == &blue ? eo : eb;
            const EncryptedWorld& mine = world == &blue ? eb : eo;
            const CandidateGrid view = geometric_filter(psi_overlap(mine, theirs.encryption.encrypted, hash),
                                                        a.min_dim, mode);
            const auto scores = shape_score(*world, view);
            for (std::size_t i = 0; i < world->colonies.size(); ++i) {
                const Rect& c = world->colonies[i];
                f << name << ',' << i + 1 << ',' << c.x << ',' << c.y << ',' << c.width << ',' << c.height << ','
                  << scores[i] << '\n';
            }
        }
    }
    save_key_file(dir / "orange_keys.txt", eo.encryption.encrypted, KeyFormat::text);
    save_indices(dir / "orange_cells.txt", colony_cells(orange));

    out << "candidates raw " << raw.count() << ", filtered " << filtered.count() << ", true overlap "
        << truth.count() << " cells\n";
    out << "false positives raw " << raw.count_outside(truth) << ", filtered " << filtered.count_outside(truth)
        << '\n';
    out << "attack on orange's " << eo.encryption.encrypted.keys.size() << " keys flags " << attacked.count() << " of "
        << raw.cell_count() << " cells\n";
    out << "artifacts in " << dir.string() << '\n';
    return kOk;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
    std::string mode = "size";
    std::string map_path;
    std::size_t synthetic_words = 150'000;
    std::size_t omega_min = 1;
    std::size_t omega_max = 4;
    std::string i_max = "16000000";
    std::vector<unsigned> levels{1, 2, 3};
    std::vector<std::size_t> word_counts{3, 5, 10};
    std::size_t trials = 10;
    unsigned workers = 4;
    std::size_t pairs = 300;
    std::size_t pair_words = 10;
    unsigned level = 2;
    std::size_t max_shared = 5;
    double threshold = kDefaultConfidenceThreshold;
    std::uint64_t seed = 1;
    std::string out_path;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    const ElementMap map =
        a.map_path.empty()
            ? sample_synthetic_map({a.synthetic_words, a.omega_min, a.omega_max, parse_count(a.i_max, "--i-max")},
                                   derive_seed(a.seed, 10))
            : load_map_file(a.map_path);

    std::ofstream file;
    if (!a.out_path.empty()) file = open_out(a.out_path);
    std::ostream& csv = a.out_path.empty() ? out : file;

    if (a.mode == "confidence") {
        ConfidenceConfig config;
        config.pairs = a.pairs;
        config.words = a.pair_words;
        config.level = a.level;
        config.max_shared = a.max_shared;
        config.threshold = a.threshold;
        config.seed = a.seed;
        const auto records = run_confidence_experiment(map, config);
        write_confidence_csv(csv, records);
        const ConfidenceSummary s = summarize(records, a.threshold);
        err << s.above_threshold_clean << " of " << s.above_threshold << " pairs above " << a.threshold
            << " overlap had no false positives; " << s.below_threshold_clean << " of " << s.below_threshold
            << " below\n";
    } else {
        for (std::size_t w : a.word_counts) {
            for (unsigned l : a.levels) {
                if (w < l) err << "skipping word count " << w << " at level " << l << '\n';
            }
        }
        BenchConfig config;
        config.levels = a.levels;
        config.word_counts = a.word_counts;
        config.trials = a.trials;
        config.workers = a.workers;
        config.seed = a.seed;
        write_bench_csv(csv, run_bench(map, config));
    }
    return kOk;
}

// --- attack ------------------------------------------------------------------

struct AttackArgs {
    std::string keys_path;
    unsigned level = 0;
    std::string map_path;
    std::uint32_t grid_dim = 0;
    std::string i_max = "1e8";
    std::uint64_t hash_seed = 1;
    std::string distribution = "flat";
    std::string truth_path;
    std::string cap = "1e8";
    std::string out_path;
};

int cmd_attack(const AttackArgs& a, std::ostream& out) {
    const KeyFile file = load_key_file(a.keys_path);
    if (!file.level && a.level == 0) throw PreconditionError(a.keys_path + " carries no level; pass --level");
    if (file.level && a.level != 0 && *file.level != a.level) {
        throw PreconditionError(a.keys_path + " is level " + std::to_string(*file.level) + ", not " +
                                std::to_string(a.level));
    }
    const EncryptedSet keys = to_encrypted_set(file, a.level);
    const std::uint64_t cap = parse_count(a.cap, "--cap");

    ElementMap map;
    if (!a.map_path.empty()) {
        map = load_map_file(a.map_path);
    } else {
        // Same seed stream as demo-shapes, so its orange_keys.txt can be attacked directly.
        map = grid_map(make_position_hash(a.grid_dim, parse_count(a.i_max, "--i-max"), derive_seed(a.hash_seed, 0),
                                          parse_distribution(a.distribution)));
    }
    if (keys.level > 2) {
        require_attack_feasible(AttackDomain::from_map(map).value_count(), keys.level, cap);
    }

    std::unordered_set<std::string> truth;
    AttackOptions options;
    if (!a.truth_path.empty()) {
        const auto ids = read_tokens(a.truth_path);
        truth.insert(ids.begin(), ids.end());
        options.truth = &truth;
    }
    const AttackResult r = run_attack(keys, map, cap, options);

    // Domain order: map entries minus stopwords and empty sets.
    const AttackDomain domain = AttackDomain::from_map(map);
    out << "level " << keys.level << " attack on " << keys.keys.size() << " keys flags " << r.candidate_count
        << " of " << domain.size() << " identifiers\n";
    if (r.evaluated) {
        out << "true positives " << r.true_positive_count << ", false positives " << r.false_positive_count
            << ", missed " << r.missed_truth_count << '\n';
    }
    if (!a.out_path.empty()) {
        auto f = open_out(a.out_path);
        f << "identifier,flagged,truth\n";
        std::size_t next = 0;
        for (std::size_t i = 0; i < domain.size(); ++i) {
            const bool flagged = next < r.candidate_indices.size() && r.candidate_indices[next] == i;
            next += flagged ? 1 : 0;
            f << domain.labels[i] << ',' << (flagged ? 1 : 0) << ',';
            if (options.truth) f << (truth.count(domain.labels[i]) ? 1 : 0);
            f << '\n';
        }
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"n-sum encryption: fuzzy private set intersection over integer sum keys", "nsum"};
    app.require_subcommand(1);

    EncryptArgs ea;
    auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a message into a key file and a private index");
    encrypt_cmd->add_option("--map", ea.map_path, "Map file: token v1 v2 ...")->required()->check(CLI::ExistingFile);
    encrypt_cmd->add_option("--message", ea.message, "Message text, whitespace tokenized");
    encrypt_cmd->add_option("--ids", ea.ids, "Element identifiers");
    encrypt_cmd->add_option("--ids-file", ea.ids_file, "File of whitespace-separated identifiers")
        ->check(CLI::ExistingFile);
    encrypt_cmd->add_option("--level,-n", ea.level, "Sum level n")->check(CLI::Range(1u, 64u));
    encrypt_cmd->add_option("--out,-o", ea.out_path, "Key file to write")->required();
    encrypt_cmd->add_option("--index", ea.index_path, "Private index sidecar (default: <out>.idx)");
    encrypt_cmd->add_option("--format", ea.format)->check(CLI::IsMember({"text", "packed"}));
    encrypt_cmd->add_option("--key-width", ea.key_width, "Packed key width, 0 picks the smallest")
        ->check(CLI::IsMember({0u, 32u, 64u}));
    encrypt_cmd->add_option("--stopwords", ea.stopwords_path)->check(CLI::ExistingFile);
    encrypt_cmd->add_option("--workers", ea.workers)->check(CLI::Range(1u, 256u));

    CompareArgs ca;
    auto* compare_cmd = app.add_subcommand("compare", "Compare my encryption against another party's keys");
    compare_cmd->add_option("--my-keys", ca.my_keys)->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--my-index", ca.my_index)->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--their-keys", ca.their_keys)->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--threshold", ca.threshold)->check(CLI::Range(0.0, 1.0));
    compare_cmd->add_option("--format", ca.format)->check(CLI::IsMember({"human", "csv", "jsonl"}));

    ConvertArgs va;
    auto* convert_cmd = app.add_subcommand("convert", "Convert a key file between text and packed form");
    convert_cmd->add_option("--in", va.in_path)->required()->check(CLI::ExistingFile);
    convert_cmd->add_option("--out", va.out_path)->required();
    convert_cmd->add_option("--format", va.format)->check(CLI::IsMember({"text", "packed"}));
    convert_cmd->add_option("--level", va.level, "Level for text input")->check(CLI::Range(1u, 255u));
    convert_cmd->add_option("--key-width", va.key_width)->check(CLI::IsMember({0u, 32u, 64u}));

    DemoArgs da;
    auto* demo_cmd = app.add_subcommand("demo-shapes", "Shape-overlap demo on a grid world");
    demo_cmd->add_option("--colonies", da.colonies)->check(CLI::Range(std::size_t{1}, std::size_t{10'000}));
    demo_cmd->add_option("--world-dim", da.world_dim)->check(CLI::Range(2u, 4096u));
    demo_cmd->add_option("--min-dim", da.min_dim)->check(CLI::Range(1u, 4096u));
    demo_cmd->add_option("--max-dim", da.max_dim)->check(CLI::Range(1u, 4096u));
    demo_cmd->add_option("--i-max", da.i_max);
    demo_cmd->add_option("--seed", da.seed);
    demo_cmd->add_option("--out-dir", da.out_dir);
    demo_cmd->add_option("--level", da.level)->check(CLI::Range(1u, 2u));
    demo_cmd->add_option("--filter", da.filter)->check(CLI::IsMember({"strict", "relaxed"}));
    demo_cmd->add_option("--distribution", da.distribution)->check(CLI::IsMember({"flat", "edge"}));

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "Key-count/timing sweep or confidence experiment, as CSV");
    bench_cmd->add_option("--mode", ba.mode)->check(CLI::IsMember({"size", "confidence"}));
    bench_cmd->add_option("--map", ba.map_path, "Map file (default: synthetic)")->check(CLI::ExistingFile);
    bench_cmd->add_option("--synthetic-words", ba.synthetic_words);
    bench_cmd->add_option("--omega-min", ba.omega_min);
    bench_cmd->add_option("--omega-max", ba.omega_max);
    bench_cmd->add_option("--i-max", ba.i_max);
    bench_cmd->add_option("--levels", ba.levels)->delimiter(',');
    bench_cmd->add_option("--words", ba.word_counts)->delimiter(',');
    bench_cmd->add_option("--trials", ba.trials);
    bench_cmd->add_option("--workers", ba.workers)->check(CLI::Range(1u, 256u));
    bench_cmd->add_option("--pairs", ba.pairs);
    bench_cmd->add_option("--pair-words", ba.pair_words);
    bench_cmd->add_option("--level", ba.level);
    bench_cmd->add_option("--max-shared", ba.max_shared);
    bench_cmd->add_option("--threshold", ba.threshold)->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--seed", ba.seed);
    bench_cmd->add_option("--out,-o", ba.out_path, "CSV file (default: stdout)");

    AttackArgs aa;
    auto* attack_cmd = app.add_subcommand("attack", "Brute-force attack on a key file");
    attack_cmd->add_option("--keys", aa.keys_path)->required()->check(CLI::ExistingFile);
    attack_cmd->add_option("--level", aa.level, "Level for text key files");
    auto* map_opt = attack_cmd->add_option("--map", aa.map_path)->check(CLI::ExistingFile);
    auto* grid_opt = attack_cmd->add_option("--grid-dim", aa.grid_dim, "Attack a grid hash instead of a map")
                         ->check(CLI::Range(1u, 4096u));
    map_opt->excludes(grid_opt);
    attack_cmd->add_option("--i-max", aa.i_max);
    attack_cmd->add_option("--hash-seed", aa.hash_seed);
    attack_cmd->add_option("--distribution", aa.distribution)->check(CLI::IsMember({"flat", "edge"}));
    attack_cmd->add_option("--truth", aa.truth_path, "File of true identifiers")->check(CLI::ExistingFile);
    attack_cmd->add_option("--cap", aa.cap, "Sum-table row cap");
    attack_cmd->add_option("--out,-o", aa.out_path, "CSV of identifier,flagged,truth");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (attack_cmd->parsed() && aa.map_path.empty() && aa.grid_dim == 0) {
            throw CLI::RequiredError("attack needs --map or --grid-dim");
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (encrypt_cmd->parsed()) return cmd_encrypt(ea, out, err);
        if (compare_cmd->parsed()) return cmd_compare(ca, out);
        if (convert_cmd->parsed()) return cmd_convert(va, out);
        if (demo_cmd->parsed()) return cmd_demo_shapes(da, out);
        if (bench_cmd->parsed()) return cmd_bench(ba, out, err);
        if (attack_cmd->parsed()) return cmd_attack(aa, out);
    } catch (const ResourceLimitError& e) {
        err << "refused: " << e.what() << '\n';
        return kResourceLimit;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

}  // namespace nsum::cli
