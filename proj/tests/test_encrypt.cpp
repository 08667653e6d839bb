#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "nsum/encrypt.hpp"
#include "nsum/error.hpp"
#include "oracles.hpp"
#include "worked_example.hpp"

using namespace nsum;

namespace {

PrivateSet make_set(const oracle::Omegas& omegas) {
    PrivateSet set;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        set.add("e" + std::to_string(i), OmegaSet::from_values(omegas[i]));
    }
    return set;
}

oracle::Omegas random_omegas(std::mt19937_64& rng, std::size_t n, std::size_t max_size, Value max_value) {
    std::uniform_int_distribution<std::size_t> size(1, max_size);
    std::uniform_int_distribution<Value> value(0, max_value);
    oracle::Omegas out(n);
    for (auto& omega : out) {
        std::set<Value> s;
        const std::size_t want = size(rng);
        while (s.size() < want) s.insert(value(rng));
        omega.assign(s.begin(), s.end());
    }
    return out;
}

std::vector<Key> keys_of(const std::set<Key>& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("resolve keeps first occurrences and drops unknown ids") {
    const ElementMap map = worked::map();
    SUBCASE("message 1") {
        const auto r = resolve(map, worked::kMessage1);
        REQUIRE(r.set.size() == 3);
        CHECK(r.set.resolved()[0].size() == 3);
        CHECK(r.set.resolved()[1].size() == 2);
        CHECK(r.set.resolved()[2].size() == 2);
        CHECK(r.dropped.empty());
    }
    SUBCASE("duplicates") {
        const std::vector<ElementId> ids{"laser", "laser"};
        CHECK(resolve(map, ids).set.size() == 1);
    }
    SUBCASE("out of vocabulary") {
        const std::vector<ElementId> ids{"zzz-unknown"};
        const auto r = resolve(map, ids);
        CHECK(r.set.empty());
        CHECK(r.dropped == std::vector<ElementId>{"zzz-unknown"});
    }
}

TEST_CASE("PrivateSet rejects duplicates and empty Omega sets") {
    PrivateSet set;
    set.add("a", OmegaSet{1});
    CHECK_THROWS_AS(set.add("a", OmegaSet{2}), PreconditionError);
    CHECK_THROWS_AS(set.add("b", OmegaSet{}), PreconditionError);
}

TEST_CASE("encrypt reproduces the worked example at level 2") {
    const ElementMap map = worked::map();
    const auto one = encrypt(resolve(map, worked::kMessage1).set, 2);
    const auto two = encrypt(resolve(map, worked::kMessage2).set, 2);
    CHECK(one.encrypted.keys == worked::kS2);
    CHECK(two.encrypted.keys == worked::kS2Prime);
    CHECK(one.encrypted.level == 2);
    CHECK(one.encrypted.source_element_count == 3);
}

TEST_CASE("encrypt small hand-checked instances") {
    SUBCASE("level 1 is the union") {
        const auto e = encrypt(make_set({{1, 2}, {2, 3}}), 1);
        CHECK(e.encrypted.keys == std::vector<Key>{1, 2, 3});
        // Value 2 came from both elements.
        CHECK(e.index.posting(2).size() == 2);
    }
    SUBCASE("level 3 over four singletons") {
        const auto e = encrypt(make_set({{1}, {10}, {100}, {1000}}), 3);
        CHECK(e.encrypted.keys == std::vector<Key>{111, 1011, 1101, 1110});
    }
    SUBCASE("level equal to N uses the single n-subset") {
        const auto e = encrypt(make_set({{1, 2}, {10, 20}}), 2);
        CHECK(e.encrypted.keys == std::vector<Key>{11, 12, 21, 22});
    }
}

TEST_CASE("encrypt precondition errors name N and n") {
    const PrivateSet set = make_set({{1}, {2}});
    try {
        encrypt(set, 3);
        FAIL("expected an error");
    } catch (const PreconditionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("N=2") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos);
    }
    CHECK_THROWS_AS(encrypt(set, 0), PreconditionError);
    CHECK_THROWS_AS(encrypt(PrivateSet{}, 1), PreconditionError);
}

TEST_CASE("encrypt rejects sums that would overflow 64 bits") {
    const Value big = std::numeric_limits<Value>::max() / 2 + 1;
    CHECK_THROWS_AS(encrypt(make_set({{big}, {big}}), 2), PreconditionError);
    CHECK_NOTHROW(encrypt(make_set({{big}, {1}}), 2));
}

TEST_CASE("inverted index postings hold n values per producing tuple") {
    // 1 + 4 = 2 + 3 collide on key 5.
    const auto e = encrypt(make_set({{1, 2}, {3, 4}}), 2);
    CHECK(e.encrypted.keys == std::vector<Key>{4, 5, 6});
    const auto p = e.index.posting(5);
    CHECK(std::vector<Value>(p.begin(), p.end()) == std::vector<Value>{1, 4, 2, 3});
    CHECK(e.index.posting(4).size() == 2);
    CHECK_THROWS_AS(e.index.posting(7), FormatError);
}

TEST_CASE("key_count_bound") {
    const std::vector<std::uint64_t> worked_sizes{3, 2, 2};
    CHECK(key_count_bound(worked_sizes, 2) == 16);
    const std::vector<std::uint64_t> single{7};
    CHECK(key_count_bound(single, 1) == 7);
    const std::vector<std::uint64_t> four{3, 2, 2, 3};
    CHECK(key_count_bound(four, 2) == 37);
    const std::vector<std::uint64_t> message2{3, 2, 3};
    CHECK(key_count_bound(message2, 2) == 21);
    CHECK(key_count_bound(four, 5) == 0);
    const std::vector<std::uint64_t> huge(100, 1ULL << 40);
    CHECK(key_count_bound(huge, 3) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("binomial") {
    CHECK(binomial(4, 3) == 4);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(52, 5) == 2598960);
    CHECK(binomial(1000, 500) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("encrypt_parallel is identical to encrypt") {
    const ElementMap map = worked::map();
    const PrivateSet one = resolve(map, worked::kMessage1).set;
    const auto seq = encrypt(one, 2);
    const auto par = encrypt_parallel(one, 2, 4);
    CHECK(par.encrypted == seq.encrypted);
    CHECK(par.index == seq.index);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        // Small value range forces collisions across worker slices.
        const PrivateSet set = make_set(random_omegas(rng, 10, 5, 200));
        const auto base = encrypt(set, 3);
        for (unsigned workers : {1u, 2u, 7u, 8u, 500u}) {
            const auto other = encrypt_parallel(set, 3, workers);
            REQUIRE(other.encrypted == base.encrypted);
            REQUIRE(other.index == base.index);
        }
    }
    CHECK_THROWS_AS(encrypt_parallel(one, 2, 0), PreconditionError);
}

TEST_CASE("encrypt agrees with the exhaustive enumerator") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n_elements = 1 + trial % 6;
        const unsigned level = 1 + static_cast<unsigned>(trial % 3);
        if (n_elements < level) continue;
        const Value max_value = trial % 2 == 0 ? 30 : 1'000'000'000;
        const auto omegas = random_omegas(rng, n_elements, 4, max_value);
        const auto e = encrypt(make_set(omegas), level);
        REQUIRE(e.encrypted.keys == keys_of(oracle::sum_keys(omegas, level)));

        std::vector<std::uint64_t> sizes;
        for (const auto& o : omegas) sizes.push_back(o.size());
        const auto bound = key_count_bound(sizes, level);
        CHECK(e.encrypted.keys.size() <= bound);
        CHECK((e.encrypted.keys.size() == bound) == oracle::collision_free(omegas, level));
    }
}

TEST_CASE("encryption invariants") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const unsigned level = 1 + static_cast<unsigned>(trial % 3);
        auto omegas = random_omegas(rng, 6, 4, 500);
        const PrivateSet set = make_set(omegas);
        const auto e = encrypt(set, level);

        // Idempotent.
        CHECK(encrypt(set, level).encrypted == e.encrypted);

        // Strictly ascending and within n * i_max.
        const auto& keys = e.encrypted.keys;
        CHECK(std::adjacent_find(keys.begin(), keys.end(), std::greater_equal<>()) == keys.end());
        CHECK(keys.back() <= level * 500);

        // Element order does not matter.
        std::shuffle(omegas.begin(), omegas.end(), rng);
        CHECK(encrypt(make_set(omegas), level).encrypted.keys == keys);

        // Postings: index keys mirror the encrypted keys, each posting
        // splits into n-tuples of source values summing to its key.
        REQUIRE(std::equal(e.index.keys().begin(), e.index.keys().end(), keys.begin(), keys.end()));
        std::set<Value> source;
        for (const auto& o : set.resolved()) source.insert(o.begin(), o.end());
        for (std::size_t i = 0; i < e.index.size(); ++i) {
            const auto posting = e.index.posting_at(i);
            REQUIRE(posting.size() % level == 0);
            for (std::size_t t = 0; t < posting.size(); t += level) {
                Key sum = 0;
                for (unsigned p = 0; p < level; ++p) {
                    CHECK(source.count(posting[t + p]) == 1);
                    sum += posting[t + p];
                }
                CHECK(sum == keys[i]);
            }
        }
    }
}
