#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "nsum/error.hpp"
#include "nsum/omega_map.hpp"
#include "oracles.hpp"
#include "worked_example.hpp"

using namespace nsum;

namespace {

ElementMap parse(const std::string& text, MapLoadOptions options = {}) {
    std::istringstream in(text);
    return read_map(in, options);
}

bool well_formed(const ElementMap& map) {
    for (const auto& [id, omega] : map.entries()) {
        const auto v = omega.values();
        if (!std::is_sorted(v.begin(), v.end())) return false;
        if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
        if (!omega.empty() && omega.max() > map.i_max()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("OmegaSet sorts and deduplicates") {
    const OmegaSet s{5, 1, 5, 3};
    CHECK(std::vector<Value>(s.begin(), s.end()) == std::vector<Value>{1, 3, 5});
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(4));
}

TEST_CASE("load_map_file parses the worked-example records") {
    const ElementMap map = worked::map();
    CHECK(map.size() == 4);
    CHECK(map.lookup("laser") == OmegaSet{3643253, 3851341, 3924532});
    CHECK(map.lookup("reheat") == OmegaSet{371264, 544280});
    CHECK(map.i_max() == 7929519);
}

TEST_CASE("lookup returns empty for unknown ids and stopwords") {
    MapLoadOptions options;
    options.stopwords = {"x", "the"};
    const ElementMap map = parse("x 5\nthe 7 8\nword 9\n", options);
    CHECK(map.lookup("x").empty());
    CHECK(map.lookup("the").empty());
    CHECK(map.lookup("zzz-unknown").empty());
    CHECK(map.lookup("word") == OmegaSet{9});
}

TEST_CASE("duplicate tokens keep the last record and warn") {
    std::vector<std::string> warnings;
    MapLoadOptions options;
    options.warn = [&](const std::string& w) { warnings.push_back(w); };
    const ElementMap map = parse("a 1 2\na 3\n", options);
    CHECK(map.lookup("a") == OmegaSet{3});
    CHECK(map.size() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("line 2") != std::string::npos);
}

TEST_CASE("map parse errors carry the line number") {
    SUBCASE("non-integer value") {
        try {
            parse("good 1 2\nbad 3 x4\n");
            FAIL("expected a parse error");
        } catch (const FormatError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("negative value") { CHECK_THROWS_AS(parse("bad -3\n"), FormatError); }
    SUBCASE("token without values") { CHECK_THROWS_AS(parse("lonely\n"), FormatError); }
    SUBCASE("empty file") { CHECK_THROWS_AS(parse(""), FormatError); }
    SUBCASE("blank lines only") { CHECK_THROWS_AS(parse("\n  \n"), FormatError); }
    SUBCASE("value above an explicit i_max") {
        MapLoadOptions options;
        options.i_max = 10;
        CHECK_THROWS_AS(parse("a 11\n", options), FormatError);
    }
}

TEST_CASE("explicit i_max overrides the observed maximum") {
    MapLoadOptions options;
    options.i_max = 100;
    CHECK(parse("a 1 2\n", options).i_max() == 100);
    CHECK(parse("a 1 2\n").i_max() == 2);
}

TEST_CASE("load_map_file reads from disk and rejects missing files") {
    const auto path = std::filesystem::temp_directory_path() / "nsum_map_test.txt";
    {
        std::ofstream out(path);
        out << worked::kMapText;
    }
    CHECK(load_map_file(path).lookup("espresso") == OmegaSet{7920052, 7920222, 7929519});
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_map_file(path), FormatError);
}

TEST_CASE("write_map round-trips through read_map") {
    const ElementMap map = worked::map();
    std::ostringstream out;
    write_map(out, map);
    const ElementMap again = parse(out.str());
    CHECK(again.entries() == map.entries());
}

TEST_CASE("element ids may not contain whitespace") {
    ElementMap map(10);
    CHECK_THROWS_AS(map.set("two words", OmegaSet{1}), PreconditionError);
    CHECK_THROWS_AS(map.set("", OmegaSet{1}), PreconditionError);
    CHECK_THROWS_AS(map.set("big", OmegaSet{11}), PreconditionError);
}

TEST_CASE("tokenize_message splits like a shell") {
    CHECK(tokenize_message("Laser reheat  cappuccino") == std::vector<std::string>{"Laser", "reheat", "cappuccino"});
    CHECK(tokenize_message("say 'hello world' \"a b\"") == std::vector<std::string>{"say", "hello world", "a b"});
    CHECK(tokenize_message("a\\ b c") == std::vector<std::string>{"a b", "c"});
    CHECK(tokenize_message("   ").empty());
    CHECK(tokenize_message("U.S. read.") == std::vector<std::string>{"U.S.", "read."});
    CHECK_THROWS_AS(tokenize_message("'open"), FormatError);
}

TEST_CASE("make_position_hash at the toy-grid scale") {
    const PositionHash hash = make_position_hash(50, 100'000'000, 7);
    CHECK(hash.cell_count() == 2500);
    std::set<Value> image(hash.forward().begin(), hash.forward().end());
    CHECK(image.size() == 2500);
    CHECK(*image.begin() >= 1);
    CHECK(*image.rbegin() <= 100'000'000);
    for (std::uint64_t g = 1; g <= 2500; ++g) CHECK(hash.grid_index(hash.hash(g)) == g);
}

TEST_CASE("make_position_hash edge cases") {
    SUBCASE("singleton grid") {
        const PositionHash hash = make_position_hash(1, 1000, 3);
        const Value h = hash.hash(1);
        CHECK(hash.grid_index(h) == 1u);
    }
    SUBCASE("deterministic per seed") {
        const auto a = make_position_hash(20, 1'000'000, 42);
        const auto b = make_position_hash(20, 1'000'000, 42);
        const auto c = make_position_hash(20, 1'000'000, 43);
        CHECK(std::equal(a.forward().begin(), a.forward().end(), b.forward().begin()));
        CHECK_FALSE(std::equal(a.forward().begin(), a.forward().end(), c.forward().begin()));
    }
    SUBCASE("too many cells for the range") { CHECK_THROWS_AS(make_position_hash(10, 99, 1), PreconditionError); }
    SUBCASE("exactly full range is a permutation") {
        const auto hash = make_position_hash(10, 100, 5);
        std::set<Value> image(hash.forward().begin(), hash.forward().end());
        CHECK(image.size() == 100);
        CHECK(*image.rbegin() == 100);
    }
    SUBCASE("unknown hash has no cell") {
        const auto hash = make_position_hash(2, 1'000'000'000, 1);
        Value absent = 1;
        while (hash.grid_index(absent)) ++absent;
        CHECK_FALSE(hash.grid_index(absent).has_value());
        CHECK_THROWS_AS(hash.hash(0), PreconditionError);
        CHECK_THROWS_AS(hash.hash(5), PreconditionError);
    }
}

TEST_CASE("edge-weighted hash concentrates values near both ends") {
    const Value i_max = 100'000'000;
    const auto hash = make_position_hash(50, i_max, 11, HashDistribution::edge_weighted);
    std::set<Value> image(hash.forward().begin(), hash.forward().end());
    CHECK(image.size() == 2500);
    std::size_t outer = 0;
    for (Value v : image) outer += (v < i_max / 10 || v > i_max - i_max / 10) ? 1 : 0;
    // CDF at 0.1 * I is (sqrt(.1) + 1 - sqrt(.9)) / 2 ~ 0.184 per side; flat would give 0.2 in total.
    const double share = static_cast<double>(outer) / 2500.0;
    CHECK(share == doctest::Approx(0.368).epsilon(0.12));
}

TEST_CASE("colony_omega maps covered cells through the hash") {
    const PositionHash hash = make_position_hash(50, 100'000'000, 9);
    SUBCASE("3x3 colony has nine values") {
        const std::vector<Rect> colonies{{10, 10, 3, 3}};
        CHECK(colony_omega(colonies, hash).lookup("1").size() == 9);
    }
    SUBCASE("3x3 colonies at (10,10) and (12,12) share one value") {
        const std::vector<Rect> a{{10, 10, 3, 3}};
        const std::vector<Rect> b{{12, 12, 3, 3}};
        const OmegaSet oa = colony_omega(a, hash).lookup("1");
        const OmegaSet ob = colony_omega(b, hash).lookup("1");
        std::size_t shared = 0;
        for (Value v : oa) shared += ob.contains(v) ? 1 : 0;
        CHECK(shared == 1);
        CHECK(ob.contains(hash.hash(grid_index_of(12, 12, 50))));
    }
    SUBCASE("unit colony") {
        const std::vector<Rect> colonies{{1, 1, 1, 1}, {5, 5, 2, 1}};
        const ElementMap map = colony_omega(colonies, hash);
        CHECK(map.lookup("1").size() == 1);
        CHECK(map.lookup("2").size() == 2);
    }
    SUBCASE("colony outside the grid") {
        const std::vector<Rect> colonies{{45, 45, 6, 3}};
        CHECK_THROWS_AS(colony_omega(colonies, hash), PreconditionError);
        const std::vector<Rect> at_zero{{0, 3, 2, 2}};
        CHECK_THROWS_AS(colony_omega(at_zero, hash), PreconditionError);
    }
}

TEST_CASE("colony overlap matches a cell-enumeration oracle") {
    const std::uint32_t dim = 30;
    const PositionHash hash = make_position_hash(dim, 10'000'000, 21);
    std::mt19937_64 rng(77);
    auto draw = [&] {
        std::uniform_int_distribution<std::uint32_t> side(1, 8);
        Rect r;
        r.width = side(rng);
        r.height = side(rng);
        r.x = std::uniform_int_distribution<std::uint32_t>(1, dim - r.width)(rng);
        r.y = std::uniform_int_distribution<std::uint32_t>(1, dim - r.height)(rng);
        return r;
    };
    for (int trial = 0; trial < 300; ++trial) {
        const std::vector<Rect> pair{draw(), draw()};
        const ElementMap map = colony_omega(pair, hash);
        const OmegaSet& a = map.lookup("1");
        const OmegaSet& b = map.lookup("2");
        std::size_t shared = 0;
        for (Value v : a) shared += b.contains(v) ? 1 : 0;
        const auto ca = oracle::cells(pair[0]);
        const auto cb = oracle::cells(pair[1]);
        std::size_t geometric = 0;
        for (const auto& c : ca) geometric += cb.count(c);
        REQUIRE(shared == geometric);
        CHECK(a.size() == pair[0].area());
    }
}

TEST_CASE("sample_synthetic_map") {
    SUBCASE("empty") { CHECK(sample_synthetic_map({0, 1, 5, 1000}, 1).empty()); }
    SUBCASE("fixed size range") {
        const ElementMap map = sample_synthetic_map({10, 30, 30, 1'000'000}, 2);
        CHECK(map.size() == 10);
        for (const auto& [id, omega] : map.entries()) {
            CHECK(omega.size() <= 30);
            CHECK(omega.size() >= 25);
        }
        CHECK(well_formed(map));
    }
    SUBCASE("WordNet-like ceiling") {
        const ElementMap map = sample_synthetic_map({200, 1, 8, 16'000'000}, 3);
        CHECK(map.i_max() == 16'000'000);
        CHECK(well_formed(map));
    }
    SUBCASE("deterministic") {
        CHECK(sample_synthetic_map({50, 1, 4, 1000}, 9).entries() ==
              sample_synthetic_map({50, 1, 4, 1000}, 9).entries());
    }
    SUBCASE("bad size range") { CHECK_THROWS_AS(sample_synthetic_map({5, 3, 2, 100}, 1), PreconditionError); }
}

TEST_CASE("every constructor yields a well-formed map") {
    CHECK(well_formed(worked::map()));
    const auto hash = make_position_hash(20, 5000, 4);
    const std::vector<Rect> colonies{{1, 1, 5, 5}, {8, 8, 10, 3}};
    CHECK(well_formed(colony_omega(colonies, hash)));
    for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(well_formed(sample_synthetic_map({30, 1, 9, 50}, seed)));
}
