#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "triclust/gen.hpp"
#include "triclust/io.hpp"

using namespace triclust;

TEST_CASE("parse and print round-trip") {
    std::string text = "3 2 1 in\n01?\n110\n";
    std::istringstream in(text);
    auto parsed = parse_instance(in);
    REQUIRE_FALSE(parsed.qary);
    CHECK(parsed.boolean.d == 3);
    CHECK(parsed.boolean.k == 2);
    CHECK(parsed.boolean.r == 1);
    CHECK(parsed.boolean.variant == Variant::In);
    CHECK(print_instance(parsed.boolean) == text);

    std::mt19937_64 rng(131);
    for (int trial = 0; trial < 80; ++trial) {
        Instance inst = oracles::random_suite_instance(rng, static_cast<Variant>(rng() % 3));
        std::istringstream round(print_instance(inst));
        auto back = parse_instance(round);
        CHECK(back.boolean.rows.size() == inst.rows.size());
        for (std::size_t i = 0; i < inst.rows.size(); ++i)
            CHECK(back.boolean.rows[i] == inst.rows[i]);
    }
}

TEST_CASE("parse dedupes by default, keeps multiplicity on request") {
    std::string text = "2 1 0 diam\n00\n00\n01\n";
    std::istringstream a(text);
    CHECK(parse_instance(a).boolean.rows.size() == 2);
    std::istringstream b(text);
    CHECK(parse_instance(b, false).boolean.rows.size() == 3);
}

TEST_CASE("parse errors carry line and column") {
    std::istringstream bad1("3 1 0 in\n0x1\n");
    try {
        parse_instance(bad1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 2);
    }

    std::istringstream bad2("0 1 0 in\n");
    CHECK_THROWS_AS(parse_instance(bad2), ParseError);
    std::istringstream bad3("2 1 0 nope\n00\n");
    CHECK_THROWS_AS(parse_instance(bad3), ParseError);
    std::istringstream bad4("2 1 0 in\n");
    CHECK_THROWS_AS(parse_instance(bad4), ParseError);  // empty M rejected
    std::istringstream bad5("2 1 0 in\n0\n");
    CHECK_THROWS_AS(parse_instance(bad5), ParseError);  // wrong width
}

TEST_CASE("q-ary instance files") {
    std::string text = "2 1 1 any 3 manhattan\n0 2\n? 1\n";
    std::istringstream in(text);
    auto parsed = parse_instance(in);
    REQUIRE(parsed.qary);
    CHECK(parsed.qmatrix.q == 3);
    CHECK(parsed.metric == Metric::Manhattan);
    CHECK(parsed.qmatrix.rows[1].entries == std::vector<int>{kQMissing, 1});
    CHECK(print_qinstance(parsed.qmatrix, parsed.k, parsed.r, parsed.variant, parsed.metric) ==
          text);

    std::istringstream bad("2 1 1 any 3 manhattan\n0 3\n");
    CHECK_THROWS_AS(parse_instance(bad), ParseError);
}

TEST_CASE("witness JSON round-trips through verify") {
    Instance inst{3, 2, 1, Variant::Any,
                  {TriVector::from_string("0?0"), TriVector::from_string("111")}};
    ClusteringSolution sol;
    sol.completion = {TriVector::from_string("010"), TriVector::from_string("111")};
    sol.clusters = {{0}, {1}};
    sol.any_centers = {TriVector::from_string("010"), TriVector::from_string("111")};
    REQUIRE(verify_solution(inst, sol).ok);
    auto j = witness_json(inst, sol);
    auto back = witness_from_json(inst, j);
    CHECK(verify_solution(inst, back).ok);
    CHECK(back.completion[0] == sol.completion[0]);

    // 1-indexing in the document
    CHECK(j["clusters"][0][0] == 1);
}
