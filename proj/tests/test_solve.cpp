#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "triclust/gen.hpp"
#include "triclust/solve.hpp"

using namespace triclust;

namespace {
TriVector tv(const std::string& s) { return TriVector::from_string(s); }
}

TEST_CASE("solve_in_complete basics") {
    std::vector<TriVector> one{tv("0000")};
    CHECK(solve_in_complete(one, 1, 0).answer == Answer::Yes);

    std::vector<TriVector> far{tv("0000"), tv("1111")};
    CHECK(solve_in_complete(far, 1, 3).answer == Answer::No);

    // dominating set of size 2 on the 4-cycle via the incidence reduction
    Graph c4 = Graph::cycle(4);
    auto rows = incidence_reduction(c4, std::vector<int>(4, 0));
    // 2-regular: adjacent distance 2, nonadjacent 4
    CHECK(solve_in_complete(rows, 2, 2).answer ==
          (oracles::has_dominating_set(c4, 2) ? Answer::Yes : Answer::No));
}

TEST_CASE("solve_diam_complete basics") {
    std::vector<TriVector> close{tv("000"), tv("001"), tv("011")};
    CHECK(solve_diam_complete(close, 1, 2).answer == Answer::Yes);

    std::vector<TriVector> pair{tv("00"), tv("11")};
    CHECK(solve_diam_complete(pair, 1, 1).answer == Answer::No);

    // two disjoint triangles partition into 2 triangles; incidence reduction
    // with pads 0 on a 2-regular graph: adjacent 2, nonadjacent 4
    Graph two_triangles;
    two_triangles.n = 6;
    two_triangles.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    REQUIRE(oracles::has_triangle_partition(two_triangles));
    auto rows = incidence_reduction(two_triangles, std::vector<int>(6, 0));
    CHECK(solve_diam_complete(rows, 2, 2).answer == Answer::Yes);
    CHECK(solve_diam_complete(rows, 1, 2).answer == Answer::No);
}

TEST_CASE("solve_any_complete basics") {
    std::vector<TriVector> pair{tv("000"), tv("011")};
    auto d = solve_any_complete(pair, 1, 1);
    REQUIRE(d.answer == Answer::Yes);
    CHECK(verify_solution({3, 1, 1, Variant::Any, pair}, *d.witness).ok);

    // 0^d vs 1^d with d = 2r+1: a middle vector exists
    for (int r = 1; r <= 3; ++r) {
        int d2 = 2 * r + 1;
        std::vector<TriVector> rows{TriVector::all_zero(d2), tv(std::string(d2, '1'))};
        CHECK(solve_any_complete(rows, 1, r).answer == Answer::Yes);
        CHECK(solve_any_complete(rows, 1, r - 1).answer == Answer::No);
    }

    std::vector<TriVector> rows{tv("01"), tv("10"), tv("11")};
    CHECK(solve_any_complete(rows, 5, 0).answer == Answer::Yes);  // k >= |M|
}

TEST_CASE("completion enumeration order and budget") {
    std::vector<TriVector> m{tv("??")};
    CompletionEnumerator en(m, {});
    std::vector<std::string> seen;
    while (auto c = en.next()) seen.push_back((*c)[0].to_string());
    CHECK(seen == std::vector<std::string>{"00", "01", "10", "11"});

    std::vector<TriVector> none{tv("01")};
    CompletionEnumerator en2(none, {});
    auto only = en2.next();
    REQUIRE(only.has_value());
    CHECK((*only)[0].to_string() == "01");
    CHECK_FALSE(en2.next().has_value());

    std::vector<TriVector> big{TriVector::all_missing(8)};
    SolverBudget tiny;
    tiny.max_completions = 4;
    CompletionEnumerator en3(big, tiny);
    CHECK(en3.budget_exhausted());
    CHECK(solve_completion({8, 1, 0, Variant::In, big}, tiny).answer == Answer::BudgetExhausted);
}

TEST_CASE("solve_completion on the reduction instances") {
    auto cs = closest_string_instance({"00", "11"}, 1);
    CHECK(solve_completion(cs).answer == Answer::Yes);
    auto cs2 = closest_string_instance({"000", "111"}, 1);
    CHECK(solve_completion(cs2).answer == Answer::No);

    for (Variant v : {Variant::In, Variant::Any, Variant::Diam}) {
        CHECK(solve_completion(coloring_completion_instance(Graph::complete(3), v)).answer ==
              Answer::Yes);
        CHECK(solve_completion(coloring_completion_instance(Graph::complete(4), v)).answer ==
              Answer::No);
    }
}

TEST_CASE("solvers agree with naive partition enumeration") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 250; ++trial) {
        int d = 1 + static_cast<int>(rng() % 7);
        int n = 1 + static_cast<int>(rng() % 8);
        int k = 1 + static_cast<int>(rng() % 3);
        int r = static_cast<int>(rng() % 4);
        std::vector<TriVector> raw;
        for (int i = 0; i < n; ++i) {
            TriVector v = TriVector::all_zero(d);
            for (int j = 0; j < d; ++j)
                if (rng() & 1) v.set(j, Tri::One);
            raw.push_back(v);
        }
        auto rows = gather(raw, dedupe_rows(raw).kept);
        Variant variant = static_cast<Variant>(rng() % 3);
        bool expect = oracles::partition_solve_complete(rows, variant, k, r);
        Decision got = solve_variant_complete(rows, variant, k, r);
        INFO("variant " << variant_name(variant) << " k=" << k << " r=" << r);
        CHECK((got.answer == Answer::Yes) == expect);
        if (got.answer == Answer::Yes) {
            Instance inst{d, k, r, variant, rows};
            CHECK(verify_solution(inst, *got.witness).ok);
        }
    }
}

TEST_CASE("XP solver coverage-check counter stays within the subset bound") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 60; ++trial) {
        int d = 2 + static_cast<int>(rng() % 6);
        int n = 1 + static_cast<int>(rng() % 8);
        int k = 1 + static_cast<int>(rng() % 3);
        std::vector<TriVector> raw;
        for (int i = 0; i < n; ++i) {
            TriVector v = TriVector::all_zero(d);
            for (int j = 0; j < d; ++j)
                if (rng() & 1) v.set(j, Tri::One);
            raw.push_back(v);
        }
        auto rows = gather(raw, dedupe_rows(raw).kept);
        n = static_cast<int>(rows.size());
        auto dec = solve_in_complete(rows, k, static_cast<int>(rng() % 4));
        int kk = std::min(k, n);
        std::uint64_t subsets = 1;
        for (int i = 0; i < kk; ++i) subsets = subsets * (n - i) / (i + 1);
        CHECK(dec.coverage_checks <= subsets * n);
    }
}

TEST_CASE("budget monotonicity: raising caps never flips YES/NO") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 80; ++trial) {
        Instance inst = oracles::random_suite_instance(rng, static_cast<Variant>(rng() % 3));
        SolverBudget small;
        small.max_completions = 1 + rng() % 8;
        small.max_center_tuples = 1 + rng() % 50;
        SolverBudget big;
        Decision a = solve_completion(inst, small);
        Decision b = solve_completion(inst, big);
        if (a.answer != Answer::BudgetExhausted) CHECK(a.answer == b.answer);
        CHECK(b.answer != Answer::BudgetExhausted);
    }
}
