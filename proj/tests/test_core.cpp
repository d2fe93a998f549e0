#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "triclust/core.hpp"

using namespace triclust;

namespace {

TriVector tv(const std::string& s) { return TriVector::from_string(s); }

// test-side random tri-state vector
TriVector random_tv(std::mt19937_64& rng, int d, int missing_pct = 20) {
    TriVector v(d);
    for (int i = 0; i < d; ++i) {
        int roll = static_cast<int>(rng() % 100);
        v.set(i, roll < missing_pct ? Tri::Missing : (rng() & 1 ? Tri::One : Tri::Zero));
    }
    return v;
}

TriVector random_completion(std::mt19937_64& rng, const TriVector& v) {
    TriVector out = v;
    for (int i = 0; i < v.dim(); ++i)
        if (out.get(i) == Tri::Missing) out.set(i, rng() & 1 ? Tri::One : Tri::Zero);
    return out;
}

// independent checker used to cross-validate verify_solution: plain loops
// over the decoded symbols, no shared code path with the library
bool naive_check(const Instance& inst, const ClusteringSolution& sol) {
    const int n = static_cast<int>(inst.rows.size());
    if (static_cast<int>(sol.completion.size()) != n) return false;
    auto dist = [](const std::string& a, const std::string& b) {
        int t = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != '?' && b[i] != '?' && a[i] != b[i]) ++t;
        return t;
    };
    std::vector<std::string> comp;
    for (int i = 0; i < n; ++i) {
        std::string c = sol.completion[i].to_string();
        std::string orig = inst.rows[i].to_string();
        if (c.find('?') != std::string::npos) return false;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (orig[j] != '?' && orig[j] != c[j]) return false;
        comp.push_back(c);
    }
    if (static_cast<int>(sol.clusters.size()) > inst.k) return false;
    std::vector<int> seen(n, 0);
    for (const auto& b : sol.clusters) {
        if (b.empty()) return false;
        for (int m : b) {
            if (m < 0 || m >= n) return false;
            ++seen[m];
        }
    }
    for (int i = 0; i < n; ++i)
        if (seen[i] != 1) return false;
    for (std::size_t c = 0; c < sol.clusters.size(); ++c) {
        const auto& b = sol.clusters[c];
        if (inst.variant == Variant::Diam) {
            for (std::size_t i = 0; i < b.size(); ++i)
                for (std::size_t j = i + 1; j < b.size(); ++j)
                    if (dist(comp[b[i]], comp[b[j]]) > inst.r) return false;
        } else if (inst.variant == Variant::In) {
            if (sol.in_centers.size() != sol.clusters.size()) return false;
            int ctr = sol.in_centers[c];
            bool inside = false;
            for (int m : b) inside |= m == ctr;
            if (!inside) return false;
            for (int m : b)
                if (dist(comp[ctr], comp[m]) > inst.r) return false;
        } else {
            if (sol.any_centers.size() != sol.clusters.size()) return false;
            std::string ctr = sol.any_centers[c].to_string();
            if (ctr.find('?') != std::string::npos) return false;
            for (int m : b)
                if (dist(ctr, comp[m]) > inst.r) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("hamming_delta on known pairs") {
    CHECK(hamming_delta(tv("010"), tv("010")) == 0);
    CHECK(hamming_delta(tv("01?"), tv("110")) == 1);
    CHECK(hamming_delta(tv("??"), tv("10")) == 0);
    CHECK_THROWS_AS(hamming_delta(tv("01"), tv("010")), std::invalid_argument);
}

TEST_CASE("delta_set matches the definition") {
    CHECK(delta_set(tv("00"), tv("00")).empty());
    CHECK(delta_set(tv("101"), tv("001")) == std::vector<int>{0});  // coordinate 1, 1-indexed
    CHECK(delta_set(tv("1?"), tv("00")) == std::vector<int>{0});
}

TEST_CASE("neighborhood exact and at-most") {
    std::vector<TriVector> m{tv("000"), tv("111")};
    CHECK(neighborhood(m, tv("000"), 0, NeighborhoodMode::AtMost) == std::vector<int>{0});
    std::vector<TriVector> m2{tv("000"), tv("100"), tv("110")};
    CHECK(neighborhood(m2, tv("000"), 1, NeighborhoodMode::Exact) == std::vector<int>{1});
    CHECK(neighborhood(m2, tv("000"), 2, NeighborhoodMode::AtMost) == std::vector<int>{0, 1, 2});
}

TEST_CASE("diameter") {
    std::vector<TriVector> m{tv("000"), tv("111"), tv("110"), tv("011")};
    CHECK(diameter(m, {0}) == 0);
    CHECK(diameter(m, {0, 1}) == 3);
    CHECK(diameter(m, {0, 2, 3}) == 2);
    CHECK_THROWS_AS(diameter(m, {}), std::domain_error);
}

TEST_CASE("compatibility graph per variant") {
    Instance inst{2, 1, 0, Variant::In, {tv("00"), tv("11")}};
    auto g = compatibility_graph(inst);
    CHECK(g.n_components == 2);
    CHECK(g.adj[0].empty());

    Instance path{2, 1, 1, Variant::Diam, {tv("00"), tv("01"), tv("11")}};
    auto gp = compatibility_graph(path);
    CHECK(gp.n_components == 1);
    CHECK(gp.adj[0] == std::vector<int>{1});

    Instance any{2, 1, 1, Variant::Any, {tv("00"), tv("11")}};
    auto ga = compatibility_graph(any);
    CHECK(ga.n_components == 1);  // delta = 2 <= 2r
}

TEST_CASE("important coordinates") {
    std::vector<TriVector> same{tv("0101"), tv("0101")};
    CHECK(important_coordinates(same).empty());
    std::vector<TriVector> two{tv("01"), tv("00")};
    CHECK(important_coordinates(two) == std::vector<int>{1});
    std::vector<TriVector> miss{tv("0?"), tv("1?")};
    CHECK(important_coordinates(miss) == std::vector<int>{0});
}

TEST_CASE("dedupe keeps first occurrences") {
    std::vector<TriVector> m{tv("00"), tv("00"), tv("01")};
    auto dd = dedupe_rows(m);
    CHECK(dd.kept == std::vector<int>{0, 2});
    CHECK(dd.duplicate_of == std::vector<std::pair<int, int>>{{1, 0}});

    std::vector<TriVector> distinct{tv("00"), tv("01"), tv("10")};
    CHECK(dedupe_rows(distinct).kept.size() == 3);

    std::vector<TriVector> tri{tv("?0"), tv("?0")};
    CHECK(dedupe_rows(tri).kept.size() == 1);
}

TEST_CASE("verify_solution examples") {
    Instance ok{2, 1, 0, Variant::In, {tv("00")}};
    ClusteringSolution sol;
    sol.completion = {tv("00")};
    sol.clusters = {{0}};
    sol.in_centers = {0};
    CHECK(verify_solution(ok, sol).ok);

    Instance diam{2, 1, 1, Variant::Diam, {tv("00"), tv("11")}};
    ClusteringSolution bad;
    bad.completion = {tv("00"), tv("11")};
    bad.clusters = {{0, 1}};
    CHECK_FALSE(verify_solution(diam, bad).ok);

    Instance flip{2, 1, 0, Variant::In, {tv("00")}};
    ClusteringSolution wrong;
    wrong.completion = {tv("01")};
    wrong.clusters = {{0}};
    wrong.in_centers = {0};
    auto res = verify_solution(flip, wrong);
    CHECK_FALSE(res.ok);
    CHECK(res.violation.find("disagrees") != std::string::npos);
}

TEST_CASE("distance properties on random tri-state pairs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        int d = 1 + static_cast<int>(rng() % 80);
        TriVector a = random_tv(rng, d), b = random_tv(rng, d);
        CHECK(hamming_delta(a, b) == hamming_delta(b, a));
        CHECK(static_cast<int>(delta_set(a, b).size()) == hamming_delta(a, b));
        TriVector ac = random_completion(rng, a), bc = random_completion(rng, b);
        CHECK(hamming_delta(a, b) <= hamming_delta(ac, bc));
    }
}

TEST_CASE("Any edges contain In edges") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int d = 4 + static_cast<int>(rng() % 8);
        int n = 2 + static_cast<int>(rng() % 6);
        std::vector<TriVector> rows;
        for (int i = 0; i < n; ++i) rows.push_back(random_tv(rng, d));
        int r = static_cast<int>(rng() % 4);
        auto gin = build_compatibility(rows, r);
        auto gany = build_compatibility(rows, 2 * r);
        for (int u = 0; u < n; ++u)
            for (int v : gin.adj[u])
                CHECK(std::find(gany.adj[u].begin(), gany.adj[u].end(), v) != gany.adj[u].end());
    }
}

TEST_CASE("verify_solution agrees with an independent naive checker") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 400; ++trial) {
        int d = 2 + static_cast<int>(rng() % 5);
        int n = 1 + static_cast<int>(rng() % 4);
        Instance inst;
        inst.d = d;
        inst.k = 1 + static_cast<int>(rng() % 3);
        inst.r = static_cast<int>(rng() % 3);
        inst.variant = static_cast<Variant>(rng() % 3);
        for (int i = 0; i < n; ++i) inst.rows.push_back(random_tv(rng, d));

        // random (frequently invalid) candidate solutions
        ClusteringSolution sol;
        for (int i = 0; i < n; ++i)
            sol.completion.push_back(rng() % 5 == 0 ? random_tv(rng, d, 0)
                                                    : random_completion(rng, inst.rows[i]));
        int blocks = 1 + static_cast<int>(rng() % inst.k);
        sol.clusters.assign(blocks, {});
        for (int i = 0; i < n; ++i) sol.clusters[rng() % blocks].push_back(i);
        sol.clusters.erase(std::remove_if(sol.clusters.begin(), sol.clusters.end(),
                                          [](const auto& b) { return b.empty(); }),
                           sol.clusters.end());
        for (const auto& b : sol.clusters) {
            if (inst.variant == Variant::In) sol.in_centers.push_back(b[rng() % b.size()]);
            if (inst.variant == Variant::Any)
                sol.any_centers.push_back(rng() & 1 ? sol.completion[b[0]] : random_tv(rng, d, 0));
        }
        CHECK(static_cast<bool>(verify_solution(inst, sol)) == naive_check(inst, sol));
    }
}
