#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "triclust/covering.hpp"

using namespace triclust;

namespace {
TriVector tv(const std::string& s) { return TriVector::from_string(s); }
}

TEST_CASE("covering certificate basics") {
    std::vector<TriVector> complete{tv("0101"), tv("1111")};
    auto c0 = covering_certificate(complete);
    CHECK(c0.value == 0);
    CHECK(c0.rows.empty());
    CHECK(c0.cols.empty());

    // one row entirely missing: a single row beats d columns
    std::vector<TriVector> onerow{tv("??"), tv("01"), tv("10")};
    auto c1 = covering_certificate(onerow);
    CHECK(c1.value == 1);
    CHECK(c1.rows == std::vector<int>{0});
    CHECK(verify_certificate(onerow, c1));

    // missing at (1,1),(1,2),(2,1): minimum 2
    std::vector<TriVector> m{tv("??0"), tv("?10"), tv("000")};
    auto c2 = covering_certificate(m);
    CHECK(c2.value == 2);
    CHECK(verify_certificate(m, c2));
}

TEST_CASE("verify_certificate checks covering only") {
    std::vector<TriVector> m{tv("?0"), tv("0?")};
    CoverCertificate missing_row{{0}, {}, 1};
    CHECK_FALSE(verify_certificate(m, missing_row));
    CoverCertificate oversized{{0, 1}, {0, 1}, 4};
    CHECK(verify_certificate(m, oversized));  // not minimal, still covering
    CoverCertificate bad{{5}, {}, 1};
    CHECK_THROWS_AS(verify_certificate(m, bad), std::out_of_range);
}

TEST_CASE("tie-breaking prefers fewer rows, then lexicographic sets") {
    // a single missing cell: row 0 or column 0 both cover; columns preferred
    std::vector<TriVector> one{tv("?1"), tv("01")};
    auto c = covering_certificate(one);
    CHECK(c.rows.empty());
    CHECK(c.cols == std::vector<int>{0});
}

TEST_CASE("certificate value equals brute-force minimum and matching size") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 5);
        int d = 1 + static_cast<int>(rng() % 5);
        std::vector<TriVector> rows;
        for (int i = 0; i < n; ++i) {
            TriVector v = TriVector::all_zero(d);
            for (int j = 0; j < d; ++j) {
                if (rng() % 4 == 0)
                    v.set(j, Tri::Missing);
                else if (rng() & 1)
                    v.set(j, Tri::One);
            }
            rows.push_back(v);
        }
        auto cert = covering_certificate(rows);
        CHECK(cert.value == oracles::brute_cover_value(rows));
        CHECK(verify_certificate(rows, cert));
        // every missing entry outside R_M sits in a T_M column
        for (int i = 0; i < n; ++i) {
            if (cert.covers_row(i)) continue;
            for (int j = 0; j < d; ++j)
                if (!rows[i].known(j)) CHECK(cert.covers_col(j));
        }
    }
}

TEST_CASE("certificate is deterministic") {
    std::vector<TriVector> m{tv("??01"), tv("0?10"), tv("1100"), tv("?000")};
    auto a = covering_certificate(m);
    auto b = covering_certificate(m);
    CHECK(a.rows == b.rows);
    CHECK(a.cols == b.cols);
}
