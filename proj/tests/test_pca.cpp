#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "sublog/distributions.hpp"
#include "sublog/pca.hpp"
#include "sublog/rng.hpp"
#include "test_util.hpp"

using namespace sublog;
using test::make_array;
using test::probe_queries;
using test::random_unit_array;

TEST_SUITE("pca") {

TEST_CASE("single key, single piece") {
    const auto a = make_array({0.5});
    const auto m = build_pcf(a, 1, 1, 1, 0.0, 1.0);
    REQUIRE(m.piece_count() == 1);
    CHECK(m.half_ranks2[0] == 1);  // midpoint 1/2 stored doubled
    CHECK(m.max_err == 1);
}

TEST_CASE("two keys, two pieces") {
    const auto a = make_array({0.25, 0.75});
    const auto m = build_pcf(a, 1, 2, 2, 0.0, 1.0);
    REQUIRE(m.piece_count() == 2);
    CHECK(m.half_ranks2[0] == 1);  // piece value 0.5
    CHECK(m.half_ranks2[1] == 3);  // piece value 1.5
    CHECK(m.max_err == 1);
}

TEST_CASE("model construction validates its arguments") {
    const auto a = make_array({0.5});
    CHECK_THROWS_AS(build_pcf(a, 1, 1, 4, 0.7, 0.7), InvalidDomain);
    CHECK_THROWS_AS(build_pcf(a, 1, 1, 4, 0.9, 0.1), InvalidDomain);
    CHECK_THROWS_AS(build_pcf(a, 1, 1, kMaxPcfPieces + 1, 0.0, 1.0), PieceBudgetExceeded);
    CHECK_THROWS_AS(pca_piece_count(std::size_t{1} << 40, 0.5, 1.0), PieceBudgetExceeded);
}

TEST_CASE("per-piece error is at most the keys captured by the piece") {
    auto gen = make_engine(7);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + gen() % 500;
        const auto a = random_unit_array(n, gen(), trial % 4 == 0);
        const std::size_t k = 1 + gen() % 64;
        const auto m = build_pcf(a, 1, n, k, 0.0, 1.0);

        // count keys per piece with the model's own assignment
        std::vector<std::size_t> per_piece(k, 0);
        for (double key : a.keys()) ++per_piece[m.piece_of(key)];

        // brute-force per-piece error on a dense probe grid
        std::vector<std::uint64_t> err(k, 0);
        for (double q : probe_queries(a, 257)) {
            if (q < 0.0 || q > 1.0) continue;
            const std::size_t z = m.piece_of(q);
            const double estimate = static_cast<double>(m.half_ranks2[z]) / 2.0;
            const double truth = static_cast<double>(rank_oracle(a, q));
            err[z] = std::max(err[z],
                              static_cast<std::uint64_t>(std::ceil(std::abs(estimate - truth))));
        }
        for (std::size_t z = 0; z < k; ++z) {
            REQUIRE(err[z] <= per_piece[z]);
            REQUIRE(err[z] <= m.max_err);
        }
    }
}

TEST_CASE("piece budget formula") {
    CHECK(pca_piece_count(1000, 0.1, 1.0) == 1413);  // ceil(1000^1.05)
    // gaussian sigma = 0.1 with the truncation normalizer folded into rho;
    // direct evaluation of ceil(n^(1+eps/2) * rho^(1+eps/4))
    const double z = 0.5 * std::erfc(-5.0 / std::sqrt(2.0)) - 0.5 * std::erfc(5.0 / std::sqrt(2.0));
    const double rho = 1.0 / (0.1 * std::sqrt(2.0 * 3.141592653589793)) / z;
    CHECK(pca_piece_count(1000, 0.1, rho) == 5834);
    CHECK(pca_piece_count(1000, 0.1, pdf_bound(CdfModel::trunc_gaussian(0.5, 0.1)).upper) == 5834);
}

TEST_CASE("observed error rarely reaches the constant bound at k = n^1.5") {
    // error target 2/eps + 1 = 5 at eps = 0.5; with n = 1000 and
    // k = ceil(n^1.5) pieces the failure rate is far below 1 in 100.
    const std::size_t n = 1000;
    const auto k = static_cast<std::size_t>(std::ceil(std::pow(n, 1.5)));
    const auto m = CdfModel::uniform();
    int bad = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto a = sample_sorted(m, n, seed);
        if (build_pcf(a, 1, n, k, 0.0, 1.0).max_err >= 5) ++bad;
    }
    CHECK(bad <= 2);  // 1% of 200
}

TEST_CASE("piece lookup floors and clamps") {
    std::vector<double> keys(50);
    for (int i = 0; i < 50; ++i) keys[i] = (i + 0.5) / 50.0;
    const auto a = make_array(keys);
    const auto m = build_pcf(a, 1, 50, 100, 0.0, 1.0);
    CHECK(m.piece_of(0.37) == 37);
    CHECK(m.piece_of(0.0) == 0);
    CHECK(m.piece_of(1.0) == 99);   // right endpoint clamps to the last piece
    CHECK(m.piece_of(-0.5) == 0);   // marginally outside stays valid
    CHECK(m.piece_of(1.5) == 99);
}

TEST_CASE("index equals the oracle on random uniform arrays") {
    const auto dist = CdfModel::uniform();
    auto gen = make_engine(17);
    for (int ai = 0; ai < 100; ++ai) {
        const auto a = sample_sorted(dist, 10000, gen());
        const PcaIndex idx = build_pca(a, 0.1, 1.0);
        for (int qi = 0; qi < 1000; ++qi) {
            const double q = next_unit(gen);
            OpContext ctx;
            const Rank got = idx.query(q, ctx);
            const Rank want = exact_rank(a, q);
            if (got != want) REQUIRE(got == want);
        }
    }
}

TEST_CASE("index is exact on adversarial small arrays, ties, and edges") {
    auto gen = make_engine(18);
    for (std::size_t n = 1; n <= 40; ++n) {
        const auto a = random_unit_array(n, gen(), n % 2 == 0);
        for (double eps : {0.1, 0.5, 2.0}) {
            const PcaIndex idx = build_pca(a, eps, 1.0);
            for (double q : probe_queries(a)) {
                OpContext ctx;
                REQUIRE(idx.query(q, ctx) == rank_oracle(a, q));
            }
        }
    }
}

TEST_CASE("midpoint is the best constant per piece") {
    // For every piece, no constant beats the stored midpoint in
    // infinity norm over the piece, brute-forced on small arrays.
    auto gen = make_engine(19);
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto a = random_unit_array(n, gen());
        const std::size_t k = 1 + static_cast<std::size_t>(gen() % 8);
        const auto m = build_pcf(a, 1, n, k, 0.0, 1.0);
        // 8-point grid inside each piece
        const double alpha = 1.0 / static_cast<double>(k);
        for (std::size_t z = 0; z < k; ++z) {
            // 8-point grid per piece whose end points are nudged onto
            // the piece, so the grid witnesses both rank extremes of
            // the monotone step function.
            auto nudge_into = [&](double q, double toward) {
                for (int step = 0; step < 8 && m.piece_of(q) != z; ++step) {
                    q = std::nextafter(q, toward);
                }
                return q;
            };
            const double left = nudge_into(static_cast<double>(z) * alpha, 2.0);
            const double right =
                nudge_into(std::nextafter(static_cast<double>(z + 1) * alpha, -2.0), -2.0);
            std::vector<double> grid;
            for (int g = 0; g < 8; ++g) {
                const double q = left + (right - left) * (g / 7.0);
                if (m.piece_of(q) == z) grid.push_back(q);
            }
            double worst_mid = 0.0;
            auto worst_for = [&](double c) {
                double w = 0.0;
                for (double q : grid) {
                    w = std::max(w, std::abs(c - static_cast<double>(rank_oracle(a, q))));
                }
                return w;
            };
            const double mid = static_cast<double>(m.half_ranks2[z]) / 2.0;
            worst_mid = worst_for(mid);
            for (double c = 0.0; c <= static_cast<double>(n); c += 0.5) {
                REQUIRE(worst_for(c) >= worst_mid - 1e-9);
            }
        }
    }
}

TEST_CASE("stored integers are pieces plus one") {
    const auto a = random_unit_array(100, 23);
    const PcaIndex idx = build_pca(a, 0.1, 1.0);
    CHECK(idx.size_ints() == idx.model().piece_count() + 1);
}

TEST_CASE("model survives a serialization round trip") {
    const auto a = random_unit_array(512, 29);
    const PcaIndex idx = build_pca(a, 0.3, 1.0);
    std::stringstream buf;
    write_pcf(buf, idx.model());
    const PcfModel back = read_pcf(buf);
    CHECK(back.half_ranks2 == idx.model().half_ranks2);
    CHECK(back.max_err == idx.model().max_err);
    CHECK(back.lo == idx.model().lo);
    CHECK(back.hi == idx.model().hi);
    const PcaIndex loaded(back, a);
    for (double q : probe_queries(a)) {
        OpContext c1, c2;
        CHECK(loaded.query(q, c1) == idx.query(q, c2));
    }
}

}  // TEST_SUITE
