#include "levnet/cycles.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace levnet;

namespace {

bool has_combined(const CycleReport& r, std::size_t node, std::size_t length) {
    for (const auto& w : r.witnesses)
        if (w.kind == CycleWitness::Kind::combined && w.node == node && w.length == length) return true;
    return false;
}

std::size_t individual_count(const CycleReport& r) {
    std::size_t c = 0;
    for (const auto& w : r.witnesses) c += w.kind == CycleWitness::Kind::individual;
    return c;
}

}  // namespace

TEST_CASE("acyclicity test") {
    SquareMatrix m(3);
    m(0, 1) = m(1, 2) = 1.0;
    CHECK(is_dag(m));
    m(2, 0) = 1.0;
    CHECK_FALSE(is_dag(m));
    CHECK(is_dag(SquareMatrix(0)));
}

TEST_CASE("butterfly below one per edge has combined but no individual witnesses") {
    // 2^{-1/3} < 0.9 < 1: each 3-cycle has product 0.729, but the closed
    // 3-walks through the shared node sum to 1.458.
    const auto r = find_unstable_cycles(butterfly(0.9), 6);
    CHECK(has_combined(r, 0, 3));
    CHECK(has_combined(r, 0, 6));
    CHECK_FALSE(has_combined(r, 1, 3));
    CHECK(individual_count(r) == 0);
    for (const auto& w : r.witnesses)
        if (w.length == 3 && w.node == 0) CHECK(w.value == doctest::Approx(2 * std::pow(0.9, 3)));
    CHECK_FALSE(r.truncated);

    const auto hot = find_unstable_cycles(butterfly(1.1), 3);
    CHECK(individual_count(hot) == 2);
    const auto cold = find_unstable_cycles(butterfly(0.7), 12);
    CHECK(cold.witnesses.empty());
}

TEST_CASE("individual witnesses match brute-force cycle enumeration") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto m = oracle::random_matrix(7, 0.45, 2.2, 600 + seed);
        std::set<std::vector<std::size_t>> want;
        for (const auto& c : oracle::simple_cycles(m))
            if (oracle::cycle_product(m, c) > 1.0) want.insert(c);
        const auto r = find_unstable_cycles(m, 1, {.max_length = 7, .max_visits = 100000000});
        std::set<std::vector<std::size_t>> got;
        for (const auto& w : r.witnesses)
            if (w.kind == CycleWitness::Kind::individual) {
                CHECK(w.nodes.front() == *std::min_element(w.nodes.begin(), w.nodes.end()));
                CHECK(w.value == doctest::Approx(oracle::cycle_product(m, w.nodes)));
                CHECK(got.insert(w.nodes).second);
            }
        CAPTURE(seed);
        CHECK(got == want);
    }
}

TEST_CASE("visit budget truncates the search") {
    const auto m = oracle::random_matrix(12, 0.9, 3.0, 1);
    const auto r = find_unstable_cycles(m, 1, {.max_length = 12, .max_visits = 50});
    CHECK(r.truncated);
}

TEST_CASE("core-periphery example radius") {
    for (std::size_t core : {3, 5, 8}) {
        const auto m = core_periphery_example(core, 4, 3, 0.2);
        CHECK(m.size() == core + 7);
        CHECK(spectral_radius(m) == doctest::Approx((core - 1) * 0.2).epsilon(1e-10));
        CHECK(oracle::radius_by_bisection(m) == doctest::Approx((core - 1) * 0.2).epsilon(1e-10));
    }
    // Eight-node core under a 15% cap on single exposures. The threshold,
    // located numerically, is 1/7 < 0.15.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (spectral_radius(core_periphery_example(8, 4, 4, mid), 1e-14) > 1.0 ? hi : lo) = mid;
    }
    CHECK(lo == doctest::Approx(1.0 / 7.0).epsilon(1e-10));
    const auto m = core_periphery_example(8, 4, 4, 0.15);
    CHECK(spectral_radius(m) > 1.0);
    // (m^k)_ii = 0.15^k (7^k + 7 (-1)^k) / 8 on the core first exceeds 1 at k = 43.
    const auto r = find_unstable_cycles(m, 50);
    CHECK(individual_count(r) == 0);
    REQUIRE_FALSE(r.witnesses.empty());
    std::size_t shortest = 1000;
    for (const auto& w : r.witnesses) {
        CHECK(w.node < 8);
        shortest = std::min(shortest, w.length);
    }
    CHECK(shortest == 43);
}

TEST_CASE("toy oscillation sequence") {
    const double w = 1.2;
    const auto seq = build_fig3_sequence(w);
    REQUIRE(seq.size() == 5);
    const double r2 = std::sqrt(0.5);
    const double want[5] = {0.0, w * r2, w, w * r2, w};
    for (int k = 0; k < 5; ++k) {
        CHECK(spectral_radius(seq[k], 1e-13) == doctest::Approx(want[k]).epsilon(1e-9));
        CHECK(oracle::radius_by_bisection(seq[k]) == doctest::Approx(want[k]).epsilon(1e-12));
    }
    CHECK(is_dag(seq[0]));
    // Every bank keeps the leverage it has in a.
    const auto l0 = seq[0];
    for (int k = 1; k < 5; ++k)
        for (std::size_t i = 0; i < 5; ++i) CHECK(seq[k].row_sum(i) == doctest::Approx(l0.row_sum(i)));

    const double located = locate_fig3_omega();
    CHECK(located > 1.0);
    CHECK(located < std::sqrt(2.0));
}
