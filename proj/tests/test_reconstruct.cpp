#include "levnet/reconstruct.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace levnet;

namespace {

RasProblem make_problem(std::size_t n) {
    RasProblem p;
    p.n = n;
    p.support.assign(n * n, 0);
    p.row_targets.assign(n, 0.0);
    p.col_targets.assign(n, 0.0);
    return p;
}

// Marginals of a random positive matrix on a random support, so the
// problem has a strictly positive solution.
RasProblem random_feasible(std::size_t n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto p = make_problem(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && (u(rng) < density || j == (i + 1) % n)) {
                const double x = std::exp(2.0 * u(rng));
                p.set_support(i, j);
                p.row_targets[i] += x;
                p.col_targets[j] += x;
            }
    return p;
}

}  // namespace

TEST_CASE("unique solution on a three-bank chain") {
    auto p = make_problem(3);
    p.set_support(0, 1);
    p.set_support(0, 2);
    p.set_support(1, 2);
    p.row_targets = {3.0, 1.0, 0.0};
    p.col_targets = {0.0, 2.0, 2.0};
    const auto r = ras_balance(p);
    CHECK(r.matrix(0, 1) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.matrix(0, 2) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.matrix(1, 2) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.residual <= 1e-9);
}

TEST_CASE("complete bipartite support gives the independence table") {
    // Lenders 0,1 to borrowers 2,3,4 with full support: x_ij = a_i b_j / T.
    auto p = make_problem(5);
    for (std::size_t i : {0, 1})
        for (std::size_t j : {2, 3, 4}) p.set_support(i, j);
    p.row_targets = {4.0, 6.0, 0.0, 0.0, 0.0};
    p.col_targets = {0.0, 0.0, 5.0, 3.0, 2.0};
    const auto r = ras_balance(p);
    for (std::size_t i : {0, 1})
        for (std::size_t j : {2, 3, 4})
            CHECK(r.matrix(i, j) == doctest::Approx(p.row_targets[i] * p.col_targets[j] / 10.0).epsilon(1e-10));
}

TEST_CASE("random feasible problems match the log-domain oracle") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n = 3 + seed % 20;
        const auto p = random_feasible(n, 0.3, seed);
        const auto r = ras_balance(p);
        CAPTURE(seed);
        CHECK(r.residual <= 1e-9);
        CHECK(marginal_residual(p, r.matrix) <= 1e-9);
        const auto want = oracle::log_ipf(n, p.support, p.row_targets, p.col_targets);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (!p.supported(i, j)) CHECK(r.matrix(i, j) == 0.0);
                CHECK(r.matrix(i, j) == doctest::Approx(want(i, j)).epsilon(1e-7).scale(1e-9));
            }
    }
}

TEST_CASE("row L1 error never increases across sweeps") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = random_feasible(15, 0.2, 100 + seed);
        const auto r = ras_balance(p);
        for (std::size_t s = 1; s < r.l1_history.size(); ++s)
            CHECK(r.l1_history[s] <= r.l1_history[s - 1] * (1 + 1e-12) + 1e-15);
    }
}

TEST_CASE("infeasible marginals throw with the residual") {
    // Bank 0 must lend 5 but its only borrower takes 2.
    auto p = make_problem(3);
    p.set_support(0, 1);
    p.set_support(2, 1);
    p.set_support(2, 0);
    p.row_targets = {5.0, 0.0, 1.0};
    p.col_targets = {4.0, 2.0, 0.0};
    p.max_sweeps = 500;
    try {
        ras_balance(p);
        FAIL("expected RasError");
    } catch (const RasError& e) {
        CHECK(e.worst_residual() > 1e-3);
        CHECK(e.sweeps() == 500);
    }
}

TEST_CASE("structural pre-check names the stranded bank") {
    auto p = make_problem(3);
    p.set_support(0, 1);
    p.row_targets = {1.0, 0.0, 1.0};
    p.col_targets = {0.0, 2.0, 0.0};
    try {
        p.check();
        FAIL("expected RasError");
    } catch (const RasError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    auto q = make_problem(2);
    q.set_support(0, 1);
    q.row_targets = {1.0, 0.0};
    q.col_targets = {0.0, 1.5};
    CHECK_THROWS_AS(q.check(), RasError);  // totals differ
    q.col_targets = {0.0, 1.0};
    q.set_support(1, 1);
    CHECK_THROWS_AS(q.check(), Error);
}

TEST_CASE("warm-started rebalance equals cold start on a four-bank desk") {
    const std::vector<BalanceSheet> sheets{
        {"A", 10.0, 40.0, 10.0, 80.0, 100.0},
        {"B", 8.0, 20.0, 25.0, 60.0, 47.0},
        {"C", 5.0, 15.0, 20.0, 30.0, 20.0},
        {"D", 6.0, 5.0, 25.0, 40.0, 14.0},
    };
    REQUIRE(check_consistency(sheets).empty());
    auto p = RasProblem::from_sheets(sheets);
    for (auto [i, j] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 0}, {1, 2}, {2, 0}})
        p.set_support(i, j);
    p.tol = 1e-13;
    auto cur = ras_balance(p).matrix;
    for (auto e : std::vector<std::pair<std::size_t, std::size_t>>{{0, 3}, {1, 0}, {2, 1}, {3, 1}, {3, 2}}) {
        const auto warm = rebalance_after_edge(cur, e, p);
        const auto cold = ras_balance(p);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(warm.matrix(i, j) - cold.matrix(i, j)) <= 1e-8);
        cur = warm.matrix;
    }
}

TEST_CASE("failed rebalance leaves the support unchanged") {
    auto p = make_problem(3);
    p.set_support(0, 1);
    p.row_targets = {1.0, 0.0, 0.0};
    p.col_targets = {0.0, 1.0, 0.0};
    const auto prev = ras_balance(p).matrix;
    const auto before = p.support;
    CHECK_THROWS_AS(rebalance_after_edge(prev, {1, 1}, p), Error);
    CHECK(p.support == before);
}
