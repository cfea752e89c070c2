#include "levnet/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace levnet;

namespace {

double mean_leverage(const std::vector<BalanceSheet>& sheets) {
    double s = 0.0;
    for (const auto& b : sheets) s += b.interbank_assets / b.equity;
    return s / static_cast<double>(sheets.size());
}

}  // namespace

TEST_CASE("synthetic sheets balance and hit the mean leverage") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto sheets = synthetic_balance_sheets({.n = 5 + seed, .target_mean_leverage = 2.0}, seed);
        CHECK(check_consistency(sheets).empty());
        CHECK(mean_leverage(sheets) == doctest::Approx(2.0).epsilon(1e-12));
        double lend = 0.0, borrow = 0.0;
        for (const auto& b : sheets) {
            CHECK(b.equity > 0.0);
            CHECK(b.external_assets >= 0.0);
            lend += b.interbank_assets;
            borrow += b.interbank_liabilities;
        }
        CHECK(lend == doctest::Approx(borrow).epsilon(1e-12));
        CHECK(sheets.front().interbank_liabilities == 0.0);
        CHECK(sheets.back().interbank_assets == 0.0);
        CHECK_FALSE(acyclic_funding_order(sheets).empty());
    }
    const auto a = synthetic_balance_sheets({}, 3), b = synthetic_balance_sheets({}, 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].equity == b[i].equity);
}

TEST_CASE("acyclic funding order") {
    // Bank 1 borrows more than everyone else lends.
    std::vector<BalanceSheet> sheets{{"A", 1, 3, 0, 0, 0}, {"B", 1, 4, 4, 0, 0}, {"C", 1, 0, 3, 0, 0}};
    CHECK(acyclic_funding_order(sheets).empty());
    sheets[1] = {"B", 1, 2, 2, 0, 0};
    const auto order = acyclic_funding_order(sheets);
    CHECK(order == std::vector<std::size_t>{0, 1, 2});
    // Brute force over permutations on small random systems.
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<BalanceSheet> s(5);
        double tl = 0.0, tb = 0.0;
        for (auto& b : s) {
            b.interbank_assets = u(rng) < 0.2 ? 0.0 : u(rng);
            b.interbank_liabilities = u(rng) < 0.2 ? 0.0 : u(rng);
            tl += b.interbank_assets;
            tb += b.interbank_liabilities;
        }
        if (!(tl > 0.0)) continue;
        for (auto& b : s) b.interbank_assets *= tb / tl;
        std::vector<std::size_t> perm{0, 1, 2, 3, 4};
        bool any = false;
        do {
            double surplus = 0.0;
            bool ok = true;
            for (auto v : perm) {
                if (s[v].interbank_liabilities > surplus + 1e-12 * tb) ok = false;
                surplus += s[v].interbank_assets - s[v].interbank_liabilities;
            }
            any = any || ok;
        } while (!any && std::next_permutation(perm.begin(), perm.end()));
        CAPTURE(trial);
        CHECK(any == !acyclic_funding_order(s).empty());
    }
}

TEST_CASE("role masks and support-derived sheets") {
    const std::vector<char> lend{1, 1, 0, 0}, borrow{0, 1, 1, 0};
    const auto sheets = synthetic_balance_sheets({.n = 4}, 1, lend, borrow);
    CHECK(sheets[0].interbank_liabilities == 0.0);
    CHECK(sheets[1].interbank_assets > 0.0);
    CHECK(sheets[1].interbank_liabilities > 0.0);
    CHECK(sheets[2].interbank_assets == 0.0);
    CHECK(sheets[3].interbank_assets + sheets[3].interbank_liabilities == 0.0);

    const std::size_t n = 6;
    std::vector<char> support(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) support[i * n + (i + 1) % n] = support[i * n + (i + 2) % n] = 1;
    const auto s = synthetic_balance_sheets_on_support({.n = n, .target_mean_leverage = 1.5}, 9, support);
    CHECK(check_consistency(s).empty());
    CHECK(mean_leverage(s) == doctest::Approx(1.5).epsilon(1e-12));
    for (const auto& b : s) {
        CHECK(b.interbank_assets > 0.0);
        CHECK(b.interbank_liabilities > 0.0);
    }
    support[0] = 1;
    CHECK_THROWS_AS(synthetic_balance_sheets_on_support({.n = n}, 9, support), Error);
    CHECK(lender_shares(s).size() == n);
}
