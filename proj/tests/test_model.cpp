#include "levnet/dynamics.hpp"
#include "levnet/model.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace levnet;

namespace {

std::vector<BalanceSheet> two_banks() {
    // Bank A lends 30 to B; B lends 10 to A.
    BalanceSheet a{"A", 10.0, 30.0, 10.0, 100.0, 110.0};
    BalanceSheet b{"B", 5.0, 10.0, 30.0, 60.0, 35.0};
    return {a, b};
}

}  // namespace

TEST_CASE("balance-sheet identity and consistency report") {
    auto s = two_banks();
    CHECK(s[0].identity_residual() == doctest::Approx(0.0));
    CHECK(s[1].identity_residual() == doctest::Approx(0.0));
    CHECK(check_consistency(s).empty());

    s[1].external_assets += 1.0;
    auto issues = check_consistency(s);
    REQUIRE_FALSE(issues.empty());
    CHECK(issues.front().find("B") != std::string::npos);

    s = two_banks();
    s[1].equity = 0.0;
    s[1].external_liabilities = 40.0;
    CHECK_FALSE(check_consistency(s).empty());
}

TEST_CASE("leverage divides each row by the lender's equity") {
    const auto sheets = two_banks();
    SquareMatrix a(2);
    a(0, 1) = 30.0;
    a(1, 0) = 10.0;
    const auto lev = build_leverage(ExposureMatrix(a), sheets);
    CHECK(lev(0, 1) == doctest::Approx(3.0));
    CHECK(lev(1, 0) == doctest::Approx(2.0));
    const auto l = bank_leverages(lev);
    CHECK(l[0] == doctest::Approx(sheets[0].interbank_assets / sheets[0].equity));
    CHECK(average_leverage(lev) == doctest::Approx(2.5));
    CHECK(spectral_radius(lev) == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("exposure and recovery validation") {
    SquareMatrix a(2);
    a(0, 0) = 1.0;
    CHECK_THROWS_AS(ExposureMatrix{a}, Error);
    a(0, 0) = 0.0;
    a(0, 1) = -1.0;
    CHECK_THROWS_AS(ExposureMatrix{a}, Error);
    CHECK_THROWS_AS(RecoveryVector({0.5, 1.5}), Error);
    CHECK_THROWS_AS(RecoveryVector::uniform(3, -0.1), Error);
}

TEST_CASE("recovery scales column j by one minus rho_j") {
    auto m = oracle::random_matrix(6, 0.8, 1.0, 1);
    const RecoveryVector rv({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
    const auto hat = adjust_recovery(m, rv);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(hat(i, j) == doctest::Approx(m(i, j) * (1.0 - rv[j])));
    // Full recovery everywhere removes all contagion.
    CHECK(spectral_radius(adjust_recovery(m, RecoveryVector::uniform(6, 1.0))) == 0.0);
}

TEST_CASE("default curve families") {
    const auto lin = DefaultCurve::linear();
    const auto pw = DefaultCurve::power(2.0);
    const auto ex = DefaultCurve::exponential(2.0);
    for (const auto& c : {lin, pw, ex}) {
        CHECK(c(0.0) == doctest::Approx(0.0));
        CHECK(c(1.0) == doctest::Approx(1.0));
        double prev = 0.0;
        for (int k = 1; k <= 100; ++k) {
            const double h = k / 100.0;
            CHECK(c(h) >= prev);
            CHECK(c(h) <= h + 1e-15);  // convex through (0,0) and (1,1)
            prev = c(h);
        }
        CHECK_THROWS_AS(c(1.5), Error);
        CHECK_THROWS_AS(c(-0.1), Error);
    }
    CHECK(pw(0.5) == doctest::Approx(0.25));
    CHECK(ex(0.5) == doctest::Approx(std::expm1(1.0) / std::expm1(2.0)));
    CHECK(lin.derivative_at_zero() == 1.0);
    CHECK(pw.derivative_at_zero() == 0.0);
    CHECK(DefaultCurve::power(1.0).derivative_at_zero() == 1.0);
    CHECK(ex.derivative_at_zero() == doctest::Approx(2.0 / std::expm1(2.0)));
    // Central difference check of the analytic derivative.
    for (double h : {0.2, 0.5, 0.8}) {
        const double d = (ex(h + 1e-6) - ex(h - 1e-6)) / 2e-6;
        CHECK(ex.derivative(h) == doctest::Approx(d).epsilon(1e-6));
    }
}

TEST_CASE("curve parsing round-trips and rejects bad parameters") {
    for (const char* text : {"linear", "power:2", "power:3.5", "exponential:0.5"}) {
        const auto c = DefaultCurve::parse(text);
        const auto back = DefaultCurve::parse(c.to_string());
        CHECK(back.family() == c.family());
        CHECK(back.parameter() == c.parameter());
    }
    CHECK(DefaultCurve::parse("power:2").family() == CurveFamily::power);
    CHECK_THROWS_AS(DefaultCurve::parse("power:0.5"), Error);
    CHECK_THROWS_AS(DefaultCurve::parse("exponential:0"), Error);
    CHECK_THROWS_AS(DefaultCurve::parse("logistic:1"), Error);
    CHECK_THROWS_AS(DefaultCurve::parse("power:abc"), Error);
}

TEST_CASE("tilde radius never exceeds the hat radius for convex curves") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto m = oracle::random_matrix(10, 0.4, 0.6, 300 + seed);
        for (const auto& c : {DefaultCurve::linear(), DefaultCurve::power(1.5), DefaultCurve::exponential(3.0)}) {
            const double hat = spectral_radius(m);
            const double tilde = spectral_radius(tilde_matrix(m, c));
            CHECK(tilde <= hat + 1e-12);
        }
    }
    const auto m = oracle::random_matrix(10, 0.4, 0.6, 1);
    CHECK(tilde_matrix(m, DefaultCurve::linear()) == m);
}
