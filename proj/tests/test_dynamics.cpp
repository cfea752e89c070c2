#include "levnet/cycles.hpp"
#include "levnet/dynamics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace levnet;

namespace {

std::vector<DefaultCurve> same(std::size_t n, DefaultCurve c) { return std::vector<DefaultCurve>(n, c); }

SquareMatrix scaled(SquareMatrix m, double rho) {
    const double r = spectral_radius(m);
    if (r > 0.0) m *= rho / r;
    return m;
}

}  // namespace

TEST_CASE("one step matches the direct formula") {
    SquareMatrix m(3);
    m(0, 1) = 0.5;
    m(1, 2) = 0.25;
    m(2, 0) = 2.0;
    const std::vector<double> h1{0.1, 0.0, 0.2};
    const auto curves = same(3, DefaultCurve::power(2.0));
    DistressState s{{0.1, 0.4, 0.6}, 4};
    const auto next = step(s, m, curves, h1);
    CHECK(next.t == 5);
    CHECK(next.h[0] == doctest::Approx(0.1 + 0.5 * 0.16));
    CHECK(next.h[1] == doctest::Approx(0.0 + 0.25 * 0.36));
    CHECK(next.h[2] == doctest::Approx(std::min(1.0, 0.2 + 2.0 * 0.01)));
}

TEST_CASE("clipped mode caps at one and keeps defaulted banks there") {
    SquareMatrix m(2);
    m(0, 1) = 5.0;
    m(1, 0) = 0.1;
    const std::vector<double> h1{0.0, 0.5};
    const auto curves = same(2, DefaultCurve::linear());
    auto s = step({{0.0, 0.5}, 1}, m, curves, h1);
    CHECK(s.h[0] == 1.0);
    s = step(s, m, curves, h1);
    CHECK(s.h[0] == 1.0);
    const auto u = step({{0.0, 0.5}, 1}, m, curves, h1, Clipping::unclipped);
    CHECK(u.h[0] == doctest::Approx(2.5));
}

TEST_CASE("stable linear dynamics converge to the Neumann fixed point") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto m = scaled(oracle::random_matrix(12, 0.3, 1.0, 400 + seed), 0.7);
        std::vector<double> h1(12, 0.0);
        h1[seed % 12] = 0.05;
        const auto want = oracle::neumann(m, h1);
        double top = 0.0;
        for (double v : want) top = std::max(top, v);
        if (top >= 1.0) continue;  // would hit the cap
        const auto r = simulate(m, same(12, DefaultCurve::linear()), h1, {.tol = 1e-14});
        REQUIRE(r.outcome == Outcome::converged);
        for (std::size_t i = 0; i < 12; ++i) CHECK(r.final_state.h[i] == doctest::Approx(want[i]).epsilon(1e-9));
    }
}

TEST_CASE("nonlinear iterates never exceed linear ones") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 4 + seed % 12;
        const auto m = scaled(oracle::random_matrix(n, 0.4, 1.0, 500 + seed), 0.5 + 0.05 * static_cast<double>(seed % 20));
        std::vector<double> h1(n);
        for (std::size_t i = 0; i < n; ++i) h1[i] = 0.02 * static_cast<double>((i * 7 + seed) % 5);
        for (const auto& c : {DefaultCurve::power(2.0), DefaultCurve::exponential(2.0)}) {
            DistressState lin{h1, 1}, non{h1, 1};
            for (int t = 0; t < 60; ++t) {
                lin = step(lin, m, same(n, DefaultCurve::linear()), h1);
                non = step(non, m, same(n, c), h1);
                for (std::size_t i = 0; i < n; ++i) CHECK(non.h[i] <= lin.h[i] + 1e-15);
            }
        }
    }
}

TEST_CASE("losses are nondecreasing in time from a nonnegative shock") {
    const auto m = scaled(oracle::random_matrix(10, 0.5, 1.0, 77), 1.4);
    std::vector<double> h1(10, 0.01);
    const auto r = simulate(m, same(10, DefaultCurve::exponential(1.0)), h1);
    for (std::size_t t = 1; t < r.trajectory.size(); ++t)
        for (std::size_t i = 0; i < 10; ++i) CHECK(r.trajectory[t].h[i] >= r.trajectory[t - 1].h[i] - 1e-15);
}

TEST_CASE("unstable linear system grows at the spectral radius") {
    const double w = 1.2;
    const auto m = butterfly(w);
    const double rate = std::cbrt(2.0) * w;
    std::vector<double> h1(5, 0.0);
    h1[0] = 1e-6;
    SimulationOptions so;
    so.mode = Clipping::unclipped;
    so.max_steps = 300;
    so.divergence_threshold = 1e100;
    const auto r = simulate(m, same(5, DefaultCurve::linear()), h1, so);
    const auto& tr = r.trajectory;
    // The butterfly is periodic with period 3, so compare three steps apart.
    const std::size_t t = tr.size() - 1;
    const double g = std::cbrt(tr[t].h[0] / tr[t - 3].h[0]);
    CHECK(g == doctest::Approx(rate).epsilon(1e-3));
}

TEST_CASE("outcomes: ceiling, diverged and undecided") {
    SquareMatrix m(2);
    m(0, 1) = m(1, 0) = 3.0;
    const std::vector<double> h1{0.1, 0.1};
    const auto curves = same(2, DefaultCurve::linear());
    CHECK(simulate(m, curves, h1).outcome == Outcome::ceiling);
    SimulationOptions so;
    so.mode = Clipping::unclipped;
    CHECK(simulate(m, curves, h1, so).outcome == Outcome::diverged);
    so.mode = Clipping::clipped;
    so.max_steps = 1;
    SquareMatrix slow(2);
    slow(0, 1) = slow(1, 0) = 0.9;
    CHECK(simulate(slow, curves, h1, so).outcome == Outcome::undecided);
    const std::vector<double> zero{0.0, 0.0};
    const auto z = simulate(slow, curves, zero);
    CHECK(z.outcome == Outcome::converged);
    CHECK(z.steps == 1);
}

TEST_CASE("shock validation and dimension checks") {
    SquareMatrix m(2);
    const auto curves = same(2, DefaultCurve::linear());
    CHECK_THROWS_AS(simulate(m, curves, std::vector<double>{1.5, 0.0}), Error);
    CHECK_THROWS_AS(simulate(m, curves, std::vector<double>{0.1}), Error);
}

TEST_CASE("regime thresholds") {
    CHECK(classify_radii(0.5, 0.5).regime == Regime::stable);
    CHECK(classify_radii(1.5, 1.2).regime == Regime::unstable);
    CHECK(classify_radii(1.5, 0.8).regime == Regime::indeterminate);
    CHECK(classify_radii(1.0, 1.0).regime == Regime::indeterminate);
    CHECK(classify_radii(1.0 - 1e-6, 0.0, 1e-3).regime == Regime::indeterminate);

    const auto b = butterfly(1.0);
    CHECK(classify(b, same(5, DefaultCurve::linear())).regime == Regime::unstable);
    // A flat start (p'(0) = 0) hides the instability from the tilde matrix.
    CHECK(classify(b, same(5, DefaultCurve::power(2.0))).regime == Regime::indeterminate);
    CHECK(classify(butterfly(0.5), same(5, DefaultCurve::power(2.0))).regime == Regime::stable);
}

TEST_CASE("default step budget") {
    CHECK(default_max_steps(5, 0.5) == 200);
    CHECK(default_max_steps(100, 0.75) == 4000);
    CHECK(default_max_steps(100, 1.0) == 100000);
    CHECK(default_max_steps(1000, 1.0 - 1e-9) == 1000000);
}
