#include "levnet/cycles.hpp"
#include "levnet/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace levnet;

namespace {

void check_simple(const WeightedDigraph& g) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : g.edges) {
        CHECK(e.source != e.target);
        CHECK(e.source < g.n);
        CHECK(e.target < g.n);
        CHECK(e.weight > 0.0);
        CHECK(seen.emplace(e.source, e.target).second);
    }
}

}  // namespace

TEST_CASE("weight sampler text form") {
    for (const char* t : {"constant:0.5", "exponential:0.79", "uniform:0.1:2"}) {
        const auto w = WeightSampler::parse(t);
        const auto back = WeightSampler::parse(w.to_string());
        CHECK(back.kind() == w.kind());
        CHECK(back.mean() == doctest::Approx(w.mean()));
    }
    CHECK(WeightSampler::parse("uniform:1:3").mean() == doctest::Approx(2.0));
    CHECK_THROWS_AS(WeightSampler::parse("exponential:-1"), Error);
    CHECK_THROWS_AS(WeightSampler::parse("uniform:2:1"), Error);
    CHECK_THROWS_AS(WeightSampler::parse("gamma:1"), Error);
}

TEST_CASE("exponential draws have the requested mean") {
    Rng rng = make_stream(1, 0);
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = draw_exponential(rng, 0.79);
        REQUIRE(x > 0.0);
        s += x;
    }
    CHECK(s / n == doctest::Approx(0.79).epsilon(0.01));
}

TEST_CASE("streams of one seed are distinct and reproducible") {
    Rng a = make_stream(42, 0), b = make_stream(42, 1), c = make_stream(42, 0);
    const auto x = a();
    CHECK(x != b());
    CHECK(x == c());
}

TEST_CASE("Erdos-Renyi density and determinism") {
    const auto g = gen_erdos_renyi(300, 0.05, WeightSampler::exponential(1.0), 9);
    check_simple(g);
    const double sd = std::sqrt(0.05 * 0.95 / (300.0 * 299.0));
    CHECK(std::abs(g.density() - 0.05) < 4 * sd);
    CHECK(gen_erdos_renyi(300, 0.05, WeightSampler::exponential(1.0), 9).edges == g.edges);
    CHECK(gen_erdos_renyi(300, 0.05, WeightSampler::exponential(1.0), 10).edges != g.edges);
    // Changing the weight law leaves the structure untouched.
    const auto h = gen_erdos_renyi(300, 0.05, WeightSampler::constant(2.0), 9);
    REQUIRE(h.edges.size() == g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        CHECK(h.edges[e].source == g.edges[e].source);
        CHECK(h.edges[e].target == g.edges[e].target);
    }
    CHECK(gen_erdos_renyi(10, 0.0, WeightSampler::constant(1.0), 1).edges.empty());
    CHECK(gen_erdos_renyi(10, 1.0, WeightSampler::constant(1.0), 1).edges.size() == 90);
}

TEST_CASE("regular digraphs have every degree exactly k") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t n = 20 + 5 * seed, k = 3 + seed % 8;
        const auto g = gen_regular_random(n, k, WeightSampler::exponential(0.1), seed);
        check_simple(g);
        for (auto d : g.out_degrees()) CHECK(d == k);
        for (auto d : g.in_degrees()) CHECK(d == k);
        CHECK(g.reciprocity() <= 0.5 + 1e-12);
    }
    CHECK_THROWS_AS(gen_regular_random(5, 5, WeightSampler::constant(1.0), 1), Error);
}

TEST_CASE("preferential-attachment parameters and tail exponents") {
    const ScaleFreeParams d;
    const auto [xin, xout] = d.tail_exponents();
    CHECK(xin == doctest::Approx(2.15).epsilon(1e-12));
    CHECK(xout == doctest::Approx(2.7).epsilon(1e-12));
    CHECK(d.alpha + d.beta + d.gamma == doctest::Approx(1.0));
    for (double gamma : {0.05, 0.1, 0.15})
        for (double dout : {0.0, 0.5, 1.0}) {
            ScaleFreeParams p;
            try {
                p = ScaleFreeParams::for_exponents(2.15, 2.7, gamma, dout);
            } catch (const Error&) {
                continue;
            }
            const auto [a, b] = p.tail_exponents();
            CHECK(a == doctest::Approx(2.15).epsilon(1e-12));
            CHECK(b == doctest::Approx(2.7).epsilon(1e-12));
            CHECK(p.gamma == gamma);
            CHECK(p.delta_out == dout);
        }
    ScaleFreeParams bad;
    bad.alpha = 0.9;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("preferential-attachment process step frequencies") {
    const ScaleFreeParams p;
    ScaleFreeProcess proc(p);
    Rng rng = make_stream(3, 0);
    std::size_t counts[3] = {0, 0, 0};
    const int steps = 20000;
    for (int s = 0; s < steps; ++s) counts[static_cast<int>(proc.advance(rng).kind)]++;
    CHECK(counts[0] / double(steps) == doctest::Approx(p.alpha).epsilon(0.05));
    CHECK(counts[2] / double(steps) == doctest::Approx(p.gamma).epsilon(0.1));
    CHECK(proc.node_count() == 2 + counts[0] + counts[2]);
    CHECK(proc.edges().size() == 1 + steps);
}

TEST_CASE("scale-free graphs reach the target size") {
    const auto g = gen_scale_free(500, ScaleFreeParams{}, 4);
    CHECK(g.n == 500);
    check_simple(g);
    // Each node's out-weights are exponential with mean weight_scale / k_out,
    // so the expected row sum is weight_scale for every lender.
    const auto out = g.out_degrees();
    double total = 0.0;
    std::size_t lenders = 0;
    for (auto d : out) lenders += d > 0;
    for (const auto& e : g.edges) total += e.weight;
    CHECK(total / static_cast<double>(lenders) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("core-periphery block densities") {
    CorePeripherySpec spec{400};
    const auto g = gen_core_periphery(spec, WeightSampler::constant(1.0), 5);
    check_simple(g);
    const std::size_t c = spec.core_size();
    CHECK(c == 60);
    double cc = 0, cp = 0, pc = 0, pp = 0;
    for (const auto& e : g.edges) {
        const bool sc = e.source < c, tc = e.target < c;
        (sc ? (tc ? cc : cp) : (tc ? pc : pp)) += 1;
    }
    const double nc = static_cast<double>(c), np = 400.0 - nc;
    CHECK(cc / (nc * (nc - 1)) == doctest::Approx(spec.rho_cc).epsilon(0.05));
    CHECK(cp / (nc * np) == doctest::Approx(spec.rho_cp).epsilon(0.05));
    CHECK(pc / (nc * np) == doctest::Approx(spec.rho_pc).epsilon(0.05));
    CHECK(pp / (np * (np - 1)) == doctest::Approx(spec.rho_pp).epsilon(0.05));
    CorePeripherySpec bad{10};
    bad.rho_cc = 1.5;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("random DAGs are acyclic with the requested density") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = gen_random_dag(60, 0.3, WeightSampler::uniform(0.5, 2.0), seed);
        check_simple(g);
        CHECK(is_dag(g));
        CHECK(spectral_radius(g.to_sparse()) == 0.0);
    }
    const auto full = gen_random_dag(30, 1.0, WeightSampler::constant(1.0), 1);
    CHECK(full.edges.size() == 30 * 29 / 2);
}

TEST_CASE("digraph validation and matrix round trip") {
    WeightedDigraph g;
    g.n = 3;
    g.edges = {{0, 1, 0.5}, {1, 2, 1.5}, {2, 0, 2.0}};
    g.validate();
    const auto back = WeightedDigraph::from_matrix(g.to_matrix());
    CHECK(back.edges == g.edges);
    CHECK(g.reciprocity() == 0.0);
    CHECK(g.density() == doctest::Approx(0.5));
    g.edges.push_back({1, 1, 1.0});
    CHECK_THROWS_AS(g.validate(), Error);
    g.edges.back() = {0, 1, 1.0};
    CHECK_THROWS_AS(g.validate(), Error);
    g.edges.back() = {0, 2, 0.0};
    CHECK_THROWS_AS(g.validate(), Error);
    g.edges.back() = {0, 3, 1.0};
    CHECK_THROWS_AS(g.validate(), Error);
}
