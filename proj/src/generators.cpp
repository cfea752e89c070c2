#include "levnet/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>

namespace levnet {

Rng make_stream(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    return Rng(seq);
}

namespace {

std::uint64_t pair_key(std::size_t u, std::size_t v) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

void assign_weights(WeightedDigraph& g, const WeightSampler& weights, std::uint64_t seed) {
    Rng rng = make_stream(seed, 1);
    for (auto& e : g.edges) e.weight = weights(rng);
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string(what) + " must lie in [0, 1]");
}

double parse_number(const std::string& text, const std::string& whole) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error("bad number '" + text + "' in weight law '" + whole + "'");
    return v;
}

}  // namespace

// ----------------------------------------------------------------------------
// WeightedDigraph

void WeightedDigraph::validate() const {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.source >= n || e.target >= n)
            throw Error("edge " + std::to_string(e.source) + " -> " + std::to_string(e.target) +
                        " out of range for " + std::to_string(n) + " nodes");
        if (e.source == e.target) throw Error("self-loop at node " + std::to_string(e.source));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw Error("edge " + std::to_string(e.source) + " -> " + std::to_string(e.target) +
                        " has non-positive weight");
        if (!seen.insert(pair_key(e.source, e.target)).second)
            throw Error("duplicate edge " + std::to_string(e.source) + " -> " +
                        std::to_string(e.target));
    }
}

SquareMatrix WeightedDigraph::to_matrix() const {
    SquareMatrix m(n);
    for (const auto& e : edges) m(e.source, e.target) += e.weight;
    return m;
}

SparseMatrix WeightedDigraph::to_sparse() const {
    std::vector<std::pair<std::size_t, std::size_t>> index;
    std::vector<double> w;
    index.reserve(edges.size());
    w.reserve(edges.size());
    for (const auto& e : edges) {
        index.emplace_back(e.source, e.target);
        w.push_back(e.weight);
    }
    return SparseMatrix::from_triplets(n, std::move(index), std::move(w));
}

WeightedDigraph WeightedDigraph::from_matrix(const SquareMatrix& m) {
    WeightedDigraph g;
    g.n = m.size();
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            if (i != j && m(i, j) > 0.0) g.edges.push_back({i, j, m(i, j)});
    return g;
}

std::vector<std::size_t> WeightedDigraph::out_degrees() const {
    std::vector<std::size_t> d(n, 0);
    for (const auto& e : edges) ++d[e.source];
    return d;
}

std::vector<std::size_t> WeightedDigraph::in_degrees() const {
    std::vector<std::size_t> d(n, 0);
    for (const auto& e : edges) ++d[e.target];
    return d;
}

double WeightedDigraph::density() const {
    if (n < 2) return 0.0;
    return static_cast<double>(edges.size()) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double WeightedDigraph::reciprocity() const {
    if (edges.empty()) return 0.0;
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const auto& e : edges) present.insert(pair_key(e.source, e.target));
    std::size_t r = 0;
    for (const auto& e : edges) r += present.count(pair_key(e.target, e.source));
    return static_cast<double>(r) / static_cast<double>(edges.size());
}

// ----------------------------------------------------------------------------
// WeightSampler

WeightSampler WeightSampler::constant(double w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error("constant weight must be positive");
    return {Kind::constant, w, w};
}

WeightSampler WeightSampler::exponential(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw Error("exponential mean must be positive");
    return {Kind::exponential, mean, 0.0};
}

WeightSampler WeightSampler::uniform(double lo, double hi) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw Error("uniform weights need 0 < lo <= hi");
    return {Kind::uniform, lo, hi};
}

WeightSampler WeightSampler::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts[0] == "constant" && parts.size() == 2) return constant(parse_number(parts[1], text));
    if (parts[0] == "exponential" && parts.size() == 2)
        return exponential(parse_number(parts[1], text));
    if (parts[0] == "uniform" && parts.size() == 3)
        return uniform(parse_number(parts[1], text), parse_number(parts[2], text));
    throw Error("unknown weight law '" + text +
                "' (expected constant:<w>, exponential:<mean> or uniform:<lo>:<hi>)");
}

double WeightSampler::mean() const noexcept {
    return kind_ == Kind::uniform ? 0.5 * (a_ + b_) : a_;
}

double WeightSampler::operator()(Rng& rng) const {
    switch (kind_) {
        case Kind::constant:
            return a_;
        case Kind::exponential:
            return draw_exponential(rng, a_);
        case Kind::uniform:
            return a_ == b_ ? a_ : std::uniform_real_distribution<double>(a_, b_)(rng);
    }
    return a_;
}

std::string WeightSampler::to_string() const {
    char buf[96];
    switch (kind_) {
        case Kind::constant:
            std::snprintf(buf, sizeof buf, "constant:%.17g", a_);
            break;
        case Kind::exponential:
            std::snprintf(buf, sizeof buf, "exponential:%.17g", a_);
            break;
        case Kind::uniform:
            std::snprintf(buf, sizeof buf, "uniform:%.17g:%.17g", a_, b_);
            break;
    }
    return buf;
}

double draw_exponential(Rng& rng, double mean) {
    // 1 - U lies in (0, 1], so the log is finite and the draw positive
    // except when U is exactly 0; redraw in that case.
    while (true) {
        const double u = uniform01(rng);
        const double w = -mean * std::log1p(-u);
        if (w > 0.0) return w;
    }
}

// ----------------------------------------------------------------------------
// Erdos-Renyi

WeightedDigraph gen_erdos_renyi(std::size_t n, double p, const WeightSampler& weights,
                                std::uint64_t seed) {
    if (n < 2) throw Error("Erdos-Renyi graph needs n >= 2");
    check_probability(p, "edge probability");
    WeightedDigraph g;
    g.n = n;
    g.meta = {"erdos_renyi", {{"n", double(n)}, {"p", p}, {"weight_mean", weights.mean()}}, seed};
    Rng rng = make_stream(seed, 0);
    std::bernoulli_distribution coin(p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng)) g.edges.push_back({i, j, 1.0});
    assign_weights(g, weights, seed);
    return g;
}

// ----------------------------------------------------------------------------
// Directed regular

namespace {

// Steger-Wormald: repeatedly join two random unmatched points on distinct,
// not yet adjacent vertices; restart if the remaining points admit no
// suitable pair.
std::vector<std::pair<std::size_t, std::size_t>> undirected_regular(std::size_t n, std::size_t k,
                                                                    Rng& rng) {
    const std::size_t max_restarts = 1000;
    for (std::size_t attempt = 0; attempt < max_restarts; ++attempt) {
        std::vector<std::size_t> points;
        points.reserve(n * k);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t c = 0; c < k; ++c) points.push_back(v);
        std::vector<char> adj(n * n, 0);
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        edges.reserve(n * k / 2);

        bool stuck = false;
        while (!points.empty() && !stuck) {
            bool joined = false;
            for (int tries = 0; tries < 64 && !joined; ++tries) {
                std::size_t a = uniform_index(rng, points.size());
                std::size_t b = uniform_index(rng, points.size());
                std::size_t u = points[a], v = points[b];
                if (a == b || u == v || adj[u * n + v]) continue;
                adj[u * n + v] = adj[v * n + u] = 1;
                edges.emplace_back(std::min(u, v), std::max(u, v));
                if (a < b) std::swap(a, b);
                points[a] = points.back();
                points.pop_back();
                points[b] = points.back();
                points.pop_back();
                joined = true;
            }
            if (joined) continue;
            // Exhaustive check for any suitable pair before giving up.
            stuck = true;
            for (std::size_t a = 0; a < points.size() && stuck; ++a)
                for (std::size_t b = a + 1; b < points.size(); ++b)
                    if (points[a] != points[b] && !adj[points[a] * n + points[b]]) {
                        stuck = false;
                        break;
                    }
        }
        if (!stuck) return edges;
    }
    throw Error("regular graph: pairing process failed after repeated restarts");
}

}  // namespace

WeightedDigraph gen_regular_random(std::size_t n, std::size_t k, const WeightSampler& weights,
                                   std::uint64_t seed, const RegularOptions& options) {
    if (k >= n) throw Error("regular graph needs k < n");
    if ((n * k) % 2 != 0) throw Error("regular graph needs n * k even");
    check_probability(options.reciprocity_threshold, "reciprocity threshold");

    Rng rng = make_stream(seed, 0);
    const auto undirected = undirected_regular(n, k, rng);

    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    arcs.reserve(2 * undirected.size());
    std::vector<char> adj(n * n, 0);
    for (auto [u, v] : undirected) {
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
        adj[u * n + v] = adj[v * n + u] = 1;
    }

    // Reciprocated arcs, counted with multiplicity 2 per mutual pair.
    std::size_t reciprocated = arcs.size();
    const double target = options.reciprocity_threshold * static_cast<double>(arcs.size());
    const std::size_t budget = options.swap_budget ? options.swap_budget : 100 * n * k;
    std::size_t attempts = 0;
    while (static_cast<double>(reciprocated) > target && attempts < budget && !arcs.empty()) {
        ++attempts;
        const std::size_t x = uniform_index(rng, arcs.size());
        const std::size_t y = uniform_index(rng, arcs.size());
        auto [a, b] = arcs[x];
        auto [c, d] = arcs[y];
        if (x == y || a == c || b == d || a == d || c == b) continue;
        if (adj[a * n + d] || adj[c * n + b]) continue;

        long delta = 0;
        adj[a * n + b] = 0;
        if (adj[b * n + a]) delta -= 2;
        adj[c * n + d] = 0;
        if (adj[d * n + c]) delta -= 2;
        if (adj[d * n + a]) delta += 2;
        adj[a * n + d] = 1;
        if (adj[b * n + c]) delta += 2;
        adj[c * n + b] = 1;
        if (delta > 0) {
            // Keep the walk monotone in reciprocity.
            adj[a * n + d] = adj[c * n + b] = 0;
            adj[a * n + b] = adj[c * n + d] = 1;
            continue;
        }
        arcs[x] = {a, d};
        arcs[y] = {c, b};
        reciprocated = static_cast<std::size_t>(static_cast<long>(reciprocated) + delta);
    }
    const double achieved =
        arcs.empty() ? 0.0 : static_cast<double>(reciprocated) / static_cast<double>(arcs.size());
    if (static_cast<double>(reciprocated) > target)
        throw Error("regular graph: reciprocity " + std::to_string(achieved) +
                    " still above threshold after " + std::to_string(budget) + " swap attempts");

    std::sort(arcs.begin(), arcs.end());
    WeightedDigraph g;
    g.n = n;
    g.meta = {"regular",
              {{"n", double(n)},
               {"k", double(k)},
               {"reciprocity_threshold", options.reciprocity_threshold},
               {"weight_mean", weights.mean()}},
              seed};
    g.edges.reserve(arcs.size());
    for (auto [u, v] : arcs) g.edges.push_back({u, v, 1.0});
    assign_weights(g, weights, seed);
    return g;
}

// ----------------------------------------------------------------------------
// Scale-free

void ScaleFreeParams::validate() const {
    const bool ok = alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0 &&
                    std::abs(alpha + beta + gamma - 1.0) <= 1e-9 && alpha + gamma > 0.0 &&
                    alpha + beta > 0.0 && beta + gamma > 0.0 && delta_in >= 0.0 &&
                    delta_out >= 0.0 && weight_scale > 0.0 && std::isfinite(weight_scale);
    if (!ok)
        throw Error("scale-free parameters need alpha, beta, gamma >= 0 summing to 1, "
                    "alpha + gamma > 0, nonnegative deltas and a positive weight scale");
}

std::pair<double, double> ScaleFreeParams::tail_exponents() const {
    return {1.0 + (1.0 + delta_in * (alpha + gamma)) / (alpha + beta),
            1.0 + (1.0 + delta_out * (alpha + gamma)) / (beta + gamma)};
}

ScaleFreeParams ScaleFreeParams::for_exponents(double in_exponent, double out_exponent,
                                               double gamma, double delta_out) {
    if (!(in_exponent > 2.0) || !(out_exponent > 2.0))
        throw Error("scale-free tail exponents must exceed 2");
    ScaleFreeParams p;
    p.gamma = gamma;
    p.delta_out = delta_out;
    const double s = (1.0 + delta_out * (1.0 + gamma)) / (out_exponent - 1.0 + delta_out);
    p.beta = s - gamma;
    p.alpha = 1.0 - s;
    p.delta_in = ((in_exponent - 1.0) * (p.alpha + p.beta) - 1.0) / (p.alpha + p.gamma);
    if (!(p.beta >= 0.0) || !(p.alpha > 0.0) || !(p.delta_in >= 0.0))
        throw Error("no preferential-attachment parameters reach exponents (" +
                    std::to_string(in_exponent) + ", " + std::to_string(out_exponent) +
                    ") with the given gamma and delta_out");
    p.validate();
    return p;
}

ScaleFreeProcess::ScaleFreeProcess(const ScaleFreeParams& params)
    : ScaleFreeProcess(params, 2, {{0, 1}}) {}

ScaleFreeProcess::ScaleFreeProcess(const ScaleFreeParams& params, std::size_t n,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : params_(params), out_degree_(n, 0), in_degree_(n, 0), successors_(n) {
    params_.validate();
    if (edges.empty()) throw Error("scale-free process needs at least one seed edge");
    for (auto [u, v] : edges) {
        if (u >= n || v >= n || u == v) throw Error("scale-free process: invalid seed edge");
        if (has_edge(u, v)) throw Error("scale-free process: duplicate seed edge");
        edges_.emplace_back(u, v);
        ++out_degree_[u];
        ++in_degree_[v];
        successors_[u].push_back(v);
    }
}

bool ScaleFreeProcess::has_edge(std::size_t u, std::size_t v) const {
    const auto& s = successors_[u];
    return std::find(s.begin(), s.end(), v) != s.end();
}

std::size_t ScaleFreeProcess::pick_by_in(Rng& rng) const {
    const double nd = params_.delta_in * static_cast<double>(node_count());
    const double e = static_cast<double>(edges_.size());
    if (uniform01(rng) * (e + nd) < nd) return uniform_index(rng, node_count());
    return edges_[uniform_index(rng, edges_.size())].second;
}

std::size_t ScaleFreeProcess::pick_by_out(Rng& rng) const {
    const double nd = params_.delta_out * static_cast<double>(node_count());
    const double e = static_cast<double>(edges_.size());
    if (uniform01(rng) * (e + nd) < nd) return uniform_index(rng, node_count());
    return edges_[uniform_index(rng, edges_.size())].first;
}

ScaleFreeProcess::Step ScaleFreeProcess::advance(Rng& rng, std::size_t max_redraws) {
    for (std::size_t r = 0; r < max_redraws; ++r) {
        const double u = uniform01(rng);
        const std::size_t fresh = node_count();
        Step step{};
        if (u < params_.alpha) {
            step = {StepKind::new_source, fresh, pick_by_in(rng)};
        } else if (u < params_.alpha + params_.beta) {
            step = {StepKind::internal, pick_by_out(rng), pick_by_in(rng)};
            if (step.source == step.target || has_edge(step.source, step.target)) continue;
        } else {
            step = {StepKind::new_target, pick_by_out(rng), fresh};
        }
        if (step.kind != StepKind::internal) {
            out_degree_.push_back(0);
            in_degree_.push_back(0);
            successors_.emplace_back();
        }
        edges_.emplace_back(step.source, step.target);
        ++out_degree_[step.source];
        ++in_degree_[step.target];
        successors_[step.source].push_back(step.target);
        return step;
    }
    throw Error("scale-free process: " + std::to_string(max_redraws) +
                " consecutive draws produced self-loops or duplicates");
}

WeightedDigraph gen_scale_free(std::size_t n_target, const ScaleFreeParams& params,
                               std::uint64_t seed) {
    if (n_target < 2) throw Error("scale-free graph needs n_target >= 2 (the seed edge)");
    ScaleFreeProcess process(params);
    Rng rng = make_stream(seed, 0);
    const std::size_t step_budget = 1000 * n_target + 1000;
    std::size_t steps = 0;
    while (process.node_count() < n_target) {
        if (++steps > step_budget) throw Error("scale-free process stopped adding nodes");
        process.advance(rng);
    }

    const auto [x_in, x_out] = params.tail_exponents();
    WeightedDigraph g;
    g.n = n_target;
    g.meta = {"scale_free",
              {{"n", double(n_target)},
               {"alpha", params.alpha},
               {"beta", params.beta},
               {"gamma", params.gamma},
               {"delta_in", params.delta_in},
               {"delta_out", params.delta_out},
               {"in_exponent", x_in},
               {"out_exponent", x_out},
               {"weight_scale", params.weight_scale}},
              seed};
    Rng wrng = make_stream(seed, 1);
    g.edges.reserve(process.edges().size());
    for (auto [u, v] : process.edges()) {
        const double mean = params.weight_scale / static_cast<double>(process.out_degree(u));
        g.edges.push_back({u, v, draw_exponential(wrng, mean)});
    }
    return g;
}

WeightedDigraph gen_scale_free(std::size_t n_target, double in_exponent, double out_exponent,
                               std::uint64_t seed) {
    return gen_scale_free(n_target, ScaleFreeParams::for_exponents(in_exponent, out_exponent),
                          seed);
}

// ----------------------------------------------------------------------------
// Core-periphery

void CorePeripherySpec::validate() const {
    if (n < 2) throw Error("core-periphery graph needs n >= 2");
    if (!(core_fraction > 0.0 && core_fraction < 1.0))
        throw Error("core fraction must lie in (0, 1)");
    check_probability(rho_cc, "core-core density");
    check_probability(rho_cp, "core-periphery density");
    check_probability(rho_pc, "periphery-core density");
    check_probability(rho_pp, "periphery-periphery density");
}

std::size_t CorePeripherySpec::core_size() const {
    return static_cast<std::size_t>(std::llround(core_fraction * static_cast<double>(n)));
}

WeightedDigraph gen_core_periphery(const CorePeripherySpec& spec, const WeightSampler& weights,
                                   std::uint64_t seed) {
    spec.validate();
    const std::size_t core = spec.core_size();
    WeightedDigraph g;
    g.n = spec.n;
    g.meta = {"core_periphery",
              {{"n", double(spec.n)},
               {"core_fraction", spec.core_fraction},
               {"core_size", double(core)},
               {"rho_cc", spec.rho_cc},
               {"rho_cp", spec.rho_cp},
               {"rho_pc", spec.rho_pc},
               {"rho_pp", spec.rho_pp},
               {"weight_mean", weights.mean()}},
              seed};
    Rng rng = make_stream(seed, 0);
    for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = 0; j < spec.n; ++j) {
            if (i == j) continue;
            const bool ci = i < core, cj = j < core;
            const double p = ci ? (cj ? spec.rho_cc : spec.rho_cp) : (cj ? spec.rho_pc : spec.rho_pp);
            if (uniform01(rng) < p) g.edges.push_back({i, j, 1.0});
        }
    assign_weights(g, weights, seed);
    return g;
}

// ----------------------------------------------------------------------------
// Random DAG

WeightedDigraph gen_random_dag(std::size_t n, double density, const WeightSampler& weights,
                               std::uint64_t seed) {
    check_probability(density, "DAG density");
    WeightedDigraph g;
    g.n = n;
    g.meta = {"random_dag", {{"n", double(n)}, {"density", density}, {"weight_mean", weights.mean()}},
              seed};
    Rng rng = make_stream(seed, 0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (uniform01(rng) < density) g.edges.push_back({order[a], order[b], 1.0});
    assign_weights(g, weights, seed);
    return g;
}

}  // namespace levnet
