#include "levnet/cycles.hpp"

#include <cmath>

namespace levnet {

namespace {

bool kahn_acyclic(std::size_t n, const std::vector<std::vector<std::size_t>>& succ) {
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& s : succ)
        for (auto v : s) ++indeg[v];
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::size_t seen = 0;
    while (!ready.empty()) {
        const auto u = ready.back();
        ready.pop_back();
        ++seen;
        for (auto v : succ[u])
            if (--indeg[v] == 0) ready.push_back(v);
    }
    return seen == n;
}

std::vector<std::vector<std::size_t>> successors(const SquareMatrix& m) {
    std::vector<std::vector<std::size_t>> succ(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m(i, j) > 0.0) succ[i].push_back(j);
    return succ;
}

}  // namespace

bool is_dag(const WeightedDigraph& g) {
    std::vector<std::vector<std::size_t>> succ(g.n);
    for (const auto& e : g.edges) succ[e.source].push_back(e.target);
    return kahn_acyclic(g.n, succ);
}

bool is_dag(const SquareMatrix& m) { return kahn_acyclic(m.size(), successors(m)); }

std::string to_string(CycleWitness::Kind kind) {
    return kind == CycleWitness::Kind::individual ? "individual" : "combined";
}

CycleReport find_unstable_cycles(const SquareMatrix& m, std::size_t k_max,
                                 const CycleSearchLimits& limits) {
    if (k_max < 1) throw Error("find_unstable_cycles: k_max must be at least 1");
    m.validate();
    CycleReport report;
    const std::size_t n = m.size();

    const auto diagonals = power_diagonals(m, k_max);
    for (std::size_t k = 1; k <= k_max; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (diagonals[k - 1][i] > 1.0)
                report.witnesses.push_back({CycleWitness::Kind::combined, i, k, diagonals[k - 1][i], {}});

    // Simple cycles rooted at their smallest node: depth-first search over
    // nodes larger than the root.
    const auto succ = successors(m);
    std::size_t visits = 0;
    std::vector<char> on_path(n, 0);
    std::vector<std::size_t> path;
    struct Frame {
        std::size_t node;
        std::size_t next;
        double product;
    };
    for (std::size_t root = 0; root < n && !report.truncated; ++root) {
        std::vector<Frame> stack{{root, 0, 1.0}};
        path.assign(1, root);
        on_path[root] = 1;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next == succ[f.node].size()) {
                on_path[f.node] = 0;
                path.pop_back();
                stack.pop_back();
                continue;
            }
            const std::size_t v = succ[f.node][f.next++];
            const double product = f.product * m(f.node, v);
            if (v == root) {
                if (product > 1.0)
                    report.witnesses.push_back(
                        {CycleWitness::Kind::individual, root, path.size(), product, path});
                continue;
            }
            if (v < root || on_path[v] || path.size() >= limits.max_length) continue;
            if (++visits > limits.max_visits) {
                report.truncated = true;
                break;
            }
            on_path[v] = 1;
            path.push_back(v);
            stack.push_back({v, 0, product});
        }
        for (auto v : path) on_path[v] = 0;
    }
    return report;
}

SquareMatrix butterfly(double omega) {
    SquareMatrix m(5);
    for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}}) m(i, j) = omega;
    return m;
}

SquareMatrix core_periphery_example(std::size_t core_size, std::size_t lenders_to_core,
                                    std::size_t borrowers_from_core, double omega) {
    if (core_size < 1) throw Error("core_periphery_example: empty core");
    const std::size_t n = core_size + lenders_to_core + borrowers_from_core;
    SquareMatrix m(n);
    for (std::size_t i = 0; i < core_size; ++i)
        for (std::size_t j = 0; j < core_size; ++j)
            if (i != j) m(i, j) = omega;
    for (std::size_t p = 0; p < lenders_to_core; ++p) m(core_size + p, p % core_size) = omega;
    for (std::size_t p = 0; p < borrowers_from_core; ++p)
        m(p % core_size, core_size + lenders_to_core + p) = omega;
    return m;
}

std::vector<SquareMatrix> build_fig3_sequence(double omega) {
    if (!(omega > 0.0)) throw Error("build_fig3_sequence: omega must be positive");
    using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;
    EdgeList a{{0, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 4}};
    EdgeList b = a;
    b.emplace_back(2, 1);
    EdgeList c = b;
    c.emplace_back(1, 0);
    EdgeList d = c;
    d.emplace_back(1, 4);
    d.emplace_back(0, 3);
    EdgeList e = d;
    e.emplace_back(3, 1);

    std::vector<double> leverage(5, 0.0);
    for (auto [s, t] : a) leverage[s] += omega;

    std::vector<SquareMatrix> out;
    for (const EdgeList* g : {&a, &b, &c, &d, &e}) {
        std::vector<double> degree(5, 0.0);
        for (auto [s, t] : *g) degree[s] += 1.0;
        SquareMatrix m(5);
        for (auto [s, t] : *g) m(s, t) = leverage[s] / degree[s];
        out.push_back(std::move(m));
    }
    return out;
}

double locate_fig3_omega() {
    // Smallest omega at which graph idx reaches radius 1.
    auto threshold = [](std::size_t idx) {
        double lo = 1e-3, hi = 1e3;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (spectral_radius(build_fig3_sequence(mid)[idx]) < 1.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double e_unstable_above = threshold(4);
    const double d_stable_below = threshold(3);
    if (!(e_unstable_above < d_stable_below))
        throw Error("locate_fig3_omega: no omega makes d stable and e unstable");
    return std::sqrt(e_unstable_above * d_stable_below);
}

}  // namespace levnet
