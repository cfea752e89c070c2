#include "levnet/pathways.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

namespace levnet {

std::string to_string(CrossingEvent::Direction d) {
    return d == CrossingEvent::Direction::up ? "up" : "down";
}

std::vector<CrossingEvent> detect_crossings(std::span<const TrajectoryRecord> records) {
    std::vector<CrossingEvent> events;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double prev = records[k - 1].lambda_max, cur = records[k].lambda_max;
        if (prev <= 1.0 && cur > 1.0)
            events.push_back({records[k].step, CrossingEvent::Direction::up, records[k].edge_density});
        else if (prev > 1.0 && cur <= 1.0)
            events.push_back({records[k].step, CrossingEvent::Direction::down, records[k].edge_density});
    }
    return events;
}

PathwayCheck check_pathway(std::span<const TrajectoryRecord> records) {
    PathwayCheck c;
    if (records.empty()) return c;
    c.starts_stable = records.front().regime.regime == Regime::stable;
    const double l0 = records.front().avg_leverage;
    for (const auto& r : records) {
        c.reaches_unstable = c.reaches_unstable || r.lambda_max > 1.0;
        const double drift = l0 != 0.0 ? std::abs(r.avg_leverage - l0) / std::abs(l0)
                                        : std::abs(r.avg_leverage);
        c.max_leverage_drift = std::max(c.max_leverage_drift, drift);
    }
    return c;
}

namespace {

// Spectral radius of the raw matrix and the label that goes with it.
struct Assessment {
    double lambda_hat = 0.0;
    RegimeLabel label;
    std::vector<double> vector;
};

Assessment assess(const SparseMatrix& leverage, const StabilitySettings& s,
                  std::span<const double> warm = {}) {
    if (!(s.recovery >= 0.0 && s.recovery <= 1.0))
        throw Error("recovery rate " + std::to_string(s.recovery) + " is outside [0, 1]");
    PowerOptions po;
    po.tol = std::min(s.tol, 1e-10);
    po.start = warm;
    auto pr = perron(leverage, po);
    Assessment a;
    // Uniform recovery and a common curve scale every column alike.
    a.lambda_hat = (1.0 - s.recovery) * pr.radius;
    a.label = classify_radii(a.lambda_hat, s.curve.derivative_at_zero() * a.lambda_hat, s.tol);
    a.vector = std::move(pr.vector);
    return a;
}

TrajectoryRecord make_record(std::size_t step, std::size_t n, std::size_t edges, double total,
                             const Assessment& a, std::uint64_t seed) {
    TrajectoryRecord r;
    r.step = step;
    r.n = n;
    r.edge_density =
        n > 1 ? static_cast<double>(edges) / (static_cast<double>(n) * static_cast<double>(n - 1)) : 0.0;
    r.avg_leverage = n > 0 ? total / static_cast<double>(n) : 0.0;
    r.lambda_max = a.lambda_hat;
    r.regime = a.label;
    r.seed = seed;
    return r;
}

// Out-adjacency with weights; the mutable network of the growth pathways.
struct Network {
    std::vector<std::vector<std::pair<std::size_t, double>>> out;

    std::size_t size() const { return out.size(); }

    static Network from(const WeightedDigraph& g) {
        Network net;
        net.out.resize(g.n);
        for (const auto& e : g.edges) net.out[e.source].emplace_back(e.target, e.weight);
        return net;
    }

    std::size_t add_node() {
        out.emplace_back();
        return out.size() - 1;
    }

    double row_sum(std::size_t i) const {
        double s = 0.0;
        for (const auto& [j, w] : out[i]) s += w;
        return s;
    }

    double total() const {
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += row_sum(i);
        return s;
    }

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& row : out) e += row.size();
        return e;
    }

    void scale_row(std::size_t i, double f) {
        for (auto& entry : out[i]) entry.second *= f;
    }

    void scale_all(double f) {
        for (std::size_t i = 0; i < out.size(); ++i) scale_row(i, f);
    }

    SparseMatrix sparse() const {
        std::vector<std::pair<std::size_t, std::size_t>> index;
        std::vector<double> w;
        for (std::size_t i = 0; i < out.size(); ++i)
            for (const auto& [j, x] : out[i]) {
                index.emplace_back(i, j);
                w.push_back(x);
            }
        return SparseMatrix::from_triplets(out.size(), std::move(index), std::move(w));
    }

    WeightedDigraph digraph() const {
        WeightedDigraph g;
        g.n = out.size();
        for (std::size_t i = 0; i < out.size(); ++i)
            for (const auto& [j, w] : out[i]) g.edges.push_back({i, j, w});
        return g;
    }
};

TrajectoryRecord record_network(std::size_t step, const Network& net, const StabilitySettings& s,
                                std::uint64_t seed, Assessment* keep = nullptr) {
    auto a = assess(net.sparse(), s);
    auto r = make_record(step, net.size(), net.edge_count(), net.total(), a, seed);
    if (keep) *keep = std::move(a);
    return r;
}

// Draws starting networks until one has average leverage above one and
// is stable.
template <class Make>
Network admissible_start(Make make, std::size_t max_attempts, const StabilitySettings& s,
                         std::uint64_t seed, std::size_t& attempts, const char* what) {
    Rng master = make_stream(seed, 2);
    for (attempts = 1; attempts <= max_attempts; ++attempts) {
        const std::uint64_t draw = master();
        Network net;
        try {
            net = Network::from(make(draw));
        } catch (const Error&) {
            continue;
        }
        const double ell = net.total() / static_cast<double>(net.size());
        if (!(ell > 1.0)) continue;
        if (assess(net.sparse(), s).label.regime == Regime::stable) return net;
    }
    attempts = max_attempts;
    throw Error(std::string(what) + ": no stable starting network with average leverage above 1 in " +
                std::to_string(max_attempts) + " attempts");
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

void finish(PathwayRun& run) { run.crossings = detect_crossings(run.records); }

// Gives every donor a distinct out-neighbour outside the donor set (a
// bipartite matching by augmenting paths over shuffled adjacency, so any
// matching may come out). slots[m] indexes the chosen entry of donor m's
// out-list.
bool match_successors(const Network& net, const std::vector<std::size_t>& donors, Rng& rng,
                      std::vector<std::size_t>& slots) {
    const std::size_t k = donors.size();
    std::vector<std::vector<std::size_t>> options(k);
    for (std::size_t m = 0; m < k; ++m) {
        const auto& row = net.out[donors[m]];
        for (std::size_t s = 0; s < row.size(); ++s)
            if (std::find(donors.begin(), donors.end(), row[s].first) == donors.end())
                options[m].push_back(s);
        if (options[m].empty()) return false;
        std::shuffle(options[m].begin(), options[m].end(), rng);
    }
    std::map<std::size_t, std::size_t> owner;  // successor -> donor index
    slots.assign(k, 0);
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t m) {
        for (std::size_t s : options[m]) {
            const std::size_t l = net.out[donors[m]][s].first;
            if (seen[l]) continue;
            seen[l] = 1;
            auto it = owner.find(l);
            if (it == owner.end() || augment(it->second)) {
                owner[l] = m;
                slots[m] = s;
                return true;
            }
        }
        return false;
    };
    for (std::size_t m = 0; m < k; ++m) {
        seen.assign(net.size(), 0);
        if (!augment(m)) return false;
    }
    return true;
}

}  // namespace

// ----------------------------------------------------------------------------
// Erdos-Renyi growth

PathwayRun grow_er_pathway(const ErPathwayOptions& o, std::uint64_t seed) {
    if (!(o.p >= 0.0 && o.p <= 1.0)) throw Error("ER pathway: p must lie in [0, 1]");
    if (o.n0 < 2) throw Error("ER pathway: n0 must be at least 2");
    const auto law = WeightSampler::exponential(o.weight_mean);

    PathwayRun run;
    Network net = admissible_start(
        [&](std::uint64_t s) { return gen_erdos_renyi(o.n0, o.p, law, s); }, o.max_initial_attempts,
        o.stability, seed, run.initial_attempts, "ER pathway");
    const double ell = net.total() / static_cast<double>(net.size());
    run.pinned_leverage = ell;

    run.records.push_back(record_network(0, net, o.stability, seed));
    if (o.observer) o.observer(0, net.digraph());

    Rng rng = make_stream(seed, 3);
    std::bernoulli_distribution coin(o.p);
    for (std::size_t step = 1; step <= o.nodes_to_add; ++step) {
        const std::size_t n = net.size();

        // (i)-(iii) out-edges of the new node; an empty set is redrawn so
        // the node can carry the pinned leverage.
        std::vector<std::size_t> outs;
        for (int tries = 0; tries < 1000 && outs.empty(); ++tries)
            for (std::size_t j = 0; j < n; ++j)
                if (coin(rng)) outs.push_back(j);
        std::vector<double> out_w;
        for (std::size_t m = 0; m < outs.size(); ++m)
            out_w.push_back(draw_exponential(rng, o.weight_mean) * static_cast<double>(n - 1) /
                            static_cast<double>(n));

        // (iv)-(v) in-edges.
        std::vector<std::pair<std::size_t, double>> ins;
        for (std::size_t j = 0; j < n; ++j)
            if (coin(rng) && !net.out[j].empty()) ins.emplace_back(j, 0.0);
        for (auto& in : ins) in.second = draw_exponential(rng, o.weight_mean);

        const std::size_t i = net.add_node();
        for (std::size_t m = 0; m < outs.size(); ++m) net.out[i].emplace_back(outs[m], out_w[m]);
        // (vi) lenders to i keep their leverage.
        for (const auto& [j, w] : ins) {
            const double old = net.row_sum(j);
            net.out[j].emplace_back(i, w);
            net.scale_row(j, old / (old + w));
        }
        // Pin the new node at the average so the average cannot drift.
        const double s = net.row_sum(i);
        if (s > 0.0) net.scale_row(i, ell / s);

        run.records.push_back(record_network(step, net, o.stability, seed));
        if (o.observer) o.observer(step, net.digraph());
        if (o.stop_when_unstable && run.records.back().lambda_max > 1.0) break;
    }
    finish(run);
    return run;
}

// ----------------------------------------------------------------------------
// Regular growth

PathwayRun grow_rrg_pathway(const RrgPathwayOptions& o, std::uint64_t seed) {
    const auto law = WeightSampler::exponential(o.weight_mean);
    RegularOptions ro;
    ro.reciprocity_threshold = o.reciprocity_threshold;

    PathwayRun run;
    Network net = admissible_start(
        [&](std::uint64_t s) { return gen_regular_random(o.n0, o.k, law, s, ro); },
        o.max_initial_attempts, o.stability, seed, run.initial_attempts, "regular pathway");
    const double ell = net.total() / static_cast<double>(net.size());
    run.pinned_leverage = ell;

    run.records.push_back(record_network(0, net, o.stability, seed));
    if (o.observer) o.observer(0, net.digraph());

    Rng rng = make_stream(seed, 3);
    const std::size_t k = o.k;
    std::vector<std::size_t> pool;
    for (std::size_t step = 1; step <= o.nodes_to_add; ++step) {
        const std::size_t n = net.size();
        pool.resize(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});

        std::vector<std::size_t> donors, slots, targets;
        bool found = false;
        for (std::size_t retry = 0; retry < o.max_insertion_retries && !found; ++retry) {
            // k distinct donors by partial Fisher-Yates.
            for (std::size_t m = 0; m < k; ++m) std::swap(pool[m], pool[m + uniform_index(rng, n - m)]);
            donors.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
            found = match_successors(net, donors, rng, slots);
        }
        if (!found)
            throw Error("regular pathway: no donor set with distinct outside successors after " +
                        std::to_string(o.max_insertion_retries) + " retries at step " +
                        std::to_string(step));

        // Random partition of [0, ell] into k positive pieces.
        std::vector<double> pieces;
        do {
            std::vector<double> cuts(k - 1);
            for (auto& c : cuts) c = ell * uniform01(rng);
            std::sort(cuts.begin(), cuts.end());
            pieces.assign(k, 0.0);
            double prev = 0.0, used = 0.0;
            for (std::size_t m = 0; m + 1 < k; ++m) {
                pieces[m] = cuts[m] - prev;
                prev = cuts[m];
                used += pieces[m];
            }
            pieces[k - 1] = ell - used;
        } while (std::any_of(pieces.begin(), pieces.end(), [](double w) { return !(w > 0.0); }));

        targets.clear();
        for (std::size_t m = 0; m < k; ++m) targets.push_back(net.out[donors[m]][slots[m]].first);
        const std::size_t i = net.add_node();
        for (std::size_t m = 0; m < k; ++m) {
            auto& entry = net.out[donors[m]][slots[m]];
            entry.first = i;  // j_m -> l_m becomes j_m -> i with the same weight
            net.out[i].emplace_back(targets[m], pieces[m]);
        }

        run.records.push_back(record_network(step, net, o.stability, seed));
        if (o.observer) o.observer(step, net.digraph());
        if (o.stop_when_unstable && run.records.back().lambda_max > 1.0) break;
    }
    finish(run);
    return run;
}

// ----------------------------------------------------------------------------
// Scale-free growth

PathwayRun grow_sf_pathway(const SfPathwayOptions& o, std::uint64_t seed) {
    o.params.validate();
    PathwayRun run;
    Network net = admissible_start([&](std::uint64_t s) { return gen_scale_free(o.n0, o.params, s); },
                                   o.max_initial_attempts, o.stability, seed, run.initial_attempts,
                                   "scale-free pathway");
    const double ell = net.total() / static_cast<double>(net.size());
    run.pinned_leverage = ell;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (const auto& [j, w] : net.out[i]) pairs.emplace_back(i, j);
    ScaleFreeProcess process(o.params, net.size(), pairs);

    run.records.push_back(record_network(0, net, o.stability, seed));
    if (o.observer) o.observer(0, net.digraph());

    Rng rng = make_stream(seed, 3);
    std::size_t added = 0, idle = 0;
    while (added < o.nodes_to_add) {
        const auto ev = process.advance(rng);
        const bool new_node = ev.kind != ScaleFreeProcess::StepKind::internal;
        if (new_node) net.add_node();

        const double k_new = static_cast<double>(process.out_degree(ev.source));
        if (k_new > 1.0) net.scale_row(ev.source, (k_new - 1.0) / k_new);
        net.out[ev.source].emplace_back(ev.target, draw_exponential(rng, o.params.weight_scale / k_new));
        net.scale_all(ell / (net.total() / static_cast<double>(net.size())));

        if (!new_node) {
            if (++idle > o.max_idle_steps)
                throw Error("scale-free pathway: " + std::to_string(o.max_idle_steps) +
                            " consecutive growth events added no node");
            continue;
        }
        idle = 0;
        ++added;
        run.records.push_back(record_network(added, net, o.stability, seed));
        if (o.observer) o.observer(added, net.digraph());
        if (o.stop_when_unstable && run.records.back().lambda_max > 1.0) break;
    }
    finish(run);
    return run;
}

// ----------------------------------------------------------------------------
// Core-periphery, travelled backwards

namespace {

std::size_t stochastic_round(double x, Rng& rng) {
    const double f = std::floor(x);
    return static_cast<std::size_t>(f) + (uniform01(rng) < x - f ? 1 : 0);
}

// Grows the unweighted block model from n0 to spec.n nodes; adjacency is
// row-major over the final size.
std::vector<char> grow_core_periphery(const CpPathwayOptions& o, std::uint64_t seed) {
    const std::size_t N = o.spec.n;
    CorePeripherySpec first = o.spec;
    first.n = o.n0;
    const auto g0 = gen_core_periphery(first, WeightSampler::constant(1.0), seed);

    std::vector<char> adj(N * N, 0);
    for (const auto& e : g0.edges) adj[e.source * N + e.target] = 1;
    std::vector<std::size_t> core, periphery;
    for (std::size_t v = 0; v < o.n0; ++v) (v < first.core_size() ? core : periphery).push_back(v);

    Rng rng = make_stream(seed, 3);
    using Pair = std::pair<std::size_t, std::size_t>;
    auto add_some = [&](std::vector<Pair> candidates, double expected) {
        const std::size_t m = std::min(stochastic_round(expected, rng), candidates.size());
        std::shuffle(candidates.begin(), candidates.end(), rng);
        for (std::size_t c = 0; c < m; ++c) adj[candidates[c].first * N + candidates[c].second] = 1;
    };

    for (std::size_t v = o.n0; v < N; ++v) {
        const bool to_core = uniform01(rng) < o.spec.core_fraction;
        const double nc = static_cast<double>(core.size()), np = static_cast<double>(periphery.size());
        std::vector<Pair> both, outward, inward;
        if (to_core) {
            for (auto c : core) {
                both.emplace_back(v, c);
                both.emplace_back(c, v);
            }
            for (auto p : periphery) {
                outward.emplace_back(v, p);
                inward.emplace_back(p, v);
            }
            add_some(std::move(both), 2.0 * o.spec.rho_cc * nc);
            add_some(std::move(outward), o.spec.rho_cp * np);
            add_some(std::move(inward), o.spec.rho_pc * np);
            core.push_back(v);
        } else {
            for (auto p : periphery) {
                both.emplace_back(v, p);
                both.emplace_back(p, v);
            }
            for (auto c : core) {
                inward.emplace_back(c, v);
                outward.emplace_back(v, c);
            }
            add_some(std::move(both), 2.0 * o.spec.rho_pp * np);
            add_some(std::move(inward), o.spec.rho_cp * nc);
            add_some(std::move(outward), o.spec.rho_pc * nc);
            periphery.push_back(v);
        }
    }
    return adj;
}

TrajectoryRecord record_dense(std::size_t step, const SquareMatrix& lev, const StabilitySettings& s,
                              std::uint64_t seed) {
    auto a = assess(SparseMatrix::from_dense(lev), s);
    return make_record(step, lev.size(), lev.nonzeros(), lev.total(), a, seed);
}

SquareMatrix leading_block(const SquareMatrix& m, std::size_t k) {
    SquareMatrix out(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace

PathwayRun shrink_cp_pathway(const CpPathwayOptions& o, std::uint64_t seed) {
    o.spec.validate();
    const std::size_t N = o.spec.n;
    if (o.n0 < 2 || o.n0 > N) throw Error("core-periphery pathway: need 2 <= n0 <= n");
    SyntheticSheetOptions sheet_opts = o.sheets;
    sheet_opts.n = N;

    PathwayRun run;
    Rng master = make_stream(seed, 2);
    SquareMatrix lev;
    for (run.initial_attempts = 1;; ++run.initial_attempts) {
        if (run.initial_attempts > o.max_attempts)
            throw Error("core-periphery pathway: no unstable RAS-weighted network in " +
                        std::to_string(o.max_attempts) + " attempts");
        const std::uint64_t draw = master();
        const auto adj = grow_core_periphery(o, draw);
        std::vector<BalanceSheet> sheets;
        RasResult ras;
        try {
            sheets = synthetic_balance_sheets_on_support(sheet_opts, draw, adj);
            RasProblem problem = RasProblem::from_sheets(sheets);
            problem.support = adj;
            ras = ras_balance(problem);
        } catch (const Error&) {
            continue;
        }
        lev = build_leverage(ras.exposures(), sheets);
        if (assess(SparseMatrix::from_dense(lev), o.stability).lambda_hat > 1.0) break;
    }

    const double ell = average_leverage(lev);
    run.pinned_leverage = ell;
    run.records.push_back(record_dense(0, lev, o.stability, seed));
    if (o.observer) o.observer(0, WeightedDigraph::from_matrix(lev));

    for (std::size_t m = N - 1, step = 1; m >= o.n0; --m, ++step) {
        lev = leading_block(lev, m);
        const double cur = average_leverage(lev);
        if (!(cur > 0.0)) break;  // nothing left to rescale
        lev *= ell / cur;
        run.records.push_back(record_dense(step, lev, o.stability, seed));
        if (o.observer) o.observer(step, WeightedDigraph::from_matrix(lev));
        if (o.stop_when_stable && run.records.back().lambda_max < 1.0) break;
        if (m == 0) break;
    }
    finish(run);
    return run;
}

// ----------------------------------------------------------------------------
// Edge addition

namespace {

SquareMatrix leverage_of(const SquareMatrix& exposures, std::span<const BalanceSheet> sheets) {
    SquareMatrix lev = exposures;
    for (std::size_t i = 0; i < lev.size(); ++i) {
        const double e = sheets[i].equity;
        for (auto& x : lev.row(i)) x /= e;
    }
    return lev;
}

}  // namespace

EdgeAdditionRun edge_addition_trajectory(std::span<const BalanceSheet> sheets,
                                         const EdgeAdditionOptions& o, std::uint64_t seed) {
    const std::size_t n = sheets.size();
    if (n < 2) throw Error("edge addition needs at least two banks");
    if (auto issues = check_consistency(sheets); !issues.empty())
        throw Error("inconsistent balance sheet: " + issues.front());
    if (!(o.dag_density >= 0.0 && o.dag_density <= 1.0))
        throw Error("edge addition: DAG density must lie in [0, 1]");

    const auto shares = lender_shares(sheets);
    std::vector<double> lend(n), borrow(n);
    for (std::size_t i = 0; i < n; ++i) {
        lend[i] = sheets[i].interbank_assets;
        borrow[i] = sheets[i].interbank_liabilities;
    }

    const double slack = 1e-12 * std::accumulate(lend.begin(), lend.end(), 0.0);

    Rng rng = make_stream(seed, 6);
    std::normal_distribution<double> noise(0.0, o.order_noise);
    RasProblem problem = RasProblem::from_sheets(sheets);
    problem.tol = o.ras_tol;
    SquareMatrix exposures;

    EdgeAdditionRun run;
    std::size_t dead_ends = 0;
    for (run.dag_attempts = 1;; ++run.dag_attempts) {
        if (run.dag_attempts > o.max_dag_attempts)
            throw Error("edge addition: no RAS-feasible DAG in " + std::to_string(o.max_dag_attempts) +
                        " attempts");
        std::vector<double> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = shares[i] + (o.order_noise > 0.0 ? noise(rng) : 0.0);
        std::vector<std::size_t> pending(n);
        std::iota(pending.begin(), pending.end(), std::size_t{0});
        std::stable_sort(pending.begin(), pending.end(), [&](auto x, auto y) { return key[x] > key[y]; });

        // Greedy order: the next bank is the highest-keyed one whose
        // borrowing the earlier banks can still cover.
        std::vector<std::size_t> order;
        double surplus = 0.0;
        while (!pending.empty()) {
            auto it = std::find_if(pending.begin(), pending.end(),
                                   [&](std::size_t v) { return borrow[v] <= surplus + slack; });
            if (it == pending.end()) break;
            surplus += lend[*it] - borrow[*it];
            order.push_back(*it);
            pending.erase(it);
        }
        if (!pending.empty()) {
            // The noisy keys dead-ended. Redraw them a while, then fall back
            // to the canonical order, which fails only when no acyclic
            // network fits the sheets.
            if (++dead_ends < 100) continue;
            order = acyclic_funding_order(sheets);
            if (order.empty()) throw Error("edge addition: the sheets admit no acyclic exposure network");
        }

        problem.support.assign(n * n, 0);
        // First-in-first-out allocation of lending to later borrowers: one
        // feasible flow, so the support always admits the marginals.
        std::deque<std::pair<std::size_t, double>> queue;
        for (std::size_t v : order) {
            double need = borrow[v];
            while (need > slack && !queue.empty()) {
                auto& [u, left] = queue.front();
                problem.set_support(u, v);
                const double take = std::min(left, need);
                need -= take;
                left -= take;
                if (left <= slack) queue.pop_front();
            }
            if (lend[v] > 0.0) queue.emplace_back(v, lend[v]);
        }
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                if (uniform01(rng) < o.dag_density) problem.set_support(order[x], order[y]);

        problem.max_sweeps = o.initial_ras_sweeps;
        try {
            exposures = ras_balance(problem).matrix;
        } catch (const RasError&) {
            continue;
        }
        break;
    }
    problem.max_sweeps = o.ras_max_sweeps;

    std::vector<std::pair<std::size_t, std::size_t>> absent;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !problem.supported(i, j)) absent.emplace_back(i, j);
    std::shuffle(absent.begin(), absent.end(), rng);

    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    auto emit = [&](std::size_t step, const SquareMatrix& lev, const Assessment& a) {
        TrajectoryRecord r = make_record(step, n, 0, lev.total(), a, seed);
        r.edge_density = static_cast<double>(problem.support_size()) / pairs;
        run.records.push_back(r);
        if (o.observer) o.observer(step, lev);
    };

    SquareMatrix lev = leverage_of(exposures, sheets);
    Assessment a = assess(SparseMatrix::from_dense(lev), o.stability);
    emit(0, lev, a);

    for (std::size_t step = 1; step <= absent.size(); ++step) {
        try {
            exposures = rebalance_after_edge(exposures, absent[step - 1], problem).matrix;
        } catch (const RasError& e) {
            throw Error("edge addition aborted at step " + std::to_string(step) + ": " + e.what());
        }
        lev = leverage_of(exposures, sheets);
        const bool cold = o.cold_restart_every == 0 || step % o.cold_restart_every == 0;
        const std::vector<double> warm = cold ? std::vector<double>{} : std::move(a.vector);
        a = assess(SparseMatrix::from_dense(lev), o.stability, warm);
        emit(step, lev, a);
    }
    run.crossings = detect_crossings(run.records);
    return run;
}

// ----------------------------------------------------------------------------
// Ensemble summary

EnsembleSummary summarize_ensemble(std::span<const std::vector<TrajectoryRecord>> runs,
                                   std::size_t bins) {
    if (bins == 0) throw Error("summarize_ensemble: need at least one bin");
    EnsembleSummary s;
    s.replicas = runs.size();
    std::vector<std::vector<double>> per_bin(bins);
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto events = detect_crossings(runs[r]);
        s.crossing_counts.push_back(events.size());
        for (const auto& e : events)
            if (e.direction == CrossingEvent::Direction::up) {
                s.first_crossing_densities.push_back(e.density);
                s.crossing_replicas.push_back(r);
                break;
            }
        for (const auto& rec : runs[r]) {
            auto b = static_cast<std::size_t>(std::floor(rec.edge_density * static_cast<double>(bins)));
            per_bin[std::min(b, bins - 1)].push_back(rec.lambda_max);
        }
    }
    auto quantile = [](const std::vector<double>& sorted, double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    for (std::size_t b = 0; b < bins; ++b) {
        auto& v = per_bin[b];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        EnvelopeBin e;
        e.density_lo = static_cast<double>(b) / static_cast<double>(bins);
        e.density_hi = static_cast<double>(b + 1) / static_cast<double>(bins);
        e.count = v.size();
        e.min = v.front();
        e.max = v.back();
        e.q10 = quantile(v, 0.1);
        e.median = quantile(v, 0.5);
        e.q90 = quantile(v, 0.9);
        s.envelope.push_back(e);
    }
    return s;
}

}  // namespace levnet
