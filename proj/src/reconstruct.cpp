#include "levnet/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace levnet {

RasProblem RasProblem::from_sheets(std::span<const BalanceSheet> sheets) {
    RasProblem p;
    p.n = sheets.size();
    p.support.assign(p.n * p.n, 0);
    for (const auto& s : sheets) {
        p.row_targets.push_back(s.interbank_assets);
        p.col_targets.push_back(s.interbank_liabilities);
    }
    return p;
}

std::size_t RasProblem::support_size() const {
    return static_cast<std::size_t>(std::count(support.begin(), support.end(), char{1}));
}

void RasProblem::check() const {
    if (support.size() != n * n || row_targets.size() != n || col_targets.size() != n)
        throw RasError("RAS problem dimensions do not match n = " + std::to_string(n), 0.0, 0);
    if (!(tol > 0.0)) throw RasError("RAS tolerance must be positive", 0.0, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (support[i * n + i]) throw RasError("RAS support has a self-loop at bank " + std::to_string(i), 0.0, 0);
        if (!(row_targets[i] >= 0.0) || !std::isfinite(row_targets[i]) || !(col_targets[i] >= 0.0) ||
            !std::isfinite(col_targets[i]))
            throw RasError("RAS marginals of bank " + std::to_string(i) + " must be finite and >= 0",
                           0.0, 0);
    }
    const double rows = std::accumulate(row_targets.begin(), row_targets.end(), 0.0);
    const double cols = std::accumulate(col_targets.begin(), col_targets.end(), 0.0);
    if (std::abs(rows - cols) > 1e-6 * std::max(rows, cols))
        throw RasError("RAS marginals are not conserved: total lending " + std::to_string(rows) +
                           " vs total borrowing " + std::to_string(cols),
                       std::abs(rows - cols) / std::max(rows, cols), 0);

    for (std::size_t i = 0; i < n; ++i) {
        if (row_targets[i] > 0.0) {
            bool any = false;
            for (std::size_t j = 0; j < n && !any; ++j) any = supported(i, j) && col_targets[j] > 0.0;
            if (!any)
                throw RasError("RAS infeasible: bank " + std::to_string(i) +
                                   " lends but has no supported edge to a borrowing bank",
                               1.0, 0);
        }
        if (col_targets[i] > 0.0) {
            bool any = false;
            for (std::size_t k = 0; k < n && !any; ++k) any = supported(k, i) && row_targets[k] > 0.0;
            if (!any)
                throw RasError("RAS infeasible: bank " + std::to_string(i) +
                                   " borrows but has no supported edge from a lending bank",
                               1.0, 0);
        }
    }
}

double marginal_residual(const RasProblem& problem, const SquareMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < problem.n; ++i) {
        const double r = m.row_sum(i), c = m.column_sum(i);
        const double tr = problem.row_targets[i], tc = problem.col_targets[i];
        worst = std::max(worst, tr > 0.0 ? std::abs(r - tr) / tr : (r == 0.0 ? 0.0 : INFINITY));
        worst = std::max(worst, tc > 0.0 ? std::abs(c - tc) / tc : (c == 0.0 ? 0.0 : INFINITY));
    }
    return worst;
}

RasResult ras_balance(const RasProblem& problem, SquareMatrix start) {
    problem.check();
    const std::size_t n = problem.n;
    if (start.size() != n) throw RasError("RAS start has the wrong dimension", 0.0, 0);
    const auto& rt = problem.row_targets;
    const auto& ct = problem.col_targets;

    // Active entries: supported, in a row that lends and a column that
    // borrows. Everything else is exactly zero.
    std::vector<std::vector<std::size_t>> row_cols(n), col_rows(n);
    SquareMatrix x(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rt[i] > 0.0)) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (!problem.supported(i, j) || !(ct[j] > 0.0)) continue;
            const double v = start(i, j);
            if (!(v > 0.0) || !std::isfinite(v))
                throw RasError("RAS start must be positive on the active support at (" +
                                   std::to_string(i) + ", " + std::to_string(j) + ")",
                               0.0, 0);
            x(i, j) = v;
            row_cols[i].push_back(j);
            col_rows[j].push_back(i);
        }
    }

    RasResult result;
    std::vector<double> colsum(n);
    for (std::size_t sweep = 1; sweep <= problem.max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            if (row_cols[i].empty()) continue;
            auto row = x.row(i);
            double s = 0.0;
            for (auto j : row_cols[i]) s += row[j];
            const double f = rt[i] / s;
            for (auto j : row_cols[i]) row[j] *= f;
        }
        std::fill(colsum.begin(), colsum.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = x.row(i);
            for (auto j : row_cols[i]) colsum[j] += row[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (col_rows[j].empty()) continue;
            const double f = ct[j] / colsum[j];
            for (auto i : col_rows[j]) x(i, j) *= f;
        }

        double worst = 0.0, l1 = 0.0;
        std::fill(colsum.begin(), colsum.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = x.row(i);
            double s = 0.0;
            for (auto j : row_cols[i]) {
                s += row[j];
                colsum[j] += row[j];
            }
            l1 += std::abs(s - rt[i]);
            if (rt[i] > 0.0) worst = std::max(worst, std::abs(s - rt[i]) / rt[i]);
        }
        for (std::size_t j = 0; j < n; ++j)
            if (ct[j] > 0.0) worst = std::max(worst, std::abs(colsum[j] - ct[j]) / ct[j]);
        if (!std::isfinite(worst))
            throw RasError("RAS produced non-finite entries at sweep " + std::to_string(sweep),
                           worst, sweep);
        result.l1_history.push_back(l1);
        result.residual = worst;
        result.sweeps = sweep;
        if (worst <= problem.tol) {
            result.matrix = std::move(x);
            return result;
        }
    }
    throw RasError("RAS did not converge in " + std::to_string(problem.max_sweeps) +
                       " sweeps; worst marginal residual " + std::to_string(result.residual),
                   result.residual, result.sweeps);
}

RasResult ras_balance(const RasProblem& problem) {
    SquareMatrix start(problem.n);
    for (std::size_t i = 0; i < problem.n; ++i)
        for (std::size_t j = 0; j < problem.n; ++j)
            if (problem.support.size() == problem.n * problem.n && problem.supported(i, j))
                start(i, j) = 1.0;
    return ras_balance(problem, std::move(start));
}

RasResult rebalance_after_edge(const SquareMatrix& prev, std::pair<std::size_t, std::size_t> new_edge,
                               RasProblem& problem) {
    const std::size_t n = problem.n;
    const auto [ni, nj] = new_edge;
    if (prev.size() != n) throw RasError("rebalance: previous matrix has the wrong dimension", 0.0, 0);
    if (ni >= n || nj >= n || ni == nj)
        throw RasError("rebalance: invalid new edge " + std::to_string(ni) + " -> " + std::to_string(nj),
                       0.0, 0);
    if (problem.supported(ni, nj))
        throw RasError("rebalance: edge " + std::to_string(ni) + " -> " + std::to_string(nj) +
                           " is already in the support",
                       0.0, 0);

    // Factorise prev = r_i c_j over its positive entries, one connected
    // component of the bipartite row/column graph at a time.
    std::vector<std::vector<std::size_t>> row_cols(n), col_rows(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (problem.supported(i, j) && prev(i, j) > 0.0) {
                row_cols[i].push_back(j);
                col_rows[j].push_back(i);
            }
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<double> r(n, 0.0), c(n, 0.0);
    std::vector<std::size_t> row_comp(n, none), col_comp(n, none);
    std::size_t comp = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (row_comp[root] != none || row_cols[root].empty()) continue;
        r[root] = 1.0;
        row_comp[root] = comp;
        std::deque<std::pair<bool, std::size_t>> queue{{true, root}};
        while (!queue.empty()) {
            auto [is_row, v] = queue.front();
            queue.pop_front();
            if (is_row) {
                for (auto j : row_cols[v])
                    if (col_comp[j] == none) {
                        col_comp[j] = comp;
                        c[j] = prev(v, j) / r[v];
                        queue.emplace_back(false, j);
                    }
            } else {
                for (auto i : col_rows[v])
                    if (row_comp[i] == none) {
                        row_comp[i] = comp;
                        r[i] = prev(i, v) / c[v];
                        queue.emplace_back(true, i);
                    }
            }
        }
        ++comp;
    }

    SquareMatrix start(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (problem.supported(i, j)) start(i, j) = prev(i, j);
    double seed = std::min(problem.row_targets[ni], problem.col_targets[nj]);
    if (row_comp[ni] != none && row_comp[ni] == col_comp[nj]) seed = r[ni] * c[nj];
    start(ni, nj) = seed;

    problem.set_support(ni, nj);
    try {
        return ras_balance(problem, std::move(start));
    } catch (...) {
        problem.set_support(ni, nj, false);
        throw;
    }
}

}  // namespace levnet
