#pragma once

// RAS (iterative proportional fitting) reconstruction of interbank
// exposures on a fixed support from lending and borrowing totals.

#include "levnet/model.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace levnet {

struct RasProblem {
    std::size_t n = 0;
    /// Row-major n x n mask; diagonal entries must be 0.
    std::vector<char> support;
    std::vector<double> row_targets;  // interbank assets (lending)
    std::vector<double> col_targets;  // interbank liabilities (borrowing)
    double tol = 1e-9;
    std::size_t max_sweeps = 100000;

    /// Empty support of the right size for the given marginals.
    static RasProblem from_sheets(std::span<const BalanceSheet> sheets);

    bool supported(std::size_t i, std::size_t j) const { return support[i * n + j] != 0; }
    void set_support(std::size_t i, std::size_t j, bool on = true) { support[i * n + j] = on; }
    std::size_t support_size() const;

    /// Shape, sign and conservation checks, then the structural pre-check:
    /// every bank with positive lending needs a supported edge to some bank
    /// with positive borrowing, and dually. Throws RasError naming the bank.
    void check() const;
};

class RasError : public Error {
public:
    RasError(const std::string& what, double worst_residual, std::size_t sweeps)
        : Error(what), worst_residual_(worst_residual), sweeps_(sweeps) {}
    double worst_residual() const noexcept { return worst_residual_; }
    std::size_t sweeps() const noexcept { return sweeps_; }

private:
    double worst_residual_;
    std::size_t sweeps_;
};

struct RasResult {
    SquareMatrix matrix;
    std::size_t sweeps = 0;
    /// Max over rows and columns of |sum - target| / target (rows and
    /// columns with zero target are exactly zero).
    double residual = 0.0;
    /// L1 distance of the row sums to their targets after each sweep
    /// (columns are exact at that point).
    std::vector<double> l1_history;

    ExposureMatrix exposures() const { return ExposureMatrix(matrix); }
};

/// Cold start: every supported entry starts at 1. Throws RasError when the
/// residual is still above tol after max_sweeps.
RasResult ras_balance(const RasProblem& problem);

/// Runs the scaling from an explicit positive start on the support.
RasResult ras_balance(const RasProblem& problem, SquareMatrix start);

/// Adds new_edge to problem.support and rebalances, warm-started from prev
/// (a converged result on the old support).
///
/// prev is factorised as r_i c_j on its support, and the new entry is
/// seeded with r_i c_j when i and j are linked through the old support, so
/// the start lies in the same scaling family as the cold start and the
/// limit coincides with cold-started RAS on the enlarged support.
RasResult rebalance_after_edge(const SquareMatrix& prev, std::pair<std::size_t, std::size_t> new_edge,
                               RasProblem& problem);

/// Worst relative marginal residual of m against the problem's targets.
double marginal_residual(const RasProblem& problem, const SquareMatrix& m);

}  // namespace levnet
