#pragma once

// Synthetic balance sheets standing in for proprietary bank data.

#include "levnet/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace levnet {

/// Equities are log-normal, gross interbank volume is equity times a
/// log-normal factor and is split into lending and borrowing by a lender
/// share s_i. Lending is then rescaled so total lending equals total
/// borrowing, and both sides are scaled together so that the mean
/// interbank leverage (1/n) sum_i a_i / E_i hits the target exactly.
/// External liabilities are ext_liability_ratio * E_i (raised when needed)
/// and external assets close the balance-sheet identity.
struct SyntheticSheetOptions {
    std::size_t n = 50;
    double target_mean_leverage = 2.0;
    double equity_log_sd = 1.0;
    double volume_log_sd = 0.5;
    double ext_liability_ratio = 10.0;
};

/// Lender shares: bank 0 only lends (s = 1), bank n-1 only borrows (s = 0)
/// and the rest are uniform on (0, 1). The pure lender and pure borrower
/// are what an acyclic exposure network needs: a source and a sink. Draws
/// with no acyclic funding order (see below) are redrawn.
std::vector<BalanceSheet> synthetic_balance_sheets(const SyntheticSheetOptions& options,
                                                   std::uint64_t seed);

/// As above, with lending allowed only where can_lend[i] and borrowing only
/// where can_borrow[i] (e.g. from out- and in-degrees of a fixed support).
/// Banks allowed both get a uniform share on (0.2, 0.8).
std::vector<BalanceSheet> synthetic_balance_sheets(const SyntheticSheetOptions& options,
                                                   std::uint64_t seed,
                                                   std::span<const char> can_lend,
                                                   std::span<const char> can_borrow);

/// Marginals of one random exposure draw on a row-major n x n support
/// (log-normal around the lender's equity), so RAS on that support is
/// always feasible.
std::vector<BalanceSheet> synthetic_balance_sheets_on_support(const SyntheticSheetOptions& options,
                                                              std::uint64_t seed,
                                                              std::span<const char> support);

/// An order of the banks in which each bank's interbank borrowing is at
/// most the net lending of the banks before it, so exposures can run
/// along the order; empty if none exists. Such an order exists iff the
/// sheets admit an acyclic exposure network.
std::vector<std::size_t> acyclic_funding_order(std::span<const BalanceSheet> sheets,
                                               double rel_slack = 1e-12);

/// a_i / (a_i + b_i), or 0.5 for a bank with no interbank business.
std::vector<double> lender_shares(std::span<const BalanceSheet> sheets);

}  // namespace levnet
