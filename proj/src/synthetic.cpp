#include "levnet/synthetic.hpp"

#include "levnet/generators.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace levnet {

namespace {

void check_options(const SyntheticSheetOptions& o) {
    if (o.n < 2) throw Error("synthetic sheets need at least two banks");
    if (!(o.target_mean_leverage > 0.0) || !(o.equity_log_sd >= 0.0) || !(o.volume_log_sd >= 0.0) ||
        !(o.ext_liability_ratio >= 0.0))
        throw Error("synthetic sheets: invalid options");
}

// Scales lending and borrowing together to the target mean leverage and
// fills in the external side.
std::vector<BalanceSheet> assemble(const SyntheticSheetOptions& o, const std::vector<double>& equity,
                                   const std::vector<double>& lend, const std::vector<double>& borrow) {
    const std::size_t n = o.n;
    double mean_leverage = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_leverage += lend[i] / equity[i];
    mean_leverage /= static_cast<double>(n);
    if (!(mean_leverage > 0.0)) throw Error("synthetic sheets: nobody lends");
    const double c = o.target_mean_leverage / mean_leverage;

    std::vector<BalanceSheet> sheets(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& s = sheets[i];
        char id[32];
        std::snprintf(id, sizeof id, "B%03zu", i);
        s.bank_id = id;
        s.equity = equity[i];
        s.interbank_assets = c * lend[i];
        s.interbank_liabilities = c * borrow[i];
        s.external_liabilities = o.ext_liability_ratio * equity[i] +
                                 std::max(0.0, s.interbank_assets - s.interbank_liabilities - equity[i]);
        s.external_assets =
            s.equity + s.external_liabilities + s.interbank_liabilities - s.interbank_assets;
    }
    return sheets;
}

// share[i] < 0 marks a bank with no interbank business.
std::vector<BalanceSheet> build(const SyntheticSheetOptions& o, Rng& rng, const std::vector<double>& share) {
    check_options(o);
    const std::size_t n = o.n;
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> equity(n), lend(n), borrow(n);
    for (std::size_t i = 0; i < n; ++i) {
        equity[i] = std::exp(o.equity_log_sd * z(rng));
        const double volume = equity[i] * std::exp(o.volume_log_sd * z(rng));
        if (share[i] < 0.0) continue;
        lend[i] = share[i] * volume;
        borrow[i] = (1.0 - share[i]) * volume;
    }
    const double total_lend = std::accumulate(lend.begin(), lend.end(), 0.0);
    const double total_borrow = std::accumulate(borrow.begin(), borrow.end(), 0.0);
    if (!(total_lend > 0.0) || !(total_borrow > 0.0))
        throw Error("synthetic sheets: nobody lends or nobody borrows");
    for (auto& a : lend) a *= total_borrow / total_lend;
    return assemble(o, equity, lend, borrow);
}

}  // namespace

std::vector<BalanceSheet> synthetic_balance_sheets(const SyntheticSheetOptions& options,
                                                   std::uint64_t seed) {
    check_options(options);
    Rng rng = make_stream(seed, 5);
    Rng sheet_rng = make_stream(seed, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> share(options.n);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (auto& s : share) s = u(rng);
        share.front() = 1.0;
        share.back() = 0.0;
        auto sheets = build(options, sheet_rng, share);
        if (!acyclic_funding_order(sheets).empty()) return sheets;
    }
    throw Error("synthetic sheets: no draw admits an acyclic exposure network");
}

std::vector<BalanceSheet> synthetic_balance_sheets(const SyntheticSheetOptions& options,
                                                   std::uint64_t seed,
                                                   std::span<const char> can_lend,
                                                   std::span<const char> can_borrow) {
    if (can_lend.size() != options.n || can_borrow.size() != options.n)
        throw Error("synthetic sheets: role masks do not match n");
    Rng rng = make_stream(seed, 5);
    std::uniform_real_distribution<double> u(0.2, 0.8);
    std::vector<double> share(options.n);
    for (std::size_t i = 0; i < options.n; ++i) {
        const double draw = u(rng);
        share[i] = can_lend[i] ? (can_borrow[i] ? draw : 1.0) : (can_borrow[i] ? 0.0 : -1.0);
    }
    Rng sheet_rng = make_stream(seed, 4);
    return build(options, sheet_rng, share);
}

std::vector<BalanceSheet> synthetic_balance_sheets_on_support(const SyntheticSheetOptions& options,
                                                              std::uint64_t seed,
                                                              std::span<const char> support) {
    check_options(options);
    const std::size_t n = options.n;
    if (support.size() != n * n) throw Error("synthetic sheets: support is not n x n");
    Rng rng = make_stream(seed, 4);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> equity(n);
    for (auto& e : equity) e = std::exp(options.equity_log_sd * z(rng));

    Rng wrng = make_stream(seed, 5);
    std::vector<double> lend(n, 0.0), borrow(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!support[i * n + j]) continue;
            if (i == j) throw Error("synthetic sheets: support has a diagonal entry");
            const double x = equity[i] * std::exp(options.volume_log_sd * z(wrng));
            lend[i] += x;
            borrow[j] += x;
        }
    return assemble(options, equity, lend, borrow);
}

std::vector<std::size_t> acyclic_funding_order(std::span<const BalanceSheet> sheets, double rel_slack) {
    const std::size_t n = sheets.size();
    double total = 0.0;
    for (const auto& b : sheets) total += b.interbank_assets;
    const double slack = rel_slack * total;
    std::vector<std::size_t> gain, loss;
    for (std::size_t i = 0; i < n; ++i)
        (sheets[i].interbank_assets >= sheets[i].interbank_liabilities ? gain : loss).push_back(i);
    // Net lenders by increasing need, then net borrowers by decreasing
    // lending; an exchange argument shows no other order does better.
    std::stable_sort(gain.begin(), gain.end(), [&](auto x, auto y) {
        return sheets[x].interbank_liabilities < sheets[y].interbank_liabilities;
    });
    std::stable_sort(loss.begin(), loss.end(), [&](auto x, auto y) {
        return sheets[x].interbank_assets > sheets[y].interbank_assets;
    });
    std::vector<std::size_t> order = gain;
    order.insert(order.end(), loss.begin(), loss.end());
    double surplus = 0.0;
    for (auto v : order) {
        if (sheets[v].interbank_liabilities > surplus + slack) return {};
        surplus += sheets[v].interbank_assets - sheets[v].interbank_liabilities;
    }
    return order;
}

std::vector<double> lender_shares(std::span<const BalanceSheet> sheets) {
    std::vector<double> s;
    s.reserve(sheets.size());
    for (const auto& b : sheets) {
        const double v = b.interbank_assets + b.interbank_liabilities;
        s.push_back(v > 0.0 ? b.interbank_assets / v : 0.5);
    }
    return s;
}

}  // namespace levnet
