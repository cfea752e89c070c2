#pragma once

// CSV and JSON readers and writers. Every floating-point value is written
// with 17 significant digits so a write/read round trip is exact.

#include "levnet/cycles.hpp"
#include "levnet/dynamics.hpp"
#include "levnet/generators.hpp"
#include "levnet/model.hpp"
#include "levnet/pathways.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace levnet {

class IoError : public Error {
public:
    using Error::Error;
};

std::string format_double(double x);

/// Header row required: bank_id, equity, interbank_assets,
/// interbank_liabilities, external_assets, external_liabilities (any
/// order, extra columns ignored).
std::vector<BalanceSheet> read_balance_sheets(const std::string& path);
void write_balance_sheets(const std::string& path, std::span<const BalanceSheet> sheets);

/// One rate per row in node order under a "recovery" header column.
std::vector<double> read_recovery_rates(const std::string& path);

/// Header row source,target[,weight]. Nodes are bank ids when sheets are
/// given, 0-based integers otherwise; n is then max(n_min, largest index
/// + 1). A missing weight column reads as weight 1.
WeightedDigraph read_edge_list(const std::string& path, std::span<const BalanceSheet> sheets = {},
                               std::size_t n_min = 0);
/// Zero entries of a matrix are not written.
void write_edge_list(const std::string& path, const WeightedDigraph& g,
                     std::span<const BalanceSheet> sheets = {});
void write_edge_list(const std::string& path, const SquareMatrix& m,
                     std::span<const BalanceSheet> sheets = {});

nlohmann::json to_json(const GraphMetadata& meta, std::size_t n);
nlohmann::json to_json(const RegimeLabel& label);
nlohmann::json to_json(const CycleReport& report);
nlohmann::json to_json(const EnsembleSummary& summary);
nlohmann::json to_json(const CrossingEvent& event);

void write_json(const std::string& path, const nlohmann::json& j);
void write_text(const std::string& path, const std::string& text);

/// Columns step, n, edge_density, avg_leverage, lambda_max, lambda_tilde,
/// regime, seed.
void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRecord> records);

/// Columns t, h_1 .. h_n.
void write_distress_csv(const std::string& path, std::span<const DistressState> states);

}  // namespace levnet
