#include "levnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace levnet {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct Table {
    std::map<std::string, std::size_t> column;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

Table read_table(const std::string& path, std::initializer_list<const char*> required) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Table t;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split(line);
        if (!header) {
            if (!cells.empty() && cells[0].size() >= 3 && cells[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
                cells[0].erase(0, 3);
            for (std::size_t c = 0; c < cells.size(); ++c) t.column[cells[c]] = c;
            for (const char* name : required)
                if (!t.column.count(name))
                    throw IoError(path + ": header lacks required column '" + name + "'");
            header = true;
            continue;
        }
        if (cells.size() < t.column.size())
            throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(t.column.size()) + " fields, found " +
                          std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(line_no);
    }
    if (!header) throw IoError(path + ": empty file (a header row is required)");
    return t;
}

double parse_double(const std::string& text, const std::string& where) {
    double v = 0.0;
    const char* first = text.data();
    if (!text.empty() && text[0] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw IoError(where + ": '" + text + "' is not a number");
    return v;
}

std::size_t parse_index(const std::string& text, const std::string& where) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw IoError(where + ": '" + text + "' is not a node index (give balance sheets to use bank ids)");
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

std::string node_name(std::size_t i, std::span<const BalanceSheet> sheets) {
    return sheets.empty() ? std::to_string(i) : sheets[i].bank_id;
}

}  // namespace

std::vector<BalanceSheet> read_balance_sheets(const std::string& path) {
    const auto t = read_table(path, {"bank_id", "equity", "interbank_assets", "interbank_liabilities",
                                     "external_assets", "external_liabilities"});
    std::vector<BalanceSheet> sheets;
    std::map<std::string, std::size_t> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        auto num = [&](const char* col) { return parse_double(row[t.column.at(col)], where); };
        BalanceSheet s;
        s.bank_id = row[t.column.at("bank_id")];
        if (s.bank_id.empty()) throw IoError(where + ": empty bank_id");
        if (!seen.emplace(s.bank_id, r).second) throw IoError(where + ": duplicate bank_id '" + s.bank_id + "'");
        s.equity = num("equity");
        s.interbank_assets = num("interbank_assets");
        s.interbank_liabilities = num("interbank_liabilities");
        s.external_assets = num("external_assets");
        s.external_liabilities = num("external_liabilities");
        sheets.push_back(std::move(s));
    }
    return sheets;
}

void write_balance_sheets(const std::string& path, std::span<const BalanceSheet> sheets) {
    auto out = open_out(path);
    out << "bank_id,equity,interbank_assets,interbank_liabilities,external_assets,external_liabilities\n";
    for (const auto& s : sheets)
        out << s.bank_id << ',' << format_double(s.equity) << ',' << format_double(s.interbank_assets)
            << ',' << format_double(s.interbank_liabilities) << ',' << format_double(s.external_assets)
            << ',' << format_double(s.external_liabilities) << '\n';
}

std::vector<double> read_recovery_rates(const std::string& path) {
    const auto t = read_table(path, {"recovery"});
    std::vector<double> rates;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        rates.push_back(parse_double(t.rows[r][t.column.at("recovery")],
                                     path + ":" + std::to_string(t.line_numbers[r])));
    return rates;
}

WeightedDigraph read_edge_list(const std::string& path, std::span<const BalanceSheet> sheets,
                               std::size_t n_min) {
    const auto t = read_table(path, {"source", "target"});
    std::map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < sheets.size(); ++i) ids[sheets[i].bank_id] = i;
    const bool weighted = t.column.count("weight") > 0;

    WeightedDigraph g;
    g.n = sheets.empty() ? n_min : sheets.size();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        auto node = [&](const std::string& text) {
            if (sheets.empty()) return parse_index(text, where);
            auto it = ids.find(text);
            if (it == ids.end()) throw IoError(where + ": unknown bank '" + text + "'");
            return it->second;
        };
        Edge e;
        e.source = node(row[t.column.at("source")]);
        e.target = node(row[t.column.at("target")]);
        e.weight = weighted ? parse_double(row[t.column.at("weight")], where) : 1.0;
        if (sheets.empty()) g.n = std::max(g.n, std::max(e.source, e.target) + 1);
        g.edges.push_back(e);
    }
    g.meta.ensemble = "file";
    try {
        g.validate();
    } catch (const Error& e) {
        throw IoError(path + ": " + e.what());
    }
    return g;
}

void write_edge_list(const std::string& path, const WeightedDigraph& g,
                     std::span<const BalanceSheet> sheets) {
    if (!sheets.empty() && sheets.size() != g.n)
        throw IoError("write_edge_list: " + std::to_string(sheets.size()) + " sheets for " +
                      std::to_string(g.n) + " nodes");
    auto out = open_out(path);
    out << "source,target,weight\n";
    for (const auto& e : g.edges)
        out << node_name(e.source, sheets) << ',' << node_name(e.target, sheets) << ','
            << format_double(e.weight) << '\n';
}

void write_edge_list(const std::string& path, const SquareMatrix& m,
                     std::span<const BalanceSheet> sheets) {
    write_edge_list(path, WeightedDigraph::from_matrix(m), sheets);
}

nlohmann::json to_json(const GraphMetadata& meta, std::size_t n) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : meta.params) params[k] = v;
    return {{"n", n}, {"ensemble", meta.ensemble}, {"params", params}, {"seed", meta.seed}};
}

nlohmann::json to_json(const RegimeLabel& label) {
    return {{"regime", to_string(label.regime)},
            {"lambda_hat_max", label.lambda_hat_max},
            {"lambda_tilde_max", label.lambda_tilde_max}};
}

nlohmann::json to_json(const CycleReport& report) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& w : report.witnesses) {
        nlohmann::json j{{"kind", to_string(w.kind)}, {"node", w.node}, {"length", w.length},
                         {"value", w.value}};
        if (w.kind == CycleWitness::Kind::individual) j["nodes"] = w.nodes;
        list.push_back(std::move(j));
    }
    return {{"witnesses", list}, {"truncated", report.truncated}};
}

nlohmann::json to_json(const CrossingEvent& event) {
    return {{"step", event.step}, {"direction", to_string(event.direction)}, {"density", event.density}};
}

nlohmann::json to_json(const EnsembleSummary& s) {
    nlohmann::json env = nlohmann::json::array();
    for (const auto& b : s.envelope)
        env.push_back({{"density_lo", b.density_lo},
                       {"density_hi", b.density_hi},
                       {"count", b.count},
                       {"min", b.min},
                       {"q10", b.q10},
                       {"median", b.median},
                       {"q90", b.q90},
                       {"max", b.max}});
    return {{"replicas", s.replicas},
            {"first_crossing_densities", s.first_crossing_densities},
            {"crossing_replicas", s.crossing_replicas},
            {"crossing_counts", s.crossing_counts},
            {"lambda_envelope", env}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRecord> records) {
    auto out = open_out(path);
    out << "step,n,edge_density,avg_leverage,lambda_max,lambda_tilde,regime,seed\n";
    for (const auto& r : records)
        out << r.step << ',' << r.n << ',' << format_double(r.edge_density) << ','
            << format_double(r.avg_leverage) << ',' << format_double(r.lambda_max) << ','
            << format_double(r.regime.lambda_tilde_max) << ',' << to_string(r.regime.regime) << ','
            << r.seed << '\n';
}

void write_distress_csv(const std::string& path, std::span<const DistressState> states) {
    auto out = open_out(path);
    const std::size_t n = states.empty() ? 0 : states.front().h.size();
    out << 't';
    for (std::size_t i = 1; i <= n; ++i) out << ",h_" << i;
    out << '\n';
    for (const auto& s : states) {
        out << s.t;
        for (double h : s.h) out << ',' << format_double(h);
        out << '\n';
    }
}

}  // namespace levnet
