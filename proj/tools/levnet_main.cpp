// levnet command-line front end. Every command writes its artifacts and the
// resolved configuration (config.ini) into --out.

#include "levnet/io.hpp"
#include "levnet/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace levnet;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct Common {
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    double tol = 1e-10;
    std::string out = ".";
};

std::uint64_t require_seed(const Common& c, const std::string& command) {
    if (!c.seed) throw UsageError(command + " is randomized and needs an explicit --seed");
    return *c.seed;
}

std::string out_file(const Common& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

// ----------------------------------------------------------------------------
// Matrix inputs shared by stability, simulate and cycles

struct MatrixInput {
    std::string matrix;
    std::string sheets;
    double recovery = 0.0;
    std::string recovery_file;
    std::string curve = "linear";
};

void add_matrix_options(CLI::App* cmd, MatrixInput& in) {
    cmd->add_option("--matrix", in.matrix,
                    "Edge list (source,target,weight): exposures when --sheets is given, leverage otherwise")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--sheets", in.sheets, "Balance-sheet CSV")->check(CLI::ExistingFile);
    cmd->add_option("--recovery", in.recovery, "Uniform recovery rate")->capture_default_str();
    cmd->add_option("--recovery-file", in.recovery_file, "Per-bank recovery rates (column 'recovery')")
        ->check(CLI::ExistingFile);
    cmd->add_option("--curve", in.curve, "linear | power:<alpha> | exponential:<beta>")->capture_default_str();
}

struct Loaded {
    std::vector<BalanceSheet> sheets;
    SquareMatrix leverage;
    SquareMatrix lambda_hat;
    DefaultCurve curve = DefaultCurve::linear();
};

Loaded load(const MatrixInput& in) {
    Loaded l;
    if (!in.sheets.empty()) l.sheets = read_balance_sheets(in.sheets);
    const SquareMatrix m = read_edge_list(in.matrix, l.sheets).to_matrix();
    l.leverage = l.sheets.empty() ? m : build_leverage(ExposureMatrix(m), l.sheets);
    const std::size_t n = l.leverage.size();
    RecoveryVector rv;
    if (!in.recovery_file.empty()) {
        auto rates = read_recovery_rates(in.recovery_file);
        if (rates.size() != n)
            throw IoError(in.recovery_file + ": " + std::to_string(rates.size()) + " recovery rates for " +
                          std::to_string(n) + " banks");
        rv = RecoveryVector(std::move(rates));
    } else {
        rv = RecoveryVector::uniform(n, in.recovery);
    }
    l.lambda_hat = adjust_recovery(l.leverage, rv);
    l.curve = DefaultCurve::parse(in.curve);
    return l;
}

// ----------------------------------------------------------------------------
// stability

void run_stability(const Common& c, const MatrixInput& in) {
    const auto l = load(in);
    const std::vector<DefaultCurve> curves(l.lambda_hat.size(), l.curve);
    const auto label = classify(l.lambda_hat, curves, c.tol);
    const auto bounds = leverage_bounds(l.lambda_hat);
    json j = to_json(label);
    j["n"] = l.lambda_hat.size();
    j["leverage_bounds"] = {{"lo", bounds.lo}, {"hi", bounds.hi}};
    j["average_leverage"] = average_leverage(l.leverage);
    j["curve"] = l.curve.to_string();
    write_json(out_file(c, "stability.json"), j);
    std::cout << j.dump(2) << '\n';
}

// ----------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    MatrixInput in;
    double shock = 1e-3;
    std::vector<std::size_t> shocked;
    std::size_t max_steps = 0;
    bool unclipped = false;
};

void run_simulate(const Common& c, const SimulateArgs& a) {
    const auto l = load(a.in);
    const std::size_t n = l.lambda_hat.size();
    if (!(a.shock >= 0.0 && a.shock <= 1.0)) throw UsageError("--shock must lie in [0, 1]");
    std::vector<double> h1(n, a.shocked.empty() ? a.shock : 0.0);
    for (auto i : a.shocked) {
        if (i >= n) throw UsageError("--shocked bank " + std::to_string(i) + " out of range");
        h1[i] = a.shock;
    }
    const std::vector<DefaultCurve> curves(n, l.curve);
    SimulationOptions so;
    so.tol = c.tol;
    if (a.max_steps > 0) so.max_steps = a.max_steps;
    so.mode = a.unclipped ? Clipping::unclipped : Clipping::clipped;
    const auto r = simulate(l.lambda_hat, curves, h1, so);
    write_distress_csv(out_file(c, "distress.csv"), r.trajectory);

    const auto label = classify(l.lambda_hat, curves, c.tol);
    const auto& h = r.final_state.h;
    json j{{"outcome", to_string(r.outcome)},
           {"steps", r.steps},
           {"final_max_loss", h.empty() ? 0.0 : *std::max_element(h.begin(), h.end())},
           {"mode", a.unclipped ? "unclipped" : "clipped"},
           {"stability", to_json(label)}};
    write_json(out_file(c, "simulation.json"), j);
    std::cout << j.dump(2) << '\n';
}

// ----------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string ensemble = "er";
    std::size_t n = 100;
    std::size_t replicas = 1;
    std::string weights = "exponential:1";
    double p = 0.1;
    std::size_t k = 5;
    double reciprocity = 0.5;
    double in_exponent = 2.15;
    double out_exponent = 2.7;
    double gamma = 0.1;
    double delta_out = 0.5;
    double weight_scale = 2.0;
    CorePeripherySpec cp{100};
    double density = 0.1;
};

WeightedDigraph generate_one(const GenerateArgs& a, std::uint64_t seed) {
    const auto w = WeightSampler::parse(a.weights);
    if (a.ensemble == "er") return gen_erdos_renyi(a.n, a.p, w, seed);
    if (a.ensemble == "regular") {
        RegularOptions ro;
        ro.reciprocity_threshold = a.reciprocity;
        return gen_regular_random(a.n, a.k, w, seed, ro);
    }
    if (a.ensemble == "scalefree") {
        auto params = ScaleFreeParams::for_exponents(a.in_exponent, a.out_exponent, a.gamma, a.delta_out);
        params.weight_scale = a.weight_scale;
        return gen_scale_free(a.n, params, seed);
    }
    if (a.ensemble == "coreperiphery") {
        auto spec = a.cp;
        spec.n = a.n;
        return gen_core_periphery(spec, w, seed);
    }
    if (a.ensemble == "dag") return gen_random_dag(a.n, a.density, w, seed);
    throw UsageError("unknown ensemble '" + a.ensemble + "'");
}

void run_generate(const Common& c, const GenerateArgs& a) {
    const auto seed = require_seed(c, "generate");
    if (a.replicas == 0) throw UsageError("--replicas must be positive");
    const auto graphs = parallel_map(a.replicas, c.jobs, [&](std::size_t r) { return generate_one(a, seed + r); });
    json meta = json::array();
    for (std::size_t r = 0; r < graphs.size(); ++r) {
        const std::string name = a.replicas == 1 ? "graph.csv" : "graph_" + std::to_string(r) + ".csv";
        write_edge_list(out_file(c, name), graphs[r]);
        json m = to_json(graphs[r].meta, graphs[r].n);
        m["file"] = name;
        m["edges"] = graphs[r].edges.size();
        meta.push_back(std::move(m));
    }
    write_json(out_file(c, "graph.json"), a.replicas == 1 ? meta[0] : meta);
}

// ----------------------------------------------------------------------------
// reconstruct

struct ReconstructArgs {
    std::string sheets;
    std::string support;
    double ras_tol = 1e-9;
    std::size_t max_sweeps = 100000;
};

void run_reconstruct(const Common& c, const ReconstructArgs& a) {
    const auto sheets = read_balance_sheets(a.sheets);
    RasProblem problem = RasProblem::from_sheets(sheets);
    problem.tol = a.ras_tol;
    problem.max_sweeps = a.max_sweeps;
    if (!a.support.empty()) {
        problem.support.assign(problem.n * problem.n, 0);
        for (const auto& e : read_edge_list(a.support, sheets).edges) problem.set_support(e.source, e.target);
    }
    const auto r = ras_balance(problem);
    write_edge_list(out_file(c, "exposures.csv"), r.matrix, sheets);
    json j{{"sweeps", r.sweeps}, {"residual", r.residual}, {"support_size", problem.support_size()}};
    write_json(out_file(c, "ras.json"), j);
    std::cout << j.dump(2) << '\n';
}

// ----------------------------------------------------------------------------
// pathway nodes

struct NodesArgs {
    std::string model = "er";
    std::size_t replicas = 1;
    std::size_t n0 = 0;  // 0: the model's default
    std::size_t nodes_to_add = 500;
    bool keep_going = false;
    double recovery = 0.0;
    std::string curve = "linear";
    ErPathwayOptions er;
    RrgPathwayOptions rrg;
    SfPathwayOptions sf;
    CpPathwayOptions cp;
};

StabilitySettings settings(double recovery, const std::string& curve, double tol) {
    StabilitySettings s;
    s.recovery = recovery;
    s.curve = DefaultCurve::parse(curve);
    s.tol = tol;
    return s;
}

PathwayRun run_node_model(const NodesArgs& a, const StabilitySettings& st, std::uint64_t seed) {
    if (a.model == "er") {
        auto o = a.er;
        if (a.n0) o.n0 = a.n0;
        o.nodes_to_add = a.nodes_to_add;
        o.stop_when_unstable = !a.keep_going;
        o.stability = st;
        return grow_er_pathway(o, seed);
    }
    if (a.model == "regular") {
        auto o = a.rrg;
        if (a.n0) o.n0 = a.n0;
        o.nodes_to_add = a.nodes_to_add;
        o.stop_when_unstable = !a.keep_going;
        o.stability = st;
        return grow_rrg_pathway(o, seed);
    }
    if (a.model == "scalefree") {
        auto o = a.sf;
        if (a.n0) o.n0 = a.n0;
        o.nodes_to_add = a.nodes_to_add;
        o.stop_when_unstable = !a.keep_going;
        o.stability = st;
        return grow_sf_pathway(o, seed);
    }
    if (a.model == "coreperiphery") {
        auto o = a.cp;
        if (a.n0) o.n0 = a.n0;
        o.sheets.n = o.spec.n;
        o.stop_when_stable = !a.keep_going;
        o.stability = st;
        return shrink_cp_pathway(o, seed);
    }
    throw UsageError("unknown pathway model '" + a.model + "'");
}

void run_nodes(const Common& c, NodesArgs a, double gamma, double delta_out, double in_exp, double out_exp) {
    const auto seed = require_seed(c, "pathway nodes");
    if (a.replicas == 0) throw UsageError("--replicas must be positive");
    const double weight_scale = a.sf.params.weight_scale;
    a.sf.params = ScaleFreeParams::for_exponents(in_exp, out_exp, gamma, delta_out);
    a.sf.params.weight_scale = weight_scale;
    const auto st = settings(a.recovery, a.curve, c.tol);

    const auto runs = parallel_map(a.replicas, c.jobs, [&](std::size_t r) { return run_node_model(a, st, seed + r); });

    std::vector<TrajectoryRecord> all;
    std::vector<std::vector<TrajectoryRecord>> per_run;
    json replicas = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& run = runs[r];
        all.insert(all.end(), run.records.begin(), run.records.end());
        per_run.push_back(run.records);
        // The core-periphery records run backwards; the pathway reads forwards.
        auto forward = run.records;
        if (a.model == "coreperiphery") std::reverse(forward.begin(), forward.end());
        const auto check = check_pathway(forward);
        json crossings = json::array();
        for (const auto& e : run.crossings) crossings.push_back(to_json(e));
        replicas.push_back({{"replica", r},
                            {"seed", seed + r},
                            {"pinned_leverage", run.pinned_leverage},
                            {"initial_attempts", run.initial_attempts},
                            {"records", run.records.size()},
                            {"valid_pathway", check.valid()},
                            {"max_leverage_drift", check.max_leverage_drift},
                            {"crossings", crossings}});
    }
    write_trajectory_csv(out_file(c, "trajectories.csv"), all);
    json j = to_json(summarize_ensemble(per_run));
    j["model"] = a.model;
    j["runs"] = replicas;
    write_json(out_file(c, "summary.json"), j);
}

// ----------------------------------------------------------------------------
// pathway edges

struct EdgesArgs {
    std::string sheets;
    std::size_t n = 50;
    double leverage = 2.0;
    std::size_t replicas = 1;
    std::size_t bins = 50;
    double recovery = 0.0;
    std::string curve = "linear";
    EdgeAdditionOptions opt;
};

void run_edges(const Common& c, EdgesArgs a) {
    const auto seed = require_seed(c, "pathway edges");
    if (a.replicas == 0) throw UsageError("--replicas must be positive");
    a.opt.stability = settings(a.recovery, a.curve, c.tol);
    std::vector<BalanceSheet> given;
    if (!a.sheets.empty()) given = read_balance_sheets(a.sheets);

    const auto runs = parallel_map(a.replicas, c.jobs, [&](std::size_t r) {
        const auto sheets = given.empty() ? synthetic_balance_sheets({a.n, a.leverage}, seed + r) : given;
        return edge_addition_trajectory(sheets, a.opt, seed + r);
    });

    std::vector<TrajectoryRecord> all;
    std::vector<std::vector<TrajectoryRecord>> per_run;
    json replicas = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        all.insert(all.end(), runs[r].records.begin(), runs[r].records.end());
        per_run.push_back(runs[r].records);
        json crossings = json::array();
        for (const auto& e : runs[r].crossings) crossings.push_back(to_json(e));
        replicas.push_back({{"replica", r},
                            {"seed", seed + r},
                            {"dag_attempts", runs[r].dag_attempts},
                            {"records", runs[r].records.size()},
                            {"crossings", crossings}});
    }
    write_trajectory_csv(out_file(c, "trajectories.csv"), all);
    json j = to_json(summarize_ensemble(per_run, a.bins));
    j["runs"] = replicas;
    write_json(out_file(c, "summary.json"), j);
}

// ----------------------------------------------------------------------------
// cycles and fig3

struct CyclesArgs {
    MatrixInput in;
    std::size_t k_max = 10;
    CycleSearchLimits limits;
};

void run_cycles(const Common& c, const CyclesArgs& a) {
    const auto l = load(a.in);
    const auto report = find_unstable_cycles(l.lambda_hat, a.k_max, a.limits);
    json j = to_json(report);
    j["lambda_max"] = spectral_radius(l.lambda_hat, c.tol);
    write_json(out_file(c, "cycles.json"), j);
    std::cout << j.dump(2) << '\n';
}

void run_fig3(const Common& c, double omega) {
    if (omega <= 0.0) omega = locate_fig3_omega();
    const auto seq = build_fig3_sequence(omega);
    std::string csv = "panel,lambda_max,regime\n";
    json panels = json::array();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const std::string name(1, static_cast<char>('a' + i));
        const double lam = spectral_radius(seq[i], c.tol);
        const auto label = classify_radii(lam, lam, c.tol);
        csv += name + "," + format_double(lam) + "," + to_string(label.regime) + "\n";
        write_edge_list(out_file(c, "fig3_" + name + ".csv"), seq[i]);
        panels.push_back({{"panel", name}, {"lambda_max", lam}, {"regime", to_string(label.regime)}});
    }
    write_text(out_file(c, "fig3.csv"), csv);
    json j{{"omega", omega}, {"panels", panels}};
    write_json(out_file(c, "fig3.json"), j);
    std::cout << csv;
}

// The resolved configuration of the command that ran: global options plus
// that subcommand's section. CLI11 does not select a subcommand from a
// config file, so the replay names it: levnet --config config.ini <command>.
std::string resolved_config(const CLI::App& app, const std::string& command, const std::string& prefix) {
    std::istringstream all(app.config_to_str(true, false));
    std::string out = "# replay: levnet --config config.ini " + command + "\n", line;
    while (std::getline(all, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const bool global = key.find('.') == std::string::npos;
        if (line.compare(eq, std::string::npos, "=\"\"") == 0) continue;  // unset
        if (!global && key.rfind(prefix, 0) != 0) continue;
        out += line + '\n';
    }
    return out;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return "usage";
    if (dynamic_cast<const RasError*>(&e)) return "ras";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const SpectralError*>(&e)) return "spectral";
    if (dynamic_cast<const Error*>(&e)) return "invalid_input";
    return "internal";
}

int report(const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leverage-network stability toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file (flags override it)");

    Common common;
    app.add_option("--seed", common.seed, "Master seed; replica k uses seed + k");
    app.add_option("--jobs", common.jobs, "Worker threads for replicas")->capture_default_str();
    app.add_option("--tol", common.tol, "Spectral and convergence tolerance")->capture_default_str();
    app.add_option("--out", common.out, "Output directory")->capture_default_str();

    MatrixInput stability_in;
    auto* stability = app.add_subcommand("stability", "Classify a leverage network");
    add_matrix_options(stability, stability_in);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Iterate the distress dynamics");
    add_matrix_options(simulate_cmd, sim.in);
    simulate_cmd->add_option("--shock", sim.shock, "Initial relative equity loss")->capture_default_str();
    simulate_cmd->add_option("--shocked", sim.shocked, "Banks receiving the shock (default: all)")->delimiter(',');
    simulate_cmd->add_option("--max-steps", sim.max_steps, "Step budget (0: automatic)")->capture_default_str();
    simulate_cmd->add_flag("--unclipped", sim.unclipped, "Do not cap losses at 1");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Sample a random leverage network");
    generate->add_option("--ensemble", gen.ensemble)
        ->check(CLI::IsMember({"er", "regular", "scalefree", "coreperiphery", "dag"}))
        ->capture_default_str();
    generate->add_option("--n", gen.n)->capture_default_str();
    generate->add_option("--replicas", gen.replicas)->capture_default_str();
    generate->add_option("--weights", gen.weights, "constant:w | exponential:mean | uniform:lo:hi")
        ->capture_default_str();
    generate->add_option("--p", gen.p, "Edge probability (er)")->capture_default_str();
    generate->add_option("--k", gen.k, "Degree (regular)")->capture_default_str();
    generate->add_option("--reciprocity", gen.reciprocity, "Reciprocity ceiling (regular)")->capture_default_str();
    generate->add_option("--in-exponent", gen.in_exponent)->capture_default_str();
    generate->add_option("--out-exponent", gen.out_exponent)->capture_default_str();
    generate->add_option("--gamma", gen.gamma)->capture_default_str();
    generate->add_option("--delta-out", gen.delta_out)->capture_default_str();
    generate->add_option("--weight-scale", gen.weight_scale)->capture_default_str();
    generate->add_option("--core-fraction", gen.cp.core_fraction)->capture_default_str();
    generate->add_option("--rho-cc", gen.cp.rho_cc)->capture_default_str();
    generate->add_option("--rho-cp", gen.cp.rho_cp)->capture_default_str();
    generate->add_option("--rho-pc", gen.cp.rho_pc)->capture_default_str();
    generate->add_option("--rho-pp", gen.cp.rho_pp)->capture_default_str();
    generate->add_option("--density", gen.density, "Forward-pair density (dag)")->capture_default_str();

    ReconstructArgs rec;
    auto* reconstruct = app.add_subcommand("reconstruct", "RAS exposures from balance sheets");
    reconstruct->add_option("--sheets", rec.sheets)->required()->check(CLI::ExistingFile);
    reconstruct->add_option("--support", rec.support, "Edge list of allowed exposures (default: complete)")
        ->check(CLI::ExistingFile);
    reconstruct->add_option("--ras-tol", rec.ras_tol)->capture_default_str();
    reconstruct->add_option("--max-sweeps", rec.max_sweeps)->capture_default_str();

    auto* pathway = app.add_subcommand("pathway", "Pathway experiments");
    pathway->require_subcommand(1);

    NodesArgs nodes;
    double sf_gamma = 0.1, sf_delta_out = 0.5, sf_in = 2.15, sf_out = 2.7;
    auto* nodes_cmd = pathway->add_subcommand("nodes", "Node addition at constant average leverage");
    nodes_cmd->add_option("--model", nodes.model)
        ->check(CLI::IsMember({"er", "regular", "scalefree", "coreperiphery"}))
        ->capture_default_str();
    nodes_cmd->add_option("--replicas", nodes.replicas)->capture_default_str();
    nodes_cmd->add_option("--n0", nodes.n0, "Starting size (0: model default)")->capture_default_str();
    nodes_cmd->add_option("--nodes-to-add", nodes.nodes_to_add)->capture_default_str();
    nodes_cmd->add_flag("--keep-going", nodes.keep_going, "Do not stop at the first crossing");
    nodes_cmd->add_option("--recovery", nodes.recovery)->capture_default_str();
    nodes_cmd->add_option("--curve", nodes.curve)->capture_default_str();
    nodes_cmd->add_option("--p", nodes.er.p, "ER edge probability")->capture_default_str();
    nodes_cmd->add_option("--weight-mean", nodes.er.weight_mean, "ER weight mean")->capture_default_str();
    nodes_cmd->add_option("--k", nodes.rrg.k, "Regular degree")->capture_default_str();
    nodes_cmd->add_option("--rrg-weight-mean", nodes.rrg.weight_mean)->capture_default_str();
    nodes_cmd->add_option("--reciprocity", nodes.rrg.reciprocity_threshold)->capture_default_str();
    nodes_cmd->add_option("--in-exponent", sf_in)->capture_default_str();
    nodes_cmd->add_option("--out-exponent", sf_out)->capture_default_str();
    nodes_cmd->add_option("--gamma", sf_gamma)->capture_default_str();
    nodes_cmd->add_option("--delta-out", sf_delta_out)->capture_default_str();
    nodes_cmd->add_option("--weight-scale", nodes.sf.params.weight_scale)->capture_default_str();
    nodes_cmd->add_option("--cp-n", nodes.cp.spec.n, "Final core-periphery size")->capture_default_str();
    nodes_cmd->add_option("--core-fraction", nodes.cp.spec.core_fraction)->capture_default_str();
    nodes_cmd->add_option("--rho-cc", nodes.cp.spec.rho_cc)->capture_default_str();
    nodes_cmd->add_option("--rho-cp", nodes.cp.spec.rho_cp)->capture_default_str();
    nodes_cmd->add_option("--rho-pc", nodes.cp.spec.rho_pc)->capture_default_str();
    nodes_cmd->add_option("--rho-pp", nodes.cp.spec.rho_pp)->capture_default_str();
    nodes_cmd->add_option("--cp-leverage", nodes.cp.sheets.target_mean_leverage)->capture_default_str();

    EdgesArgs edges;
    auto* edges_cmd = pathway->add_subcommand("edges", "Edge addition at constant balance sheets");
    edges_cmd->add_option("--sheets", edges.sheets, "Balance-sheet CSV (default: synthetic per replica)")
        ->check(CLI::ExistingFile);
    edges_cmd->add_option("--n", edges.n, "Banks in synthetic sheets")->capture_default_str();
    edges_cmd->add_option("--leverage", edges.leverage, "Mean leverage of synthetic sheets")->capture_default_str();
    edges_cmd->add_option("--replicas", edges.replicas)->capture_default_str();
    edges_cmd->add_option("--bins", edges.bins, "Density bins of the envelope")->capture_default_str();
    edges_cmd->add_option("--recovery", edges.recovery)->capture_default_str();
    edges_cmd->add_option("--curve", edges.curve)->capture_default_str();
    edges_cmd->add_option("--dag-density", edges.opt.dag_density)->capture_default_str();
    edges_cmd->add_option("--order-noise", edges.opt.order_noise)->capture_default_str();
    edges_cmd->add_option("--ras-tol", edges.opt.ras_tol)->capture_default_str();
    edges_cmd->add_option("--cold-restart-every", edges.opt.cold_restart_every)->capture_default_str();

    CyclesArgs cyc;
    auto* cycles = app.add_subcommand("cycles", "Unstable-cycle witnesses");
    add_matrix_options(cycles, cyc.in);
    cycles->add_option("--k-max", cyc.k_max, "Longest closed walk for combined witnesses")->capture_default_str();
    cycles->add_option("--max-length", cyc.limits.max_length, "Longest simple cycle")->capture_default_str();
    cycles->add_option("--max-visits", cyc.limits.max_visits)->capture_default_str();

    double fig3_omega = 0.0;
    auto* fig3 = app.add_subcommand("fig3", "Oscillating five-bank toy sequence");
    fig3->add_option("--omega", fig3_omega, "Edge weight (0: locate one with d stable, e unstable)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report("usage", e.what(), 2);
    }

    try {
        fs::create_directories(common.out);
        std::string command, prefix;
        for (const auto* sub : app.get_subcommands()) {
            command = sub->get_name();
            for (const auto* inner : sub->get_subcommands()) command += " " + inner->get_name();
        }
        prefix = command + ".";
        std::replace(prefix.begin(), prefix.end(), ' ', '.');
        write_text(out_file(common, "config.ini"), resolved_config(app, command, prefix));
        if (stability->parsed()) run_stability(common, stability_in);
        else if (simulate_cmd->parsed()) run_simulate(common, sim);
        else if (generate->parsed()) run_generate(common, gen);
        else if (reconstruct->parsed()) run_reconstruct(common, rec);
        else if (nodes_cmd->parsed()) run_nodes(common, nodes, sf_gamma, sf_delta_out, sf_in, sf_out);
        else if (edges_cmd->parsed()) run_edges(common, edges);
        else if (cycles->parsed()) run_cycles(common, cyc);
        else if (fig3->parsed()) run_fig3(common, fig3_omega);
    } catch (const std::exception& e) {
        return report(error_kind(e), e.what(), 1);
    }
    return 0;
}
