#pragma once

// Seeded random digraph ensembles: Erdos-Renyi, directed regular,
// Bollobas-Borgs-Chayes-Riordan scale-free, core-periphery block model and
// random DAGs.

#include "levnet/spectral.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace levnet {

using Rng = std::mt19937_64;

/// Independent generator for a named sub-stream of a seed. Stream 0 drives
/// topology and stream 1 drives weights, so changing the weight law never
/// perturbs the structure draw.
Rng make_stream(std::uint64_t seed, std::uint32_t stream);

struct Edge {
    std::size_t source = 0;
    std::size_t target = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphMetadata {
    std::string ensemble;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
};

struct WeightedDigraph {
    std::size_t n = 0;
    std::vector<Edge> edges;
    GraphMetadata meta;

    /// Throws unless every edge is in range, not a self-loop, unique and
    /// carries a finite positive weight.
    void validate() const;

    SquareMatrix to_matrix() const;
    SparseMatrix to_sparse() const;
    /// Keeps every strictly positive off-diagonal entry.
    static WeightedDigraph from_matrix(const SquareMatrix& m);

    std::vector<std::size_t> out_degrees() const;
    std::vector<std::size_t> in_degrees() const;
    /// Edges over the n(n-1) ordered pairs.
    double density() const;
    /// Fraction of edges whose reverse is also present.
    double reciprocity() const;
};

/// Positive weight law. Text form: "constant:<w>", "exponential:<mean>",
/// "uniform:<lo>:<hi>".
class WeightSampler {
public:
    enum class Kind { constant, exponential, uniform };

    static WeightSampler constant(double w);
    static WeightSampler exponential(double mean);
    static WeightSampler uniform(double lo, double hi);
    static WeightSampler parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    double mean() const noexcept;
    double operator()(Rng& rng) const;
    std::string to_string() const;

private:
    WeightSampler(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    Kind kind_;
    double a_;
    double b_;
};

/// Exponential weight with the given mean; never returns exactly zero.
double draw_exponential(Rng& rng, double mean);

WeightedDigraph gen_erdos_renyi(std::size_t n, double p, const WeightSampler& weights,
                                std::uint64_t seed);

struct RegularOptions {
    double reciprocity_threshold = 0.5;
    /// 0 selects 100 * n * k swap attempts.
    std::size_t swap_budget = 0;
};

/// Every node has in- and out-degree k. An undirected k-regular graph is
/// drawn with the Steger-Wormald pairing process, read as a fully
/// reciprocated digraph, then rewired by degree-preserving double swaps
/// (a->b, c->d becomes a->d, c->b) until reciprocity <= the threshold.
WeightedDigraph gen_regular_random(std::size_t n, std::size_t k, const WeightSampler& weights,
                                   std::uint64_t seed, const RegularOptions& options = {});

/// Parameters of the directed preferential-attachment process. At each
/// step, with probability alpha a new node v gets an edge v -> w with w
/// chosen by in-degree + delta_in; with probability beta an edge v -> w is
/// added between existing nodes (v by out-degree + delta_out, w by
/// in-degree + delta_in); with probability gamma a new node w gets an edge
/// v -> w with v chosen by out-degree + delta_out.
/// Defaults give tail exponents 2.15 (in) and 2.7 (out) with gamma = 0.1
/// and delta_out = 0.5. With delta_out = 0 a node that never lends never
/// starts to, and the graphs come out nearly acyclic.
struct ScaleFreeParams {
    double alpha = 1.0 - 1.55 / 2.2;
    double gamma = 0.1;
    double beta = 1.55 / 2.2 - 0.1;
    double delta_in = (1.15 * 0.9 - 1.0) / (1.1 - 1.55 / 2.2);
    double delta_out = 0.5;
    /// Out-weights of a node with out-degree k are exponential with mean
    /// weight_scale / k.
    double weight_scale = 2.0;

    void validate() const;
    /// Asymptotic tail exponents (in, out) of the degree distributions.
    std::pair<double, double> tail_exponents() const;
    /// Parameters whose tail exponents equal the targets, keeping gamma
    /// and delta_out fixed.
    static ScaleFreeParams for_exponents(double in_exponent, double out_exponent,
                                         double gamma = 0.1, double delta_out = 0.5);
};

/// Incremental state of the preferential-attachment process, shared by the
/// generator and the scale-free growth pathway.
class ScaleFreeProcess {
public:
    enum class StepKind { new_source, internal, new_target };

    struct Step {
        StepKind kind;
        std::size_t source;
        std::size_t target;
    };

    /// Starts from the single edge 0 -> 1.
    explicit ScaleFreeProcess(const ScaleFreeParams& params);
    /// Continues from an existing edge list.
    ScaleFreeProcess(const ScaleFreeParams& params, std::size_t n,
                     const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    /// One growth event. Draws that would create a self-loop or a duplicate
    /// edge are redrawn; throws after max_redraws consecutive rejections.
    Step advance(Rng& rng, std::size_t max_redraws = 10000);

    std::size_t node_count() const noexcept { return out_degree_.size(); }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept {
        return edges_;
    }
    std::size_t out_degree(std::size_t v) const { return out_degree_[v]; }
    std::size_t in_degree(std::size_t v) const { return in_degree_[v]; }

private:
    std::size_t pick_by_in(Rng& rng) const;
    std::size_t pick_by_out(Rng& rng) const;
    bool has_edge(std::size_t u, std::size_t v) const;

    ScaleFreeParams params_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::size_t> out_degree_;
    std::vector<std::size_t> in_degree_;
    std::vector<std::vector<std::size_t>> successors_;
};

/// Grows the process from the seed edge 0 -> 1 until n_target nodes exist.
/// Weights: each node's out-edges are exponential with mean
/// params.weight_scale / k_out.
WeightedDigraph gen_scale_free(std::size_t n_target, const ScaleFreeParams& params,
                               std::uint64_t seed);
WeightedDigraph gen_scale_free(std::size_t n_target, double in_exponent, double out_exponent,
                               std::uint64_t seed);

struct CorePeripherySpec {
    std::size_t n = 0;
    double core_fraction = 0.15;
    double rho_cc = 0.7;
    double rho_cp = 0.2;
    double rho_pc = 0.2;
    double rho_pp = 0.05;

    void validate() const;
    /// round(core_fraction * n); the first core_size() nodes form the core.
    std::size_t core_size() const;
};

WeightedDigraph gen_core_periphery(const CorePeripherySpec& spec, const WeightSampler& weights,
                                   std::uint64_t seed);

/// Edges only from lower to higher rank of a uniformly random permutation;
/// each of the n(n-1)/2 forward pairs is present with the given density.
WeightedDigraph gen_random_dag(std::size_t n, double density, const WeightSampler& weights,
                               std::uint64_t seed);

}  // namespace levnet
