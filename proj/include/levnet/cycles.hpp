#pragma once

// Cycle structure of leverage networks: acyclicity, certificates of
// instability from closed walks, and small reference networks.

#include "levnet/generators.hpp"
#include "levnet/spectral.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace levnet {

bool is_dag(const WeightedDigraph& g);
bool is_dag(const SquareMatrix& m);

struct CycleWitness {
    enum class Kind { individual, combined };

    Kind kind = Kind::combined;
    std::size_t node = 0;
    std::size_t length = 0;
    /// (m^k)_ii for combined witnesses, the product of edge weights for
    /// individual ones. Always > 1.
    double value = 0.0;
    /// Individual witnesses: the cycle, starting and implicitly ending at
    /// node. Empty for combined witnesses.
    std::vector<std::size_t> nodes;
};

std::string to_string(CycleWitness::Kind kind);

struct CycleSearchLimits {
    std::size_t max_length = 8;
    std::size_t max_visits = 1'000'000;
};

struct CycleReport {
    std::vector<CycleWitness> witnesses;
    /// The simple-cycle enumeration hit max_visits before finishing.
    bool truncated = false;
};

/// Combined witnesses for every (i, k <= k_max) with (m^k)_ii > 1, then
/// individual witnesses for simple cycles up to limits.max_length whose
/// weight product exceeds 1. Each simple cycle is reported once, rooted at
/// its smallest node.
CycleReport find_unstable_cycles(const SquareMatrix& m, std::size_t k_max,
                                 const CycleSearchLimits& limits = {});

/// Two directed 3-cycles 0 -> 1 -> 2 -> 0 and 0 -> 3 -> 4 -> 0 sharing node
/// 0, every weight omega. Spectral radius 2^{1/3} omega.
SquareMatrix butterfly(double omega);

/// Complete core of core_size nodes, then lenders_to_core periphery nodes
/// each with one edge into the core and borrowers_from_core periphery
/// nodes each with one edge from the core (spread round-robin). Every
/// weight omega; the periphery closes no cycle, so the spectral radius is
/// (core_size - 1) omega.
SquareMatrix core_periphery_example(std::size_t core_size, std::size_t lenders_to_core,
                                    std::size_t borrowers_from_core, double omega);

/// Five networks a..e on nodes 0..4 where each bank's out-weights are its
/// leverage in a split evenly over its current borrowers. All weights in a
/// equal omega. The five networks:
///   a: 0->1, 1->2, 1->3, 2->3, 3->4                 (DAG)
///   b: a + 2->1                                       (cycle 1-2-1)
///   c: b + 1->0                                       (cycle 0-1-0)
///   d: c + 1->4, 0->3                                 (no new cycle)
///   e: d + 3->1                                       (cycles through 3)
/// Spectral radii are omega times 0, 1/sqrt2, 1, 1/sqrt2, 1.
std::vector<SquareMatrix> build_fig3_sequence(double omega);

/// An omega with d stable and e unstable: both thresholds are located by
/// bisection on the spectral radius and their geometric mean returned.
double locate_fig3_omega();

}  // namespace levnet
