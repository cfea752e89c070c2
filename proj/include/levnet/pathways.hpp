#pragma once

// Pathway experiments: networks grown (or shrunk) node by node at constant
// average leverage, and diversification by edge addition at constant
// balance sheets.

#include "levnet/dynamics.hpp"
#include "levnet/generators.hpp"
#include "levnet/reconstruct.hpp"
#include "levnet/synthetic.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace levnet {

struct TrajectoryRecord {
    std::size_t step = 0;
    std::size_t n = 0;
    double edge_density = 0.0;
    double avg_leverage = 0.0;
    /// Spectral radius of the recovery-adjusted matrix.
    double lambda_max = 0.0;
    RegimeLabel regime;
    std::uint64_t seed = 0;
};

struct CrossingEvent {
    enum class Direction { up, down };

    /// Step of the first record on the far side of 1.
    std::size_t step = 0;
    Direction direction = Direction::up;
    double density = 0.0;
};

std::string to_string(CrossingEvent::Direction d);

/// Up-crossing where prev <= 1 < cur, down-crossing where prev > 1 >= cur.
std::vector<CrossingEvent> detect_crossings(std::span<const TrajectoryRecord> records);

/// How the regime label is derived from the raw leverage matrix: a uniform
/// recovery rate and one default curve for every bank.
struct StabilitySettings {
    double recovery = 0.0;
    DefaultCurve curve = DefaultCurve::linear();
    double tol = 1e-10;
};

struct PathwayCheck {
    bool starts_stable = false;
    bool reaches_unstable = false;
    double max_leverage_drift = 0.0;  // relative to the first record

    bool valid(double rel_tol = 1e-6) const {
        return starts_stable && reaches_unstable && max_leverage_drift <= rel_tol;
    }
};

/// Tests the pathway definition on a record sequence read in order.
PathwayCheck check_pathway(std::span<const TrajectoryRecord> records);

/// Called after every recorded step with the current leverage network.
using GraphObserver = std::function<void(std::size_t step, const WeightedDigraph& g)>;

struct PathwayRun {
    std::vector<TrajectoryRecord> records;
    std::vector<CrossingEvent> crossings;
    /// The leverage every record is pinned to.
    double pinned_leverage = 0.0;
    /// Samples drawn before an admissible starting network was found.
    std::size_t initial_attempts = 0;
};

struct ErPathwayOptions {
    std::size_t n0 = 20;
    double p = 0.08;
    double weight_mean = 0.79;
    std::size_t nodes_to_add = 500;
    bool stop_when_unstable = true;
    std::size_t max_initial_attempts = 10000;
    StabilitySettings stability;
    GraphObserver observer;
};

/// Node addition on an Erdos-Renyi network. The start is rejection-sampled
/// until l > 1 and the network is stable. Each new node i is wired with
/// the six-step rule: out-edges with probability p and weights scaled by
/// (n-1)/n, in-edges with probability p, then every new lender to i has
/// its out-row rescaled back to its old leverage. Banks that lend to
/// nobody are not offered an edge to i, since no rescale can keep their
/// zero leverage. Finally the out-weights of i are scaled to sum to the
/// pinned average leverage, which keeps the average exact; an empty
/// out-set is redrawn.
PathwayRun grow_er_pathway(const ErPathwayOptions& options, std::uint64_t seed);

struct RrgPathwayOptions {
    std::size_t n0 = 20;
    std::size_t k = 10;
    double weight_mean = 0.105;
    double reciprocity_threshold = 0.5;
    std::size_t nodes_to_add = 500;
    bool stop_when_unstable = true;
    std::size_t max_initial_attempts = 10000;
    std::size_t max_insertion_retries = 1000;
    StabilitySettings stability;
    GraphObserver observer;
};

/// Node addition on a directed k-regular network by edge-swap insertion:
/// k donors j_m hand one out-edge j_m -> l_m (and its weight) to the new
/// node as j_m -> i, and the new node lends i -> l_m with weights from a
/// uniform random partition of [0, l].
PathwayRun grow_rrg_pathway(const RrgPathwayOptions& options, std::uint64_t seed);

struct SfPathwayOptions {
    std::size_t n0 = 1000;
    ScaleFreeParams params;
    std::size_t nodes_to_add = 500;
    bool stop_when_unstable = true;
    std::size_t max_initial_attempts = 10000;
    /// Consecutive growth events that add no node before giving up.
    std::size_t max_idle_steps = 100000;
    StabilitySettings stability;
    GraphObserver observer;
};

/// Node addition by continuing the preferential-attachment process. When
/// node v gains an out-edge its old out-weights are scaled by
/// k_old / k_new and the new edge is exponential with mean
/// weight_scale / k_new; then every weight is scaled so the average
/// leverage returns to the pinned value. One record per added node.
PathwayRun grow_sf_pathway(const SfPathwayOptions& options, std::uint64_t seed);

struct CpPathwayOptions {
    /// Final network; the density defaults are synthetic placeholders, not
    /// estimates from any real interbank market.
    CorePeripherySpec spec{176};
    std::size_t n0 = 5;
    SyntheticSheetOptions sheets{176, 1.5};
    bool stop_when_stable = true;
    std::size_t max_attempts = 1000;
    StabilitySettings stability;
    GraphObserver observer;
};

/// Unweighted core-periphery graphs G_0 .. G_n are grown node by node at
/// constant block densities (a new node joins the core with probability
/// core_fraction; expected edge counts are rounded stochastically). G_n is
/// weighted by RAS from synthetic balance sheets; only sequences whose
/// weighted G_n is unstable are kept. The newest node is then removed
/// repeatedly, every weight rescaled to the pinned average leverage after
/// each removal. Records run from G_n backwards.
PathwayRun shrink_cp_pathway(const CpPathwayOptions& options, std::uint64_t seed);

/// Called after every step with the current leverage matrix.
using MatrixObserver = std::function<void(std::size_t step, const SquareMatrix& leverage)>;

struct EdgeAdditionOptions {
    /// Density of the initial DAG over its forward pairs.
    double dag_density = 0.1;
    /// Standard deviation of the noise added to lender shares before
    /// sorting them into the DAG order.
    double order_noise = 0.15;
    std::size_t max_dag_attempts = 1000;
    /// Sweep budget for the initial fit; a DAG that needs more is resampled.
    std::size_t initial_ras_sweeps = 20000;
    double ras_tol = 1e-9;
    std::size_t ras_max_sweeps = 100000;
    std::size_t cold_restart_every = 50;
    StabilitySettings stability;
    MatrixObserver observer;
};

struct EdgeAdditionRun {
    std::vector<TrajectoryRecord> records;
    std::vector<CrossingEvent> crossings;
    std::size_t dag_attempts = 0;
};

/// Starts from a RAS-weighted random DAG consistent with the sheets and
/// adds one uniformly random absent edge per step, rebalancing each time,
/// until the support is complete.
///
/// A uniformly random DAG almost never admits exposures matching given
/// sheets (its sources must not borrow, its sinks must not lend). The
/// topological order is therefore built from lender shares plus Gaussian
/// noise, taking next the highest-keyed bank whose borrowing the banks
/// already placed can cover (or acyclic_funding_order when that greedy
/// pass dead-ends). The support is a first-in-first-out
/// allocation of lending along that order (so it is feasible) plus random
/// forward pairs at dag_density. DAGs on which RAS stalls are resampled.
EdgeAdditionRun edge_addition_trajectory(std::span<const BalanceSheet> sheets,
                                         const EdgeAdditionOptions& options, std::uint64_t seed);

struct EnvelopeBin {
    double density_lo = 0.0;
    double density_hi = 0.0;
    std::size_t count = 0;
    double min = 0.0, q10 = 0.0, median = 0.0, q90 = 0.0, max = 0.0;
};

struct EnsembleSummary {
    std::size_t replicas = 0;
    /// Density of each replica's first up-crossing, in replica order; only
    /// replicas that crossed appear.
    std::vector<double> first_crossing_densities;
    std::vector<std::size_t> crossing_replicas;
    std::vector<std::size_t> crossing_counts;  // per replica
    std::vector<EnvelopeBin> envelope;
};

EnsembleSummary summarize_ensemble(std::span<const std::vector<TrajectoryRecord>> runs,
                                   std::size_t bins = 50);

}  // namespace levnet
