#pragma once

// Distress propagation h_i(t+1) = h_i(1) + sum_j lambda_hat_ij p_j(h_j(t)),
// its simulation and the three-regime stability classifier.

#include "levnet/model.hpp"
#include "levnet/spectral.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace levnet {

struct DistressState {
    std::vector<double> h;  // relative equity losses
    std::size_t t = 1;      // the shock itself is h(1)
};

enum class Clipping {
    /// Losses are capped at 1 and a bank that reaches 1 stays there.
    clipped,
    /// No cap; exposes the raw linear growth for diagnostics. Curves are
    /// evaluated through their closed-form continuation above 1.
    unclipped,
};

/// One application of the map. Dimensions of state, matrix, curves and
/// shock must agree.
DistressState step(const DistressState& state, const SquareMatrix& lambda_hat,
                   std::span<const DefaultCurve> curves, std::span<const double> h1,
                   Clipping mode = Clipping::clipped);

enum class Outcome {
    converged,  // successive iterates closer than tol
    ceiling,    // every bank reached h = 1
    diverged,   // unclipped run exceeded the divergence threshold
    undecided,  // step budget exhausted
};

std::string to_string(Outcome o);

struct SimulationOptions {
    double tol = 1e-10;
    /// Empty selects min(cap, 10 max(n, 10) ceil(1/(1 - rho))) with cap
    /// 10^6 for rho < 1 and 10^5 otherwise.
    std::optional<std::size_t> max_steps;
    Clipping mode = Clipping::clipped;
    /// Unclipped runs stop as diverged once max_i h_i exceeds this.
    double divergence_threshold = 1e12;
    bool record_trajectory = true;
};

struct SimulationResult {
    Outcome outcome = Outcome::undecided;
    DistressState final_state;
    std::vector<DistressState> trajectory;  // h(1), h(2), ... when recorded
    std::size_t steps = 0;
};

std::size_t default_max_steps(std::size_t n, double lambda_hat_max);

SimulationResult simulate(const SquareMatrix& lambda_hat, std::span<const DefaultCurve> curves,
                          std::span<const double> h1, const SimulationOptions& options = {});

enum class Regime { stable, unstable, indeterminate };

std::string to_string(Regime r);

struct RegimeLabel {
    Regime regime = Regime::indeterminate;
    double lambda_hat_max = 0.0;
    double lambda_tilde_max = 0.0;
};

/// Stable if lambda_hat_max < 1, unstable if lambda_tilde_max > 1,
/// indeterminate otherwise. Radii within tol of 1 count as indeterminate.
RegimeLabel classify(const SquareMatrix& lambda_hat, std::span<const DefaultCurve> curves,
                     double tol = 1e-10);

/// Label from precomputed radii.
RegimeLabel classify_radii(double lambda_hat_max, double lambda_tilde_max, double tol = 1e-10);

}  // namespace levnet
