#include "levnet/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace levnet {

namespace {

void check_dimensions(std::size_t n, const SquareMatrix& lambda_hat,
                      std::span<const DefaultCurve> curves, std::span<const double> h1) {
    if (lambda_hat.size() != n || curves.size() != n || h1.size() != n)
        throw Error("dynamics: dimension mismatch (state " + std::to_string(n) + ", matrix " +
                    std::to_string(lambda_hat.size()) + ", curves " + std::to_string(curves.size()) +
                    ", shock " + std::to_string(h1.size()) + ")");
}

}  // namespace

DistressState step(const DistressState& state, const SquareMatrix& lambda_hat,
                   std::span<const DefaultCurve> curves, std::span<const double> h1, Clipping mode) {
    const std::size_t n = state.h.size();
    check_dimensions(n, lambda_hat, curves, h1);

    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j)
        p[j] = mode == Clipping::clipped ? curves[j](state.h[j]) : curves[j].extended(state.h[j]);

    DistressState next{std::vector<double>(n), state.t + 1};
    for (std::size_t i = 0; i < n; ++i) {
        if (mode == Clipping::clipped && state.h[i] >= 1.0) {
            next.h[i] = 1.0;
            continue;
        }
        auto row = lambda_hat.row(i);
        double v = h1[i];
        for (std::size_t j = 0; j < n; ++j) v += row[j] * p[j];
        next.h[i] = mode == Clipping::clipped ? std::min(v, 1.0) : v;
    }
    return next;
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::converged: return "converged";
        case Outcome::ceiling: return "ceiling";
        case Outcome::diverged: return "diverged";
        case Outcome::undecided: return "undecided";
    }
    return "undecided";
}

std::size_t default_max_steps(std::size_t n, double lambda_hat_max) {
    if (!(lambda_hat_max < 1.0)) return 100'000;
    const double per = std::ceil(1.0 / (1.0 - lambda_hat_max));
    const double steps = 10.0 * static_cast<double>(std::max<std::size_t>(n, 10)) * per;
    return static_cast<std::size_t>(std::min(steps, 1e6));
}

SimulationResult simulate(const SquareMatrix& lambda_hat, std::span<const DefaultCurve> curves,
                          std::span<const double> h1, const SimulationOptions& options) {
    const std::size_t n = h1.size();
    check_dimensions(n, lambda_hat, curves, h1);
    for (double v : h1)
        if (!(v >= 0.0 && v <= 1.0)) throw Error("simulate: shock entries must lie in [0, 1]");

    const std::size_t max_steps =
        options.max_steps ? *options.max_steps : default_max_steps(n, spectral_radius(lambda_hat));

    SimulationResult result;
    DistressState current{std::vector<double>(h1.begin(), h1.end()), 1};
    if (options.record_trajectory) result.trajectory.push_back(current);

    for (std::size_t s = 1; s <= max_steps; ++s) {
        DistressState next = step(current, lambda_hat, curves, h1, options.mode);
        double diff = 0.0, top = 0.0;
        bool all_default = true;
        for (std::size_t i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(next.h[i] - current.h[i]));
            top = std::max(top, next.h[i]);
            all_default = all_default && next.h[i] >= 1.0;
        }
        if (options.record_trajectory) result.trajectory.push_back(next);
        current = std::move(next);
        result.steps = s;

        if (options.mode == Clipping::unclipped && !(top <= options.divergence_threshold)) {
            result.outcome = Outcome::diverged;
            break;
        }
        if (options.mode == Clipping::clipped && all_default && n > 0) {
            result.outcome = Outcome::ceiling;
            break;
        }
        if (diff < options.tol) {
            result.outcome = Outcome::converged;
            break;
        }
    }
    result.final_state = std::move(current);
    return result;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::stable: return "stable";
        case Regime::unstable: return "unstable";
        case Regime::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

RegimeLabel classify_radii(double lambda_hat_max, double lambda_tilde_max, double tol) {
    RegimeLabel label{Regime::indeterminate, lambda_hat_max, lambda_tilde_max};
    if (lambda_hat_max < 1.0 - tol)
        label.regime = Regime::stable;
    else if (lambda_tilde_max > 1.0 + tol)
        label.regime = Regime::unstable;
    return label;
}

RegimeLabel classify(const SquareMatrix& lambda_hat, std::span<const DefaultCurve> curves,
                     double tol) {
    const double hat = spectral_radius(lambda_hat, std::min(tol, 1e-10));
    const double tilde = spectral_radius(tilde_matrix(lambda_hat, curves), std::min(tol, 1e-10));
    return classify_radii(hat, tilde, tol);
}

}  // namespace levnet
