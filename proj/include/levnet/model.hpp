#pragma once

// Balance sheets, exposure matrices and the leverage matrices built from
// them, plus the family of default-probability curves.

#include "levnet/spectral.hpp"

#include <span>
#include <string>
#include <vector>

namespace levnet {

struct BalanceSheet {
    std::string bank_id;
    double equity = 0.0;
    double interbank_assets = 0.0;
    double interbank_liabilities = 0.0;
    double external_assets = 0.0;
    double external_liabilities = 0.0;

    /// equity - (assets - liabilities); zero for a consistent sheet.
    double identity_residual() const noexcept;
};

/// One entry per inconsistent sheet (empty when every sheet balances).
/// Sheets are reported, never repaired.
std::vector<std::string> check_consistency(std::span<const BalanceSheet> sheets,
                                           double rel_tol = 1e-6);

/// Face values A_ij(0) of interbank loans from lender i to borrower j.
class ExposureMatrix {
public:
    ExposureMatrix() = default;
    explicit ExposureMatrix(SquareMatrix values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
    const SquareMatrix& values() const noexcept { return values_; }

    std::vector<double> lending_totals() const;    // row sums
    std::vector<double> borrowing_totals() const;  // column sums

private:
    SquareMatrix values_;
};

/// Borrower-specific recovery rates rho_j in [0, 1].
class RecoveryVector {
public:
    RecoveryVector() = default;
    explicit RecoveryVector(std::vector<double> rates);
    static RecoveryVector uniform(std::size_t n, double rate);

    std::size_t size() const noexcept { return rates_.size(); }
    double operator[](std::size_t j) const noexcept { return rates_[j]; }
    std::span<const double> rates() const noexcept { return rates_; }

private:
    std::vector<double> rates_;
};

enum class CurveFamily { linear, power, exponential };

/// Probability of default as a function of relative equity loss h.
///
/// Every family satisfies p(0) = 0, p(1) = 1 and is nondecreasing, convex
/// and differentiable on [0, 1]:
///   linear       p(h) = h
///   power        p(h) = h^alpha,                       alpha >= 1
///   exponential  p(h) = (e^{beta h} - 1)/(e^beta - 1),  beta > 0
class DefaultCurve {
public:
    static DefaultCurve linear();
    static DefaultCurve power(double alpha);
    static DefaultCurve exponential(double beta);
    /// Parses "linear", "power:<alpha>" or "exponential:<beta>".
    static DefaultCurve parse(const std::string& text);

    CurveFamily family() const noexcept { return family_; }
    double parameter() const noexcept { return parameter_; }
    double derivative_at_zero() const noexcept { return slope0_; }

    /// Throws if h is outside [0, 1]; values are never clamped.
    double operator()(double h) const;
    double derivative(double h) const;

    /// Natural continuation of the closed form beyond [0, 1]; used only by
    /// the unclipped diagnostic dynamics.
    double extended(double h) const noexcept;

    std::string to_string() const;

private:
    DefaultCurve(CurveFamily f, double param);

    CurveFamily family_ = CurveFamily::linear;
    double parameter_ = 1.0;
    double slope0_ = 1.0;
};

/// Lambda_ij = A_ij(0) / E_i(0).
SquareMatrix build_leverage(const ExposureMatrix& exposures, std::span<const BalanceSheet> sheets);

/// Lambda_hat_ij = Lambda_ij (1 - rho_j).
SquareMatrix adjust_recovery(const SquareMatrix& leverage, const RecoveryVector& recovery);

/// Lambda_tilde_ij = Lambda_hat_ij p_j'(0).
SquareMatrix tilde_matrix(const SquareMatrix& lambda_hat, std::span<const DefaultCurve> curves);
SquareMatrix tilde_matrix(const SquareMatrix& lambda_hat, const DefaultCurve& curve);

double curve_eval(const DefaultCurve& curve, double h);

/// Per-bank leverage l_i (row sums) and the average sum_ij / n.
std::vector<double> bank_leverages(const SquareMatrix& leverage);
double average_leverage(const SquareMatrix& leverage);

}  // namespace levnet
