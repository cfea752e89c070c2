#include "levnet/model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <numeric>

namespace levnet {

double BalanceSheet::identity_residual() const noexcept {
    return equity - (external_assets - external_liabilities + interbank_assets - interbank_liabilities);
}

std::vector<std::string> check_consistency(std::span<const BalanceSheet> sheets, double rel_tol) {
    std::vector<std::string> issues;
    for (const auto& s : sheets) {
        if (!(s.equity > 0.0)) {
            issues.push_back(s.bank_id + ": equity " + std::to_string(s.equity) + " is not positive");
            continue;
        }
        if (s.interbank_assets < 0.0 || s.interbank_liabilities < 0.0 || s.external_assets < 0.0 ||
            s.external_liabilities < 0.0) {
            issues.push_back(s.bank_id + ": negative balance-sheet entry");
            continue;
        }
        const double scale = std::max({s.equity, s.external_assets + s.interbank_assets,
                                       s.external_liabilities + s.interbank_liabilities});
        const double r = s.identity_residual();
        if (std::abs(r) > rel_tol * scale)
            issues.push_back(s.bank_id + ": equity differs from assets minus liabilities by " +
                             std::to_string(r));
    }
    return issues;
}

// ============================================================================
// ExposureMatrix / RecoveryVector
// ============================================================================

ExposureMatrix::ExposureMatrix(SquareMatrix values) : values_(std::move(values)) {
    values_.validate();
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_(i, i) != 0.0)
            throw Error("exposure matrix: bank " + std::to_string(i) + " lends to itself");
}

std::vector<double> ExposureMatrix::lending_totals() const {
    std::vector<double> r(size());
    for (std::size_t i = 0; i < size(); ++i) r[i] = values_.row_sum(i);
    return r;
}

std::vector<double> ExposureMatrix::borrowing_totals() const {
    std::vector<double> c(size());
    for (std::size_t j = 0; j < size(); ++j) c[j] = values_.column_sum(j);
    return c;
}

RecoveryVector::RecoveryVector(std::vector<double> rates) : rates_(std::move(rates)) {
    for (std::size_t j = 0; j < rates_.size(); ++j)
        if (!(rates_[j] >= 0.0 && rates_[j] <= 1.0))
            throw Error("recovery rate of bank " + std::to_string(j) + " = " +
                        std::to_string(rates_[j]) + " is outside [0, 1]");
}

RecoveryVector RecoveryVector::uniform(std::size_t n, double rate) {
    return RecoveryVector(std::vector<double>(n, rate));
}

// ============================================================================
// DefaultCurve
// ============================================================================

DefaultCurve::DefaultCurve(CurveFamily f, double param) : family_(f), parameter_(param) {
    switch (family_) {
        case CurveFamily::linear:
            slope0_ = 1.0;
            break;
        case CurveFamily::power:
            if (!(param >= 1.0) || !std::isfinite(param))
                throw Error("power default curve needs alpha >= 1, got " + std::to_string(param));
            slope0_ = param == 1.0 ? 1.0 : 0.0;
            break;
        case CurveFamily::exponential:
            if (!(param > 0.0) || !std::isfinite(param) || param > 700.0)
                throw Error("exponential default curve needs 0 < beta <= 700, got " +
                            std::to_string(param));
            slope0_ = param / std::expm1(param);
            break;
    }
}

DefaultCurve DefaultCurve::linear() { return DefaultCurve(CurveFamily::linear, 1.0); }
DefaultCurve DefaultCurve::power(double alpha) { return DefaultCurve(CurveFamily::power, alpha); }
DefaultCurve DefaultCurve::exponential(double beta) {
    return DefaultCurve(CurveFamily::exponential, beta);
}

DefaultCurve DefaultCurve::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    if (name == "linear" && colon == std::string::npos) return linear();
    if (colon == std::string::npos || (name != "power" && name != "exponential"))
        throw Error("unknown default curve '" + text +
                    "' (expected linear, power:<alpha> or exponential:<beta>)");
    const std::string arg = text.substr(colon + 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
    if (ec != std::errc() || ptr != arg.data() + arg.size())
        throw Error("bad default-curve parameter in '" + text + "'");
    return name == "power" ? power(value) : exponential(value);
}

double DefaultCurve::extended(double h) const noexcept {
    switch (family_) {
        case CurveFamily::linear:
            return h;
        case CurveFamily::power:
            return std::pow(std::max(h, 0.0), parameter_);
        case CurveFamily::exponential:
            return std::expm1(parameter_ * h) / std::expm1(parameter_);
    }
    return h;
}

double DefaultCurve::operator()(double h) const {
    if (!(h >= 0.0 && h <= 1.0))
        throw Error("default curve evaluated at h = " + std::to_string(h) + " outside [0, 1]");
    return extended(h);
}

double DefaultCurve::derivative(double h) const {
    if (!(h >= 0.0 && h <= 1.0))
        throw Error("default curve derivative at h = " + std::to_string(h) + " outside [0, 1]");
    switch (family_) {
        case CurveFamily::linear:
            return 1.0;
        case CurveFamily::power:
            return parameter_ * std::pow(h, parameter_ - 1.0);
        case CurveFamily::exponential:
            return parameter_ * std::exp(parameter_ * h) / std::expm1(parameter_);
    }
    return 1.0;
}

std::string DefaultCurve::to_string() const {
    char buf[64];
    switch (family_) {
        case CurveFamily::linear:
            return "linear";
        case CurveFamily::power:
            std::snprintf(buf, sizeof buf, "power:%.17g", parameter_);
            return buf;
        case CurveFamily::exponential:
            std::snprintf(buf, sizeof buf, "exponential:%.17g", parameter_);
            return buf;
    }
    return "linear";
}

double curve_eval(const DefaultCurve& curve, double h) { return curve(h); }

// ============================================================================
// Leverage matrices
// ============================================================================

SquareMatrix build_leverage(const ExposureMatrix& exposures, std::span<const BalanceSheet> sheets) {
    const std::size_t n = exposures.size();
    if (sheets.size() != n)
        throw Error("build_leverage: " + std::to_string(sheets.size()) + " balance sheets for " +
                    std::to_string(n) + " banks");
    SquareMatrix lev(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = sheets[i].equity;
        if (!(e > 0.0) || !std::isfinite(e))
            throw Error("build_leverage: bank '" + sheets[i].bank_id + "' has nonpositive equity " +
                        std::to_string(e));
        for (std::size_t j = 0; j < n; ++j) lev(i, j) = exposures(i, j) / e;
    }
    return lev;
}

SquareMatrix adjust_recovery(const SquareMatrix& leverage, const RecoveryVector& recovery) {
    if (recovery.size() != leverage.size()) throw Error("adjust_recovery: dimension mismatch");
    std::vector<double> keep(recovery.size());
    for (std::size_t j = 0; j < keep.size(); ++j) keep[j] = 1.0 - recovery[j];
    SquareMatrix out = leverage;
    out.scale_columns(keep);
    return out;
}

SquareMatrix tilde_matrix(const SquareMatrix& lambda_hat, std::span<const DefaultCurve> curves) {
    if (curves.size() != lambda_hat.size()) throw Error("tilde_matrix: dimension mismatch");
    std::vector<double> slope(curves.size());
    for (std::size_t j = 0; j < slope.size(); ++j) slope[j] = curves[j].derivative_at_zero();
    SquareMatrix out = lambda_hat;
    out.scale_columns(slope);
    return out;
}

SquareMatrix tilde_matrix(const SquareMatrix& lambda_hat, const DefaultCurve& curve) {
    std::vector<DefaultCurve> curves(lambda_hat.size(), curve);
    return tilde_matrix(lambda_hat, curves);
}

std::vector<double> bank_leverages(const SquareMatrix& leverage) {
    std::vector<double> l(leverage.size());
    for (std::size_t i = 0; i < l.size(); ++i) l[i] = leverage.row_sum(i);
    return l;
}

double average_leverage(const SquareMatrix& leverage) {
    return leverage.empty() ? 0.0 : leverage.total() / static_cast<double>(leverage.size());
}

}  // namespace levnet
