#pragma once

// Dense and sparse nonnegative-matrix numerics: Perron root, leverage
// bounds, closed-walk weights and the linear fixed-point solve.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace levnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense n x n matrix of nonnegative reals, row-major.
///
/// Holds the leverage matrices. The constructor does not enforce
/// nonnegativity so that intermediate results can be built in place;
/// call validate() (or any spectral routine, which does it for you) to
/// check the invariant.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
    SquareMatrix(std::size_t n, std::vector<double> row_major);

    static SquareMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    double row_sum(std::size_t i) const noexcept;
    double column_sum(std::size_t j) const noexcept;
    double total() const noexcept;
    std::size_t nonzeros() const noexcept;

    SquareMatrix& operator*=(double c) noexcept;
    friend SquareMatrix operator*(double c, SquareMatrix m) noexcept { return m *= c; }

    /// Throws levnet::Error if any entry is negative or non-finite.
    void validate() const;

    /// Multiplies column j by scale[j].
    void scale_columns(std::span<const double> scale);

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);
std::vector<double> multiply(const SquareMatrix& m, std::span<const double> x);

/// Compressed sparse row view of a nonnegative matrix; the power iteration
/// runs on this so sparse ensembles cost O(nnz) per step.
struct SparseMatrix {
    std::size_t n = 0;
    std::vector<std::size_t> row_start;  // size n + 1
    std::vector<std::size_t> col;
    std::vector<double> value;

    static SparseMatrix from_dense(const SquareMatrix& m);
    /// Triplets need not be sorted; duplicates are summed.
    static SparseMatrix from_triplets(std::size_t n,
                                      std::vector<std::pair<std::size_t, std::size_t>> index,
                                      std::vector<double> weight);

    std::size_t nonzeros() const noexcept { return value.size(); }
    void multiply(std::span<const double> x, std::span<double> y) const;
};

/// Strongly connected components of the support (entries > 0), each listed
/// in ascending node order; components are returned in reverse topological
/// order of the condensation.
std::vector<std::vector<std::size_t>> strongly_connected_components(const SparseMatrix& m);

struct PowerOptions {
    double tol = 1e-10;
    /// 0 selects the default of 100 * n iterations per component.
    std::size_t max_iter = 0;
    /// Optional warm start; entries are floored to stay strictly positive.
    std::span<const double> start = {};
    /// Components up to this size fall back to a dense Hessenberg-QR
    /// eigensolver when the power iteration stalls.
    std::size_t dense_fallback_limit = 512;
};

struct PerronResult {
    double radius = 0.0;
    /// Perron vector of the dominant component, zero elsewhere, unit 1-norm.
    /// Empty when the radius is zero.
    std::vector<double> vector;
    std::size_t iterations = 0;
    bool used_dense_fallback = false;
};

/// Raised when neither the power iteration nor the dense fallback
/// produced a radius within tolerance.
class SpectralError : public Error {
public:
    SpectralError(const std::string& what, double last_estimate, double residual,
                  std::vector<double> last_iterate)
        : Error(what), last_estimate_(last_estimate), residual_(residual),
          last_iterate_(std::move(last_iterate)) {}

    double last_estimate() const noexcept { return last_estimate_; }
    double residual() const noexcept { return residual_; }
    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

private:
    double last_estimate_;
    double residual_;
    std::vector<double> last_iterate_;
};

/// Largest eigenvalue (Perron root) of a nonnegative matrix.
///
/// The support is split into strongly connected components; each
/// irreducible block runs a shifted power iteration bracketed by the
/// Collatz-Wielandt bounds min_i (Bx)_i/x_i <= rho <= max_i (Bx)_i/x_i, so
/// the returned value is certified to within tol. Acyclic supports give
/// exactly zero.
PerronResult perron(const SparseMatrix& m, const PowerOptions& options = {});
PerronResult perron(const SquareMatrix& m, const PowerOptions& options = {});

double spectral_radius(const SquareMatrix& m, double tol = 1e-10, std::size_t max_iter = 0);
double spectral_radius(const SparseMatrix& m, double tol = 1e-10, std::size_t max_iter = 0);

struct LeverageBounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// Smallest and largest row sum (per-bank leverage l_i = sum_j m_ij).
/// For irreducible m these bracket the spectral radius.
LeverageBounds leverage_bounds(const SquareMatrix& m);

/// Diagonal of m^k: entry i is the total weight of closed walks of length k
/// through i. Uses repeated squaring.
std::vector<double> power_diagonal(const SquareMatrix& m, std::size_t k);

/// Diagonals of m^1 .. m^k_max, computed incrementally.
std::vector<std::vector<double>> power_diagonals(const SquareMatrix& m, std::size_t k_max);

/// Fixed point of the linearised distress map, (I - lambda_hat)^{-1} h1.
/// Refuses when the spectral radius is not below one.
std::vector<double> linear_fixed_point(const SquareMatrix& lambda_hat, std::span<const double> h1);

}  // namespace levnet
