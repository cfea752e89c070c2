#include "levnet/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace levnet {

// ============================================================================
// SquareMatrix
// ============================================================================

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n)
        throw Error("SquareMatrix: expected " + std::to_string(n * n) + " entries, got " +
                    std::to_string(data_.size()));
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double SquareMatrix::row_sum(std::size_t i) const noexcept {
    auto r = row(i);
    return std::accumulate(r.begin(), r.end(), 0.0);
}

double SquareMatrix::column_sum(std::size_t j) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, j);
    return s;
}

double SquareMatrix::total() const noexcept {
    return std::accumulate(data_.begin(), data_.end(), 0.0);
}

std::size_t SquareMatrix::nonzeros() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(data_.begin(), data_.end(), [](double v) { return v != 0.0; }));
}

SquareMatrix& SquareMatrix::operator*=(double c) noexcept {
    for (double& v : data_) v *= c;
    return *this;
}

void SquareMatrix::validate() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            if (!std::isfinite(v) || v < 0.0)
                throw Error("matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                            ") = " + std::to_string(v) + " is not a finite nonnegative value");
        }
}

void SquareMatrix::scale_columns(std::span<const double> scale) {
    if (scale.size() != n_) throw Error("scale_columns: dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        auto r = row(i);
        for (std::size_t j = 0; j < n_; ++j) r[j] *= scale[j];
    }
}

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw Error("multiply: dimension mismatch");
    SquareMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto out = c.row(i);
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < n; ++j) out[j] += aik * bk[j];
        }
    }
    return c;
}

std::vector<double> multiply(const SquareMatrix& m, std::span<const double> x) {
    if (x.size() != m.size()) throw Error("multiply: dimension mismatch");
    std::vector<double> y(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto r = m.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

// ============================================================================
// SparseMatrix
// ============================================================================

SparseMatrix SparseMatrix::from_dense(const SquareMatrix& m) {
    SparseMatrix s;
    s.n = m.size();
    s.row_start.assign(s.n + 1, 0);
    for (std::size_t i = 0; i < s.n; ++i) {
        auto r = m.row(i);
        for (std::size_t j = 0; j < s.n; ++j) {
            if (r[j] != 0.0) {
                s.col.push_back(j);
                s.value.push_back(r[j]);
            }
        }
        s.row_start[i + 1] = s.col.size();
    }
    return s;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n,
                                         std::vector<std::pair<std::size_t, std::size_t>> index,
                                         std::vector<double> weight) {
    if (index.size() != weight.size()) throw Error("from_triplets: size mismatch");
    std::vector<std::size_t> order(index.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return index[a] < index[b]; });
    SparseMatrix s;
    s.n = n;
    s.row_start.assign(n + 1, 0);
    std::size_t prev_row = n, prev_col = n;
    for (std::size_t k : order) {
        auto [i, j] = index[k];
        if (i >= n || j >= n) throw Error("from_triplets: index out of range");
        if (i == prev_row && j == prev_col) {
            s.value.back() += weight[k];
            continue;
        }
        s.col.push_back(j);
        s.value.push_back(weight[k]);
        ++s.row_start[i + 1];
        prev_row = i;
        prev_col = j;
    }
    for (std::size_t i = 0; i < n; ++i) s.row_start[i + 1] += s.row_start[i];
    return s;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) acc += value[k] * x[col[k]];
        y[i] = acc;
    }
}

// ============================================================================
// Strongly connected components (iterative Tarjan)
// ============================================================================

std::vector<std::vector<std::size_t>> strongly_connected_components(const SparseMatrix& m) {
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = m.n;
    std::vector<std::size_t> index(n, unvisited), low(n, 0), edge_pos(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack, call;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back(root);
        index[root] = low[root] = counter++;
        edge_pos[root] = m.row_start[root];
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            const std::size_t v = call.back();
            bool descended = false;
            while (edge_pos[v] < m.row_start[v + 1]) {
                const std::size_t k = edge_pos[v]++;
                if (m.value[k] == 0.0) continue;
                const std::size_t w = m.col[k];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    edge_pos[w] = m.row_start[w];
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back(w);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;

            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) {
                const std::size_t parent = call.back();
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return components;
}

// ============================================================================
// Perron root
// ============================================================================

namespace {

SparseMatrix submatrix(const SparseMatrix& m, std::span<const std::size_t> nodes,
                       std::vector<std::size_t>& local) {
    for (std::size_t a = 0; a < nodes.size(); ++a) local[nodes[a]] = a;
    SparseMatrix s;
    s.n = nodes.size();
    s.row_start.assign(s.n + 1, 0);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const std::size_t i = nodes[a];
        for (std::size_t k = m.row_start[i]; k < m.row_start[i + 1]; ++k) {
            const std::size_t j = m.col[k];
            if (local[j] != std::numeric_limits<std::size_t>::max() && m.value[k] != 0.0) {
                s.col.push_back(local[j]);
                s.value.push_back(m.value[k]);
            }
        }
        s.row_start[a + 1] = s.col.size();
    }
    for (std::size_t i : nodes) local[i] = std::numeric_limits<std::size_t>::max();
    return s;
}

double dense_radius(const SparseMatrix& b) {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b.n),
                                                  static_cast<Eigen::Index>(b.n));
    for (std::size_t i = 0; i < b.n; ++i)
        for (std::size_t k = b.row_start[i]; k < b.row_start[i + 1]; ++k)
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b.col[k])) += b.value[k];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

struct BlockOutcome {
    double radius = 0.0;
    double residual = 0.0;
    std::vector<double> x;
    std::size_t iterations = 0;
    bool converged = false;
};

// Shifted power iteration on an irreducible block with Collatz-Wielandt
// stopping rule. x must be strictly positive.
BlockOutcome block_power(const SparseMatrix& b, std::vector<double> x, double tol,
                         std::size_t max_iter) {
    const std::size_t s = b.n;
    std::vector<double> y(s);
    BlockOutcome out;

    auto normalise = [](std::vector<double>& v) {
        const double sum = std::accumulate(v.begin(), v.end(), 0.0);
        for (double& e : v) e /= sum;
    };
    normalise(x);

    auto bracket = [&](double& lo, double& hi) {
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            const double r = y[i] / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    };

    double lo = 0.0, hi = 0.0, shift = 0.0;
    for (std::size_t it = 0; it <= max_iter; ++it) {
        b.multiply(x, y);
        bracket(lo, hi);
        out.iterations = it;
        const double tol_eff = std::max(tol, 16.0 * std::numeric_limits<double>::epsilon() * hi);
        if (hi - lo <= tol_eff) {
            out.converged = true;
            break;
        }
        // Shift by half the current estimate: keeps B + shift*I primitive for
        // periodic blocks without slowing the aperiodic case much.
        if (it == 0) shift = 0.25 * (lo + hi);
        for (std::size_t i = 0; i < s; ++i) x[i] = y[i] + shift * x[i];
        normalise(x);
    }
    out.radius = 0.5 * (lo + hi);
    out.residual = hi - lo;
    out.x = std::move(x);
    return out;
}

}  // namespace

PerronResult perron(const SparseMatrix& m, const PowerOptions& options) {
    if (!(options.tol > 0.0)) throw Error("perron: tol must be positive");
    for (double v : m.value)
        if (!std::isfinite(v) || v < 0.0)
            throw Error("perron: matrix has a negative or non-finite entry");
    if (!options.start.empty() && options.start.size() != m.n)
        throw Error("perron: start vector has the wrong dimension");

    PerronResult result;
    std::vector<std::size_t> local(m.n, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> best_nodes;
    std::vector<double> best_x;

    for (const auto& comp : strongly_connected_components(m)) {
        double radius = 0.0;
        std::vector<double> x;
        if (comp.size() == 1) {
            const std::size_t i = comp.front();
            for (std::size_t k = m.row_start[i]; k < m.row_start[i + 1]; ++k)
                if (m.col[k] == i) radius += m.value[k];
            x = {1.0};
        } else {
            SparseMatrix block = submatrix(m, comp, local);
            std::vector<double> x0(comp.size(), 1.0);
            if (!options.start.empty()) {
                double top = 0.0;
                for (std::size_t a = 0; a < comp.size(); ++a)
                    top = std::max(top, options.start[comp[a]]);
                if (top > 0.0)
                    for (std::size_t a = 0; a < comp.size(); ++a)
                        x0[a] = std::max(options.start[comp[a]], 1e-6 * top);
            }
            const std::size_t max_iter =
                options.max_iter > 0 ? options.max_iter : 100 * std::max<std::size_t>(m.n, 10);
            BlockOutcome b = block_power(block, std::move(x0), options.tol, max_iter);
            result.iterations += b.iterations;
            if (!b.converged) {
                if (block.n <= options.dense_fallback_limit) {
                    const double dense = dense_radius(block);
                    if (!std::isfinite(dense))
                        throw SpectralError("perron: dense fallback failed", b.radius, b.residual,
                                            b.x);
                    b.radius = dense;
                    result.used_dense_fallback = true;
                } else {
                    throw SpectralError("perron: power iteration did not converge on a component of "
                                            "size " + std::to_string(block.n),
                                        b.radius, b.residual, b.x);
                }
            }
            radius = b.radius;
            x = std::move(b.x);
        }
        if (radius > result.radius) {
            result.radius = radius;
            best_nodes = comp;
            best_x = std::move(x);
        }
    }

    if (result.radius > 0.0) {
        result.vector.assign(m.n, 0.0);
        const double sum = std::accumulate(best_x.begin(), best_x.end(), 0.0);
        for (std::size_t a = 0; a < best_nodes.size(); ++a)
            result.vector[best_nodes[a]] = best_x[a] / sum;
    }
    return result;
}

PerronResult perron(const SquareMatrix& m, const PowerOptions& options) {
    return perron(SparseMatrix::from_dense(m), options);
}

double spectral_radius(const SquareMatrix& m, double tol, std::size_t max_iter) {
    PowerOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return perron(m, opt).radius;
}

double spectral_radius(const SparseMatrix& m, double tol, std::size_t max_iter) {
    PowerOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return perron(m, opt).radius;
}

// ============================================================================
// Bounds, closed walks, linear fixed point
// ============================================================================

LeverageBounds leverage_bounds(const SquareMatrix& m) {
    if (m.empty()) return {};
    LeverageBounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double s = m.row_sum(i);
        b.lo = std::min(b.lo, s);
        b.hi = std::max(b.hi, s);
    }
    return b;
}

namespace {

void require_finite(const SquareMatrix& m, const char* what) {
    for (double v : m.data())
        if (!std::isfinite(v)) throw Error(std::string(what) + ": matrix power overflowed");
}

std::vector<double> diagonal(const SquareMatrix& m) {
    std::vector<double> d(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) d[i] = m(i, i);
    return d;
}

}  // namespace

std::vector<double> power_diagonal(const SquareMatrix& m, std::size_t k) {
    if (k == 0) throw Error("power_diagonal: k must be at least 1");
    m.validate();
    SquareMatrix base = m;
    SquareMatrix acc;
    bool have_acc = false;
    for (std::size_t e = k;;) {
        if (e & 1u) {
            acc = have_acc ? multiply(acc, base) : base;
            have_acc = true;
            require_finite(acc, "power_diagonal");
        }
        e >>= 1u;
        if (e == 0) break;
        base = multiply(base, base);
        require_finite(base, "power_diagonal");
    }
    return diagonal(acc);
}

std::vector<std::vector<double>> power_diagonals(const SquareMatrix& m, std::size_t k_max) {
    if (k_max == 0) throw Error("power_diagonals: k_max must be at least 1");
    m.validate();
    std::vector<std::vector<double>> out;
    out.reserve(k_max);
    SquareMatrix p = m;
    out.push_back(diagonal(p));
    for (std::size_t k = 2; k <= k_max; ++k) {
        p = multiply(p, m);
        require_finite(p, "power_diagonals");
        out.push_back(diagonal(p));
    }
    return out;
}

std::vector<double> linear_fixed_point(const SquareMatrix& lambda_hat, std::span<const double> h1) {
    const std::size_t n = lambda_hat.size();
    if (h1.size() != n) throw Error("linear_fixed_point: dimension mismatch");
    for (double v : h1)
        if (!(v >= 0.0 && v <= 1.0)) throw Error("linear_fixed_point: shock outside [0, 1]");
    const double rho = spectral_radius(lambda_hat);
    if (rho >= 1.0)
        throw Error("linear_fixed_point: spectral radius " + std::to_string(rho) +
                    " >= 1, no stable linear fixed point");

    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd rhs(dim);
    for (std::size_t i = 0; i < n; ++i) {
        rhs(static_cast<Eigen::Index>(i)) = h1[i];
        for (std::size_t j = 0; j < n; ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= lambda_hat(i, j);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon()))
        throw Error("linear_fixed_point: I - lambda_hat is numerically singular");
    Eigen::VectorXd x = lu.solve(rhs);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x(static_cast<Eigen::Index>(i));
        if (!std::isfinite(out[i])) throw Error("linear_fixed_point: solve produced non-finite values");
    }
    return out;
}

}  // namespace levnet
