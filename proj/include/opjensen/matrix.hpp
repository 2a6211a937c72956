#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "opjensen/errors.hpp"
#include "opjensen/functions.hpp"

namespace opjensen {

inline constexpr int kMaxDim = 64;  // desk scale; the inequalities are dimension-free

// Dense row-major matrix, just enough surface for eigenvector storage and
// the reconstruction checks.
class Matrix {
public:
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {
        if (rows < 1 || cols < 1) throw DimensionError("matrix dimensions must be positive");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<double>& data() const { return a_; }

    std::vector<double> column(int j) const {
        std::vector<double> c(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) c[static_cast<std::size_t>(i)] = (*this)(i, j);
        return c;
    }

private:
    int rows_, cols_;
    std::vector<double> a_;
};

// Real symmetric operator. Construction symmetrizes (E + E^T)/2, so the
// entries[i][j] == entries[j][i] invariant holds exactly.
class SymMatrix {
public:
    SymMatrix(int dim, const std::vector<double>& entries) : n_(dim) {
        if (dim < 1) throw DimensionError("operator dimension must be >= 1");
        if (entries.size() != static_cast<std::size_t>(dim) * dim)
            throw DimensionError("entry count does not match dimension " + std::to_string(dim));
        a_.resize(entries.size());
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                a_[idx(i, j)] = 0.5 * (entries[idx(i, j)] + entries[idx(j, i)]);
    }

    static SymMatrix diagonal(const std::vector<double>& d) {
        const int n = static_cast<int>(d.size());
        SymMatrix m = zero(n);
        for (int i = 0; i < n; ++i) m.a_[m.idx(i, i)] = d[static_cast<std::size_t>(i)];
        return m;
    }

    static SymMatrix zero(int n) {
        if (n < 1) throw DimensionError("operator dimension must be >= 1");
        SymMatrix m;
        m.n_ = n;
        m.a_.assign(static_cast<std::size_t>(n) * n, 0.0);
        return m;
    }

    int dim() const { return n_; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }
    const std::vector<double>& data() const { return a_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        if (x.size() != static_cast<std::size_t>(n_))
            throw DimensionError("vector length " + std::to_string(x.size()) +
                                 " does not match operator dimension " + std::to_string(n_));
        std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) acc += a_[idx(i, j)] * x[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = acc;
        }
        return y;
    }

private:
    SymMatrix() : n_(0) {}
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

    int n_;
    std::vector<double> a_;
};

class UnitVector {
public:
    explicit UnitVector(std::vector<double> components) : x_(std::move(components)) {
        if (x_.empty()) throw DimensionError("unit vector must have dimension >= 1");
        const double n = norm(x_);
        if (std::abs(n - 1.0) > 1e-12)
            throw ConfigError("vector norm " + std::to_string(n) + " is not 1 within 1e-12");
    }

    static UnitVector normalized(std::vector<double> v) {
        const double n = norm(v);
        if (n < 1e-14) throw ConfigError("cannot normalize a (near-)zero vector");
        for (auto& vi : v) vi /= n;
        return UnitVector(std::move(v));
    }

    int dim() const { return static_cast<int>(x_.size()); }
    double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& components() const { return x_; }

    static double norm(const std::vector<double>& v) {
        double s = 0.0;
        for (double vi : v) s += vi * vi;
        return std::sqrt(s);
    }

private:
    std::vector<double> x_;
};

// Enclosing spectral interval [m, M] with the positivity the inequalities
// require: 0 < m < M.
struct SpectrumInterval {
    double m;
    double M;

    SpectrumInterval(double m_, double M_) : m(m_), M(M_) {
        if (!(m > 0.0))
            throw PositivityError("interval requires 0 < m, got m=" + std::to_string(m));
        if (!(m < M))
            throw DegenerateSpectrumError("interval requires m < M, got m=" + std::to_string(m) +
                                          ", M=" + std::to_string(M));
    }
};

// x_1..x_n with sum of squared norms equal to 1.
class VectorFamily {
public:
    explicit VectorFamily(std::vector<std::vector<double>> vectors) : vs_(std::move(vectors)) {
        if (vs_.empty()) throw DimensionError("vector family must be nonempty");
        double s = 0.0;
        for (const auto& v : vs_)
            for (double vi : v) s += vi * vi;
        if (std::abs(s - 1.0) > 1e-12)
            throw ConfigError("sum of squared norms " + std::to_string(s) +
                              " is not 1 within 1e-12");
    }

    static VectorFamily normalized(std::vector<std::vector<double>> vectors) {
        double s = 0.0;
        for (const auto& v : vectors)
            for (double vi : v) s += vi * vi;
        if (s < 1e-28) throw ConfigError("cannot normalize an all-zero family");
        const double inv = 1.0 / std::sqrt(s);
        for (auto& v : vectors)
            for (double& vi : v) vi *= inv;
        return VectorFamily(std::move(vectors));
    }

    std::size_t size() const { return vs_.size(); }
    const std::vector<double>& operator[](std::size_t i) const { return vs_[i]; }
    const std::vector<std::vector<double>>& vectors() const { return vs_; }

private:
    std::vector<std::vector<double>> vs_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // orthonormal columns, matching order
};

// Cyclic Jacobi sweeps. Off-diagonal Frobenius threshold 1e-13 relative to
// the matrix scale, capped at 100 sweeps; quadratic convergence makes the
// cap generous at desk sizes.
inline EigenDecomposition eigh(const SymMatrix& A) {
    const int n = A.dim();
    if (n > kMaxDim)
        throw DimensionError("dimension " + std::to_string(n) + " exceeds cap " +
                             std::to_string(kMaxDim));

    std::vector<double> a = A.data();
    Matrix v = Matrix::identity(n);
    const auto at = [&a, n](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * n + j];
    };

    const double scale = std::max(1.0, A.frobenius());
    const double threshold = 1e-13 * scale;
    const auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(2.0 * s);
    };

    double off = off_norm();
    for (int sweep = 0; sweep < 100 && off > threshold; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = at(p, p);
                const double aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = akp - s * (akq + tau * akp);
                    at(p, k) = at(k, p);
                    at(k, q) = akq + s * (akp - tau * akq);
                    at(q, k) = at(k, q);
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
        off = off_norm();
    }
    if (off > threshold)
        throw ConvergenceError("Jacobi sweeps did not converge: off-diagonal residual " +
                               std::to_string(off) + " above threshold " +
                               std::to_string(threshold));

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return at(i, i) < at(j, j); });

    EigenDecomposition ed{std::vector<double>(static_cast<std::size_t>(n)), Matrix(n, n)};
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        ed.eigenvalues[static_cast<std::size_t>(j)] = at(src, src);
        for (int i = 0; i < n; ++i) ed.eigenvectors(i, j) = v(i, src);
    }
    return ed;
}

// f(A) = U diag(f(lambda)) U^T from a precomputed decomposition.
inline SymMatrix matrix_function(const SymMatrix& A, const ScalarFunction& f,
                                 const EigenDecomposition& ed) {
    const int n = A.dim();
    std::vector<double> fl(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double lambda = ed.eigenvalues[static_cast<std::size_t>(i)];
        if (!f.in_domain(lambda))
            throw FunctionDomainError("eigenvalue " + std::to_string(lambda) +
                                      " outside domain of '" + f.spec() + "'");
        fl[static_cast<std::size_t>(i)] = f(lambda);
    }
    std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += ed.eigenvectors(i, k) * fl[static_cast<std::size_t>(k)] *
                       ed.eigenvectors(j, k);
            out[static_cast<std::size_t>(i) * n + j] = acc;
        }
    return SymMatrix(n, out);
}

inline SymMatrix matrix_function(const SymMatrix& A, const ScalarFunction& f) {
    return matrix_function(A, f, eigh(A));
}

inline double quadratic_form(const SymMatrix& A, const UnitVector& x) {
    if (x.dim() != A.dim())
        throw DimensionError("vector dimension " + std::to_string(x.dim()) +
                             " does not match operator dimension " + std::to_string(A.dim()));
    const auto y = A.apply(x.components());
    double acc = 0.0;
    for (int i = 0; i < A.dim(); ++i) acc += x[i] * y[static_cast<std::size_t>(i)];
    return acc;
}

inline SpectrumInterval spectrum_bounds(const SymMatrix& A) {
    const auto ed = eigh(A);
    const double lo = ed.eigenvalues.front();
    const double hi = ed.eigenvalues.back();
    if (!(lo > 0.0))
        throw PositivityError("spectrum reaches " + std::to_string(lo) +
                              "; the inequalities require 0 < m");
    if (lo == hi)
        throw DegenerateSpectrumError("scalar operator: m == M == " + std::to_string(lo));
    return SpectrumInterval(lo, hi);
}

inline SymMatrix block_diag(const std::vector<SymMatrix>& blocks) {
    if (blocks.empty()) throw DimensionError("block_diag requires at least one block");
    int total = 0;
    for (const auto& b : blocks) total += b.dim();
    std::vector<double> out(static_cast<std::size_t>(total) * total, 0.0);
    int offset = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.dim(); ++i)
            for (int j = 0; j < b.dim(); ++j)
                out[static_cast<std::size_t>(offset + i) * total + (offset + j)] = b(i, j);
        offset += b.dim();
    }
    return SymMatrix(total, out);
}

}  // namespace opjensen
