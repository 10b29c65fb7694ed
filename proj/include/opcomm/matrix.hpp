#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "opcomm/verdict.hpp"

namespace opcomm {

/// Dense real matrix in row-major order. Empty shapes are rejected.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transpose() const;

    /// Largest absolute entry.
    double max_abs() const noexcept;
    double min_entry() const noexcept;
    bool is_nonnegative() const noexcept;
    bool is_nonpositive() const noexcept;
    bool all_finite() const noexcept;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(double s, Matrix m);
/// Matrix product through the parallel gemm kernel.
Matrix operator*(const Matrix& lhs, const Matrix& rhs);

Matrix identity(std::size_t n);

/// AB - BA. Throws InputError unless both are square of equal size.
Matrix commutator(const Matrix& a, const Matrix& b);

double trace(const Matrix& a);

/// a^k for k >= 0; a^0 is the identity.
Matrix power(const Matrix& a, unsigned k);

/// Pass iff every entry of b - a is >= -tol. On failure the witness holds the
/// 1-based position and value of the most negative entry of b - a.
Verdict entrywise_leq(const Matrix& a, const Matrix& b, double tol);

/// P^T C P for the permutation P with P e_k = e_{order[k]}:
/// result(a, b) = c(order[a], order[b]).
Matrix permute(const Matrix& c, std::span<const std::size_t> order);

} // namespace opcomm
