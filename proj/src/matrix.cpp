#include "opcomm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "opcomm/errors.hpp"
#include "opcomm/kernels.hpp"

namespace opcomm {

namespace {

std::string shape(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InputError(std::string(what) + ": dimension mismatch " + shape(a) + " vs " + shape(b));
}

void require_square(const Matrix& a, const char* what)
{
    if (!a.is_square())
        throw InputError(std::string(what) + ": matrix is not square (" + shape(a) + ")");
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols)
{
    if (rows == 0 || cols == 0)
        throw InputError("matrix must have at least one row and one column");
    data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data))
{
    if (rows == 0 || cols == 0)
        throw InputError("matrix must have at least one row and one column");
    if (data_.size() != rows * cols)
        throw InputError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows * cols));
    if (!all_finite())
        throw InputError("matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag)
{
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
        m(i, i) = diag[i];
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const noexcept
{
    double m = 0.0;
    for (double x : data_)
        m = std::max(m, std::abs(x));
    return m;
}

double Matrix::min_entry() const noexcept
{
    return *std::min_element(data_.begin(), data_.end());
}

bool Matrix::is_nonnegative() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](double x) { return x >= 0.0; });
}

bool Matrix::is_nonpositive() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](double x) { return x <= 0.0; });
}

bool Matrix::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix& Matrix::operator+=(const Matrix& rhs)
{
    require_same_shape(*this, rhs, "matrix addition");
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] += rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs)
{
    require_same_shape(*this, rhs, "matrix subtraction");
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] -= rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept
{
    for (double& x : data_)
        x *= s;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(double s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs)
{
    if (lhs.cols() != rhs.rows())
        throw InputError("matrix product: dimension mismatch " + shape(lhs) + " * " + shape(rhs));
    Matrix out(lhs.rows(), rhs.cols());
    kernels::parallel::gemm(lhs.data(), rhs.data(), out.data(), lhs.rows(), lhs.cols(), rhs.cols());
    return out;
}

Matrix identity(std::size_t n) { return Matrix::identity(n); }

Matrix commutator(const Matrix& a, const Matrix& b)
{
    require_square(a, "commutator");
    require_same_shape(a, b, "commutator");
    return a * b - b * a;
}

double trace(const Matrix& a)
{
    require_square(a, "trace");
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        t += a(i, i);
    return t;
}

Matrix power(const Matrix& a, unsigned k)
{
    require_square(a, "power");
    Matrix result = Matrix::identity(a.rows());
    for (unsigned i = 0; i < k; ++i)
        result = result * a;
    return result;
}

Verdict entrywise_leq(const Matrix& a, const Matrix& b, double tol)
{
    require_same_shape(a, b, "entrywise_leq");
    Verdict v;
    v.claim = "entrywise_leq";
    double worst = std::numeric_limits<double>::infinity();
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double d = b(i, j) - a(i, j);
            if (d < worst) {
                worst = d;
                wi = i;
                wj = j;
            }
        }
    }
    v.passed = worst >= -tol;
    v.margin = worst;
    v.inputs = {{"rows", a.rows()}, {"cols", a.cols()}, {"tol", tol}};
    if (!v.passed)
        v.witness = nlohmann::json{{"row", wi + 1}, {"col", wj + 1}, {"value", worst}};
    return v;
}

Matrix permute(const Matrix& c, std::span<const std::size_t> order)
{
    require_square(c, "permute");
    if (order.size() != c.rows())
        throw InputError("permute: permutation length does not match matrix size");
    Matrix out(c.rows(), c.cols());
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = 0; b < order.size(); ++b)
            out(a, b) = c(order[a], order[b]);
    return out;
}

} // namespace opcomm
