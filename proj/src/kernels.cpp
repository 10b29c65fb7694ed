#include "opcomm/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace opcomm::kernels {

namespace {

inline void gemm_row(const double* a, const double* b, double* c, std::size_t i, std::size_t k,
                     std::size_t n)
{
    double* crow = c + i * n;
    std::fill(crow, crow + n, 0.0);
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
        const double aip = arow[p];
        if (aip == 0.0)
            continue;
        const double* brow = b + p * n;
        for (std::size_t j = 0; j < n; ++j)
            crow[j] += aip * brow[j];
    }
}

inline double dot_row(const double* a, const double* x, std::size_t i, std::size_t n)
{
    const double* arow = a + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        s += arow[j] * x[j];
    return s;
}

// Column j of A^T x, summed in row order.
inline double dot_col(const double* a, const double* x, std::size_t j, std::size_t m, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        s += a[i * n + j] * x[i];
    return s;
}

} // namespace

namespace serial {

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t m, std::size_t k, std::size_t n)
{
    for (std::size_t i = 0; i < m; ++i)
        gemm_row(a.data(), b.data(), c.data(), i, k, n);
}

void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y,
          std::size_t m, std::size_t n)
{
    for (std::size_t i = 0; i < m; ++i)
        y[i] = dot_row(a.data(), x.data(), i, n);
}

void gemv_t(std::span<const double> a, std::span<const double> x, std::span<double> y,
            std::size_t m, std::size_t n)
{
    for (std::size_t j = 0; j < n; ++j)
        y[j] = dot_col(a.data(), x.data(), j, m, n);
}

} // namespace serial

namespace parallel {

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t m, std::size_t k, std::size_t n)
{
    const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (m * k * n > 32768)
    for (std::int64_t i = 0; i < rows; ++i)
        gemm_row(a.data(), b.data(), c.data(), static_cast<std::size_t>(i), k, n);
}

void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y,
          std::size_t m, std::size_t n)
{
    const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (m * n > 65536)
    for (std::int64_t i = 0; i < rows; ++i)
        y[static_cast<std::size_t>(i)] = dot_row(a.data(), x.data(), static_cast<std::size_t>(i), n);
}

void gemv_t(std::span<const double> a, std::span<const double> x, std::span<double> y,
            std::size_t m, std::size_t n)
{
    const auto cols = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (m * n > 65536)
    for (std::int64_t j = 0; j < cols; ++j)
        y[static_cast<std::size_t>(j)] =
            dot_col(a.data(), x.data(), static_cast<std::size_t>(j), m, n);
}

} // namespace parallel

} // namespace opcomm::kernels
