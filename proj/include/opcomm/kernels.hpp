#pragma once

// Dense row-major kernels. Every routine exists twice: a plain serial loop
// kept as the reference, and an OpenMP version that partitions output rows
// statically. Each output element is accumulated in the same order by both,
// so the two agree bit for bit.

#include <cstddef>
#include <span>

namespace opcomm::kernels {

namespace serial {

// c[m x n] = a[m x k] * b[k x n]
void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t m, std::size_t k, std::size_t n);

// y[m] = a[m x n] * x[n]
void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y,
          std::size_t m, std::size_t n);

// y[n] = a[m x n]^T * x[m]
void gemv_t(std::span<const double> a, std::span<const double> x, std::span<double> y,
            std::size_t m, std::size_t n);

} // namespace serial

namespace parallel {

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t m, std::size_t k, std::size_t n);

void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y,
          std::size_t m, std::size_t n);

void gemv_t(std::span<const double> a, std::span<const double> x, std::span<double> y,
            std::size_t m, std::size_t n);

} // namespace parallel

} // namespace opcomm::kernels
