#include "opcomm/constructions.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "opcomm/errors.hpp"
#include "opcomm/matrix_io.hpp"
#include "opcomm/spectral.hpp"

namespace opcomm {

namespace {

LazyOp times(EpsScalar::Coefficient c, const LazyOp& op) { return scale(EpsScalar(c), op); }

} // namespace

HalmosPair halmos_pair()
{
    const LazyOp I = LazyOp::identity();
    const LazyOp Z = LazyOp::zero();
    const LazyOp U = make_U(), V = make_V(), W = make_W();
    const LazyOp Us = adjoint(U), Vs = adjoint(V);

    // clang-format off
    const LazyOp A = block4({
        Z,  Vs, Z,  times(3, I),
        Z,  Us, I,  Z,
        Vs, Z,  Us, times(2, W),
        Us, Z,  Vs, Z,
    });
    const LazyOp B = block4({
        Z, Z, times(2, V), times(2, U),
        Z, Z, Z,           Z,
        Z, I, times(2, U), times(2, V),
        I, Z, Z,           Z,
    });
    const LazyOp N = block4({
        Z, Z, times(-2, W), times(-4, V * W),
        Z, Z, times(2, U),  times(2, V),
        Z, Z, Z,            times(-4, U * W),
        Z, Z, Z,            Z,
    });
    // clang-format on
    return {LazyOp::labeled("A", A), LazyOp::labeled("B", B), LazyOp::labeled("N", N), false};
}

HalmosPair halmos_pair_scaled()
{
    const HalmosPair p = halmos_pair();
    return {LazyOp::labeled("A~", conjugate_by_S(p.A_tilde)), LazyOp::labeled("B~", conjugate_by_S(p.B_tilde)),
            LazyOp::labeled("N~", conjugate_by_S(p.N_tilde)), true};
}

std::pair<LazyOp, LazyOp> self_commutator_isometry()
{
    const LazyOp U = make_U();
    const LazyOp C = adjoint(U) * U - U * adjoint(U);
    return {U, LazyOp::labeled("C", C)};
}

nlohmann::json to_json(const FactorPair& f)
{
    return {{"A", to_json(f.A)}, {"B", to_json(f.B)}};
}

namespace {

void require_nonnegative_square(const Matrix& c, const char* what)
{
    if (!c.is_square())
        throw InputError(std::string(what) + ": matrix is not square");
    if (!c.is_nonnegative())
        throw InputError(std::string(what) + ": matrix has a negative entry");
}

std::string describe_cycle(const std::vector<std::size_t>& cycle)
{
    std::string s;
    for (std::size_t k = 0; k < cycle.size(); ++k)
        s += (k ? "->" : "") + std::to_string(cycle[k] + 1);
    return s;
}

} // namespace

FactorPair nilpotent_commutator_factors(const Matrix& c, double eps)
{
    require_nonnegative_square(c, "nilpotent_commutator_factors");
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw InputError("nilpotent_commutator_factors: eps must be a positive finite number");
    const auto upper_order = permutation_triangularization(c);
    if (!upper_order)
        throw InputError("not nilpotent: cycle " + describe_cycle(find_support_cycle(c)));

    const std::size_t n = c.rows();
    const double ratio = (1.0 + eps) / eps;
    if (double(n - 1) * std::log10(ratio) > 300.0)
        throw RangeError("nilpotent_commutator_factors: diagonal ((1+eps)/eps)^(n-1) exceeds 1e300 for n = " +
                         std::to_string(n) + ", eps = " + std::to_string(eps));

    // Reversing the strictly-upper order gives a strictly lower triangular form.
    std::vector<std::size_t> order(upper_order->rbegin(), upper_order->rend());

    std::vector<double> diag(n);
    for (std::size_t k = 0; k < n; ++k)
        diag[k] = std::pow(ratio, double(k));

    FactorPair f{Matrix(n, n), Matrix(n, n), order};
    for (std::size_t k = 0; k < n; ++k)
        f.A(order[k], order[k]) = diag[k];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double cij = c(order[i], order[j]);
            if (cij != 0.0)
                f.B(order[i], order[j]) = cij / (diag[i] - diag[j]);
        }
    }
    return f;
}

FactorPair trace_zero_commutator_factors(const Matrix& c)
{
    require_nonnegative_square(c, "trace_zero_commutator_factors");
    const double tr = trace(c);
    if (std::abs(tr) > 1e-12)
        throw InputError("trace_zero_commutator_factors: trace is " + std::to_string(tr) + ", not zero");

    const std::size_t n = c.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    FactorPair f{Matrix(n, n), Matrix(n, n), std::move(order)};
    for (std::size_t i = 0; i < n; ++i) {
        f.A(i, i) = double(i + 1);
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                f.B(i, j) = c(i, j) / (double(i) - double(j));
    }
    return f;
}

} // namespace opcomm
