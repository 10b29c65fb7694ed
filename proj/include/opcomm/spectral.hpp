#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "opcomm/matrix.hpp"

namespace opcomm {

enum class LowerMethod { compression, power_iteration };
enum class UpperMethod { block_bound, exact, power_iteration_with_residual };

std::string_view to_string(LowerMethod m) noexcept;
std::string_view to_string(UpperMethod m) noexcept;

/// Bracket [lower, upper] around a spectral (operator 2-) norm.
struct NormCertificate {
    double lower = 0.0;
    double upper = 0.0;
    LowerMethod lower_method = LowerMethod::power_iteration;
    UpperMethod upper_method = UpperMethod::power_iteration_with_residual;

    double relative_gap() const noexcept { return upper > 0.0 ? (upper - lower) / upper : 0.0; }
};

/// Power iteration ran out of budget; `best` is still a valid lower bound.
class NormUnconverged : public std::runtime_error {
public:
    NormUnconverged(const std::string& what, NormCertificate best)
        : std::runtime_error(what), best(best) {}
    NormCertificate best;
};

class RadiusUnconverged : public std::runtime_error {
public:
    RadiusUnconverged(const std::string& what, double previous, double last)
        : std::runtime_error(what), previous(previous), last(last) {}
    double previous;
    double last;
};

struct PowerIterationOptions {
    double rel_tol = 1e-10;
    int max_iterations = 10000;
};

/// Spectral norm by power iteration on A^T A, started from the normalized
/// all-ones vector.
///
/// The lower bound is ||A v|| for the final unit iterate v, which never
/// exceeds the true norm. The upper bound is sqrt(theta + ||r||), theta the
/// Rayleigh quotient of A^T A and r its residual: it brackets the eigenvalue
/// the iteration converged to. If a column of A is longer than that upper
/// bound the iterate missed the top singular direction and the iteration is
/// restarted from that column's basis vector.
///
/// After 64 plain steps without convergence the iterate seeds a restarted
/// Lanczos process on A^T A (full reorthogonalization), which resolves
/// clustered top singular values that stall plain power iteration. Every
/// product with A^T A counts toward max_iterations.
NormCertificate operator_norm(const Matrix& a, PowerIterationOptions opts = {});
inline NormCertificate operator_norm(const Matrix& a, double rel_tol) {
    return operator_norm(a, PowerIterationOptions{rel_tol, 10000});
}

/// Like operator_norm, but for an entrywise nonnegative matrix the upper
/// bound is the Collatz-Wielandt ratio max_i (A^T A w)_i / w_i for a strictly
/// positive w near the final iterate. That bound holds for every eigenvalue,
/// so `upper` is a certificate (tagged `exact`). Throws InputError on a
/// negative entry.
NormCertificate certified_nonnegative_norm(const Matrix& a, PowerIterationOptions opts = {});

/// Largest |eigenvalue| via the Gelfand limit ||A^(2^k)||_F^(1/2^k), computed
/// by repeated squaring with renormalization (at most 40 squarings) and
/// capped by the Gershgorin row and column bounds.
double spectral_radius(const Matrix& a, double rel_tol = 1e-9);

/// Smallest k <= n with ||A^k||_max <= tol_k, where tol_k is either the
/// explicit tol or, by default, 1e-9 ||(|A|)^k||_max: the magnitude that
/// rounding in the computed power can reach. Nonnegative matrices have no
/// cancellation, so for them the default demands an exact zero power.
std::optional<unsigned> nilpotency_index(const Matrix& a, std::optional<double> tol = std::nullopt);

/// Ordering `order` such that permute(C, order) is strictly upper triangular,
/// from a topological sort of the support digraph (edge j -> i iff
/// C(i, j) > 0), lowest index first among ready vertices. Empty optional iff
/// the digraph has a cycle (a self-loop counts). Throws InputError on a
/// negative entry.
std::optional<std::vector<std::size_t>> permutation_triangularization(const Matrix& c);

/// A directed cycle i0 -> i1 -> ... -> i0 of the support digraph, listed as
/// 0-based vertices with the first repeated at the end; empty if acyclic.
std::vector<std::size_t> find_support_cycle(const Matrix& c);

} // namespace opcomm
