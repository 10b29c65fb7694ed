#pragma once

// Checkers for the commutator inequalities. Each returns Verdicts rather than
// throwing on a false statement; hypotheses are re-checked and reported as
// their own verdicts instead of being trusted.

#include <cstddef>
#include <optional>
#include <vector>

#include "opcomm/lazy_op.hpp"
#include "opcomm/matrix.hpp"
#include "opcomm/spectral.hpp"
#include "opcomm/verdict.hpp"

namespace opcomm {

/// (1 / 2 alpha) ln(1 / (alpha eps)): the least value ||a|| ||b|| can take
/// when one of a, b is positive and [a, b] >= e + x with ||x|| <= eps.
double popa_lower_bound(double eps, double alpha);

/// Passes iff norm_a * norm_b >= popa_lower_bound(eps, alpha). A failure
/// certifies that no x with ||x|| <= eps gives [a, b] >= e + x for a pair
/// with these norms. Throws InputError for alpha < 1, eps <= 0 or non-finite
/// input.
Verdict popa_bound(double norm_a, double norm_b, double eps, double alpha = 1.0);

/// (1 / alpha) exp(-2 alpha norm_a norm_b): below this radius no perturbation
/// x with ||x|| < delta allows [a, b] >= e + x.
double delta_threshold(double norm_a, double norm_b, double alpha = 1.0);

struct PowerInequalityOptions {
    unsigned n_max = 6;
    double tol = 1e-9;
    /// Restrict every entrywise check to the leading interior x interior
    /// corner (for finite sections of operators). Whole matrix when unset.
    std::optional<std::size_t> interior;
};

/// Checks [a^n, b] >= n a^(n-1) + sum_{k=0}^{n-1} a^(n-1-k) x a^k for
/// n = 1..n_max. The first two verdicts are the hypotheses a >= 0 and
/// [a, b] >= e + x; the rest are one per n. Entry comparisons use the mixed
/// tolerance tol * (1 + max(|lhs|_max, |rhs|_max)).
std::vector<Verdict> power_inequality_report(const Matrix& a, const Matrix& b, const Matrix& x,
                                             PowerInequalityOptions opts = {});

/// For a or b entrywise signed, locates the most negative entry of
/// [a, b] - I. Passes when one exists (the expected outcome); a failure
/// means no violation was found, which the trace argument rules out.
/// Throws InputError when neither a nor b is signed.
Verdict wielandt_violation_witness(const Matrix& a, const Matrix& b);

struct ObstructionOptions {
    double tol = 1e-9;
    double spectral_rel_tol = 1e-6;
};

/// Four verdicts: the hypothesis [A, B] >= I - X, then trace(X) >= n,
/// r(X) >= 1 together with ||X|| >= 1, and (X idempotent => X = I). When the
/// hypothesis fails the other three are still evaluated but marked vacuous.
std::vector<Verdict> finite_dim_obstructions(const Matrix& a, const Matrix& b, const Matrix& x,
                                             ObstructionOptions opts = {});

struct HalmosPopaCheck {
    Verdict verdict;
    NormCertificate norm_a;     // compression of A~ (lower bound is the one used)
    NormCertificate norm_b;     // compression of B~
    NormCertificate norm_n;     // 4x4 block majorant of N~ (upper bound is the one used)
    double bound = 0.0;         // (1/2) ln(1 / norm_n.upper)
};

/// Certified Popa-type check on the scaled pair at a numeric eps: compression
/// lower bounds for ||A~|| and ||B~|| against (1/2) ln(1/U_N) with U_N the
/// spectral norm of the 4x4 matrix of exact block norms of N~.
HalmosPopaCheck certified_halmos_popa_check(double eps, std::size_t window, double rel_tol = 1e-8);

/// Upper bound on the norm of a 4x4 block operator at eps: the certified
/// spectral norm of the nonnegative 4x4 matrix of block norm bounds. Only
/// `upper` is informative; `lower` is 0. Throws InputError without blocks.
NormCertificate block_norm_majorant(const LazyOp& op, double eps);

} // namespace opcomm
