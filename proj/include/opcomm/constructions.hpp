#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opcomm/lazy_op.hpp"
#include "opcomm/matrix.hpp"

namespace opcomm {

/// Positive operators A, B on l^2 with [A, B] = I + N, N nilpotent of index 3.
/// When `eps_symbolic` is set the operators are the S_eps-conjugated family
/// and carry eps exactly in their EpsScalar coefficients.
struct HalmosPair {
    LazyOp A_tilde;
    LazyOp B_tilde;
    LazyOp N_tilde;
    bool eps_symbolic = false;
};

HalmosPair halmos_pair();
HalmosPair halmos_pair_scaled();

/// (U, C) with C = U*U - UU*, the projection onto odd-indexed basis vectors.
std::pair<LazyOp, LazyOp> self_commutator_isometry();

/// C = AB - BA with A diagonal and positive.
/// `order` lists the original indices in the basis where A's diagonal
/// increases (and, for the nilpotent factorization, C is strictly lower
/// triangular); it is the identity for the trace-zero factorization.
struct FactorPair {
    Matrix A;
    Matrix B;
    std::vector<std::size_t> order;
};

nlohmann::json to_json(const FactorPair& f);

/// For entrywise nonnegative nilpotent C: positive diagonal A and positive B
/// with C = AB - BA and BA <= eps C. C is first permuted to strictly lower
/// triangular form, A has diagonal ((1 + eps) / eps)^(k-1) there, and
/// b_ij = c_ij / (a_ii - a_jj) below the diagonal.
///
/// Throws InputError for a negative entry, a support cycle (message names the
/// cycle), or eps <= 0, and RangeError when the diagonal of A would exceed
/// 1e300.
FactorPair nilpotent_commutator_factors(const Matrix& c, double eps);

/// For entrywise nonnegative C with trace zero: A = diag(1, ..., n) and
/// b_ij = c_ij / (i - j) off the diagonal. Throws InputError on a negative
/// entry or |trace(C)| > 1e-12.
FactorPair trace_zero_commutator_factors(const Matrix& c);

} // namespace opcomm
