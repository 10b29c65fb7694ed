#include <doctest.h>

#include <cmath>

#include "opcomm/errors.hpp"
#include "opcomm/lazy_op.hpp"

using namespace opcomm;

namespace {

Column single(BasisIndex g, EpsScalar v = EpsScalar(1))
{
    Column c;
    c.add(g, v);
    return c;
}

/// Block grid with `op` at (row, col), 1-based, and zeros elsewhere.
LazyOp::Grid one_block(int row, int col, const LazyOp& op)
{
    LazyOp::Grid g;
    g[std::size_t((row - 1) * 4 + (col - 1))] = op;
    return g;
}

BasisIndex slot_index(BasisIndex n, int s) { return 4 * (n - 1) + BasisIndex(s); }

} // namespace

TEST_CASE("U and V on basis vectors")
{
    const LazyOp U = make_U(), V = make_V();
    CHECK(U.apply(3) == single(6));
    CHECK(V.apply(1) == single(1));
    CHECK(V.apply(4) == single(7));
    CHECK(adjoint(U).apply(5).empty());
    CHECK(adjoint(U).apply(6) == single(3));
    CHECK(adjoint(V).apply(7) == single(4));
    CHECK(adjoint(V).apply(8).empty());
    CHECK_THROWS_AS(U.apply(0), InputError);
}

TEST_CASE("W swaps adjacent pairs")
{
    const LazyOp W = make_W();
    CHECK(W.apply(1) == single(2));
    CHECK(W.apply(4) == single(3));
    CHECK((W * W).apply(7) == single(7));
    for (BasisIndex n = 1; n <= 200; ++n) {
        CHECK((W * W).apply(n) == single(n));
        CHECK(adjoint(W).apply(n) == W.apply(n));
    }
    CHECK(W.norm_bound(0.3) == 1.0);
}

TEST_CASE("isometry and completeness identities")
{
    const LazyOp U = make_U(), V = make_V();
    const LazyOp UsU = adjoint(U) * U, VsV = adjoint(V) * V;
    const LazyOp UsV = adjoint(U) * V, VsU = adjoint(V) * U;
    const LazyOp complete = U * adjoint(U) + V * adjoint(V);
    ColumnEvaluator ev;
    for (BasisIndex n = 1; n <= 10000; ++n) {
        const Column e = single(n);
        REQUIRE(ev.column(UsU, n) == e);
        REQUIRE(ev.column(VsV, n) == e);
        REQUIRE(ev.column(UsV, n).empty());
        REQUIRE(ev.column(VsU, n).empty());
        REQUIRE(ev.column(complete, n) == e);
    }
}

TEST_CASE("apply cancels exactly")
{
    const LazyOp U = make_U();
    for (BasisIndex n = 1; n <= 50; ++n)
        CHECK((U + scale(EpsScalar(-1), U)).apply(n).empty());
    CHECK((U - U).apply(9).empty());
}

TEST_CASE("adjoint is an involution on expressions")
{
    const LazyOp U = make_U(), V = make_V(), W = make_W();
    const LazyOp e = scale(EpsScalar::monomial(3, -2), U * V) + W * adjoint(U) - scale(EpsScalar(2), V);
    const LazyOp ee = adjoint(adjoint(e));
    for (BasisIndex n = 1; n <= 100; ++n)
        CHECK(ee.apply(n) == e.apply(n));

    // <e_i, A* e_j> = <e_j, A e_i>
    const auto fwd = compress_exact(e, 24);
    const auto back = compress_exact(adjoint(e), 24);
    for (std::size_t i = 0; i < 24; ++i)
        for (std::size_t j = 0; j < 24; ++j)
            CHECK(fwd[i * 24 + j] == back[j * 24 + i]);
}

TEST_CASE("block4 indexing")
{
    LazyOp::Grid diag;
    for (int s = 0; s < 4; ++s)
        diag[std::size_t(s * 5)] = LazyOp::identity();
    const LazyOp I4 = block4(diag);
    for (BasisIndex g = 1; g <= 40; ++g)
        CHECK(I4.apply(g) == single(g));

    const LazyOp shuffle = block4(one_block(1, 2, LazyOp::identity()));
    for (BasisIndex n = 1; n <= 10; ++n) {
        CHECK(shuffle.apply(slot_index(n, 2)) == single(slot_index(n, 1)));
        CHECK(shuffle.apply(slot_index(n, 1)).empty());
    }
    REQUIRE(shuffle.blocks() != nullptr);
    CHECK(make_U().blocks() == nullptr);
}

TEST_CASE("conjugate_by_S")
{
    LazyOp::Grid diag;
    for (int s = 0; s < 4; ++s)
        diag[std::size_t(s * 5)] = LazyOp::identity();
    const LazyOp I4 = conjugate_by_S(block4(diag));
    for (BasisIndex g = 1; g <= 40; ++g)
        CHECK(I4.apply(g) == single(g));

    const LazyOp a14 = conjugate_by_S(block4(one_block(1, 4, scale(EpsScalar(3), LazyOp::identity()))));
    CHECK(a14.apply(slot_index(5, 4)) == single(slot_index(5, 1), EpsScalar::monomial(3, 3)));

    const LazyOp a41 = conjugate_by_S(block4(one_block(4, 1, adjoint(make_U()))));
    CHECK(a41.apply(slot_index(6, 1)) == single(slot_index(3, 4), EpsScalar::eps_power(-3)));
    CHECK(a41.apply(slot_index(5, 1)).empty());

    CHECK_THROWS_AS(conjugate_by_S(make_U()), InputError);
}

TEST_CASE("compress examples")
{
    CHECK(compress(make_U(), 4, 1.0) == Matrix(4, 4, {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0}));
    CHECK(compress(LazyOp::identity(), 7, 0.3) == identity(7));
    CHECK(compress(make_W(), 2, 1.0) == Matrix(2, 2, {0, 1, 1, 0}));
    CHECK(compress(LazyOp::zero(), 3, 1.0) == Matrix(3, 3));
    CHECK_THROWS_AS(compress(make_U(), 0, 1.0), InputError);
}

TEST_CASE("compression consistency with matrix algebra")
{
    const LazyOp U = make_U(), V = make_V(), W = make_W();
    const LazyOp Us = adjoint(U), Vs = adjoint(V);
    const double eps = 0.7;
    for (std::size_t m : {2u, 8u, 32u}) {
        // W, U*, V* keep 1..m inside 1..m for even m.
        for (const auto& [a, b] : {std::pair{W, Us}, {Us, Vs}, {W, W}, {Vs, W}}) {
            const Matrix ca = compress(a, m, eps), cb = compress(b, m, eps);
            CHECK(compress(a + b, m, eps) == ca + cb);
            CHECK(compress(a * b, m, eps) == ca * cb);
        }
        CHECK(compress(scale(EpsScalar::monomial(2, 1), W), m, eps) == (2 * eps) * compress(W, m, eps));
    }
}

TEST_CASE("conjugation matches D C D^-1")
{
    const LazyOp U = make_U(), V = make_V(), W = make_W();
    LazyOp::Grid g;
    for (std::size_t k = 0; k < 16; ++k) {
        const LazyOp base = k % 3 == 0 ? U : k % 3 == 1 ? adjoint(V) : W;
        g[k] = scale(EpsScalar(BasisIndex(k) + 1), base);
    }
    const LazyOp op = block4(g);
    const LazyOp conj = conjugate_by_S(op);
    const std::size_t m = 64;
    for (double eps : {1.0, 0.5, 0.1}) {
        const Matrix c = compress(op, m, eps);
        const Matrix cc = compress(conj, m, eps);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const int si = int(i % 4), sj = int(j % 4); // 0-based slot
                const double expected = std::pow(eps, 3 - si) * c(i, j) / std::pow(eps, 3 - sj);
                CHECK(std::abs(cc(i, j) - expected) <= 1e-12 * std::abs(expected));
            }
    }
}

TEST_CASE("index overflow is reported")
{
    const LazyOp U = make_U();
    const BasisIndex huge = BasisIndex(1) << 63;
    CHECK_THROWS_AS(U.apply(huge), OverflowError);
    CHECK_THROWS_AS(make_V().apply(huge + 1), OverflowError);
}

TEST_CASE("coefficient overflow is reported")
{
    const LazyOp big = scale(EpsScalar(EpsScalar::Coefficient(1) << 40), make_U());
    const LazyOp op = adjoint(big) * big;
    CHECK_THROWS_AS(op.apply(1), OverflowError);
    CHECK_THROWS_AS(compress(op, 4, 1.0), OverflowError);
}

TEST_CASE("norm bounds")
{
    const LazyOp U = make_U(), V = make_V();
    CHECK(U.norm_bound(1.0) == 1.0);
    CHECK(scale(EpsScalar::monomial(3, 3), U).norm_bound(0.5) == doctest::Approx(3 * 0.125));
    CHECK((U + V).norm_bound(1.0) == 2.0);
    CHECK(((U * V) * adjoint(U)).norm_bound(1.0) == 1.0);
}

TEST_CASE("parallel and serial compression agree; evaluators are deterministic")
{
    const LazyOp U = make_U(), V = make_V(), W = make_W();
    const LazyOp e = U * W + scale(EpsScalar::monomial(-2, 1), adjoint(V) * adjoint(U)) + W;
    for (double eps : {1.0, 0.25})
        CHECK(compress(e, 200, eps) == compress_serial(e, 200, eps));
    ColumnEvaluator a, b;
    for (BasisIndex g = 200; g >= 1; --g)
        CHECK(a.column(e, g) == e.apply(g));
    for (BasisIndex g = 1; g <= 200; ++g)
        CHECK(b.column(e, g) == a.column(e, g));
    CHECK_THROWS_AS(a.column(e, 0), InputError);
}
