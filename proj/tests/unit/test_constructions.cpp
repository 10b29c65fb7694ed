#include <doctest.h>

#include <cmath>
#include <random>

#include "opcomm/constructions.hpp"
#include "opcomm/errors.hpp"
#include "opcomm/spectral.hpp"
#include "oracles.hpp"

using namespace opcomm;

namespace {

BasisIndex slot_index(BasisIndex n, int s) { return 4 * (n - 1) + BasisIndex(s); }

bool columns_nonnegative(const Column& c)
{
    for (const auto& [g, v] : c.entries())
        if (!v.has_nonnegative_coefficients())
            return false;
    return true;
}

const LazyOp& block(const LazyOp& op, int row, int col)
{
    return (*op.blocks())[std::size_t((row - 1) * 4 + (col - 1))];
}

/// Two operators agree on columns 1..depth.
bool same_columns(const LazyOp& a, const LazyOp& b, BasisIndex depth)
{
    ColumnEvaluator ea, eb;
    for (BasisIndex g = 1; g <= depth; ++g)
        if (!(ea.column(a, g) == eb.column(b, g)))
            return false;
    return true;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

} // namespace

TEST_CASE("the commutator of the pair is I + N exactly")
{
    for (const HalmosPair& p : {halmos_pair(), halmos_pair_scaled()}) {
        const LazyOp defect = commutator(p.A_tilde, p.B_tilde) - LazyOp::identity() - p.N_tilde;
        ColumnEvaluator ev;
        for (BasisIndex g = 1; g <= 64; ++g)
            CHECK(ev.column(defect, g).empty());
    }
}

TEST_CASE("N has nil-index 3")
{
    for (const HalmosPair& p : {halmos_pair(), halmos_pair_scaled()}) {
        const LazyOp& N = p.N_tilde;
        const LazyOp N2 = N * N, N3 = N2 * N;
        bool nonzero_square = false;
        for (BasisIndex g = 1; g <= 64; ++g) {
            CHECK(N3.apply(g).empty());
            nonzero_square = nonzero_square || (g <= 16 && !N2.apply(g).empty());
        }
        CHECK(nonzero_square);
    }
}

TEST_CASE("N^2 blocks are 8WUW and -8U^2W")
{
    const HalmosPair p = halmos_pair();
    const LazyOp U = make_U(), W = make_W();
    const LazyOp N2 = p.N_tilde * p.N_tilde;
    const LazyOp b14 = scale(EpsScalar(8), W * U * W);
    const LazyOp b24 = scale(EpsScalar(-8), U * U * W);
    for (BasisIndex n = 1; n <= 16; ++n) {
        // slot 4 input; read slots 1 and 2 of the output
        const Column col = N2.apply(slot_index(n, 4));
        const Column e14 = b14.apply(n), e24 = b24.apply(n);
        for (const auto& [k, v] : e14.entries())
            CHECK(col.at(slot_index(k, 1)) == v);
        for (const auto& [k, v] : e24.entries())
            CHECK(col.at(slot_index(k, 2)) == v);
        CHECK(col.size() == e14.size() + e24.size());
    }
}

TEST_CASE("block layout of A, B, N")
{
    const HalmosPair p = halmos_pair();
    const LazyOp U = make_U(), V = make_V(), W = make_W();
    // column 4 of B is (2U, 0, 2V, 0)^T
    const Column c = p.B_tilde.apply(slot_index(1, 4));
    CHECK(c.at(slot_index(2, 1)) == EpsScalar(2)); // 2U e_1 = 2 e_2 in slot 1
    CHECK(c.at(slot_index(1, 3)) == EpsScalar(2)); // 2V e_1 = 2 e_1 in slot 3
    CHECK(c.size() == 2);

    CHECK(same_columns(block(p.N_tilde, 1, 3), scale(EpsScalar(-2), W), 40));
    CHECK(same_columns(block(p.N_tilde, 1, 4), scale(EpsScalar(-4), V * W), 40));
    CHECK(same_columns(block(p.N_tilde, 2, 3), scale(EpsScalar(2), U), 40));
    CHECK(same_columns(block(p.N_tilde, 2, 4), scale(EpsScalar(2), V), 40));
    CHECK(same_columns(block(p.N_tilde, 3, 4), scale(EpsScalar(-4), U * W), 40));
    CHECK(same_columns(block(p.A_tilde, 1, 4), scale(EpsScalar(3), LazyOp::identity()), 40));
}

TEST_CASE("scaled blocks carry eps exactly")
{
    const HalmosPair p = halmos_pair_scaled();
    CHECK(p.eps_symbolic);
    const LazyOp U = make_U(), V = make_V(), W = make_W();
    CHECK(same_columns(block(p.N_tilde, 2, 3), scale(EpsScalar::monomial(2, 1), U), 40));
    CHECK(same_columns(block(p.A_tilde, 4, 1), scale(EpsScalar::eps_power(-3), adjoint(U)), 40));
    CHECK(same_columns(block(p.A_tilde, 1, 4), scale(EpsScalar::monomial(3, 3), LazyOp::identity()), 40));
    CHECK(same_columns(block(p.N_tilde, 1, 3), scale(EpsScalar::monomial(-2, 2), W), 40));
    CHECK(same_columns(block(p.N_tilde, 1, 4), scale(EpsScalar::monomial(-4, 3), V * W), 40));
    CHECK(same_columns(block(p.N_tilde, 2, 4), scale(EpsScalar::monomial(2, 2), V), 40));
    CHECK(same_columns(block(p.N_tilde, 3, 4), scale(EpsScalar::monomial(-4, 1), U * W), 40));
}

TEST_CASE("A and B are positive operators")
{
    for (const HalmosPair& p : {halmos_pair(), halmos_pair_scaled()}) {
        ColumnEvaluator ev;
        for (BasisIndex g = 1; g <= 500; ++g) {
            CHECK(columns_nonnegative(ev.column(p.A_tilde, g)));
            CHECK(columns_nonnegative(ev.column(p.B_tilde, g)));
        }
    }
    const HalmosPair s = halmos_pair_scaled();
    for (double eps : {1.0, 0.5, 0.05}) {
        CHECK(compress(s.A_tilde, 128, eps).is_nonnegative());
        CHECK(compress(s.B_tilde, 128, eps).is_nonnegative());
    }
}

TEST_CASE("self-commutator of the isometry U")
{
    const auto [U, C] = self_commutator_isometry();
    Column one;
    one.add(1, EpsScalar(1));
    CHECK(C.apply(1) == one);
    CHECK(C.apply(2).empty());
    CHECK(same_columns(C * C, C, 100));
    CHECK(same_columns(adjoint(U) * U, LazyOp::identity(), 100));
    for (BasisIndex g = 1; g <= 100; ++g)
        CHECK(C.apply(g).size() == (g % 2));
}

TEST_CASE("nilpotent factorization examples")
{
    const FactorPair f = nilpotent_commutator_factors(Matrix(2, 2, {0, 0, 1, 0}), 1.0);
    CHECK(f.A == Matrix(2, 2, {1, 0, 0, 2}));
    CHECK(f.B == Matrix(2, 2, {0, 0, 1, 0}));
    CHECK(commutator(f.A, f.B) == Matrix(2, 2, {0, 0, 1, 0}));
    CHECK(oracle::naive_product(f.B, f.A) == Matrix(2, 2, {0, 0, 1, 0}));

    const FactorPair z = nilpotent_commutator_factors(Matrix(3, 3), 0.7);
    CHECK(z.B == Matrix(3, 3));
    CHECK(commutator(z.A, z.B).max_abs() == 0.0);

    const Matrix c3(3, 3, {0, 0, 0, 1, 0, 0, 1, 1, 0});
    const FactorPair g = nilpotent_commutator_factors(c3, 0.5);
    CHECK(g.A == Matrix::diagonal(std::vector<double>{1, 3, 9}));
    CHECK(max_abs_diff(oracle::naive_product(g.A, g.B) - oracle::naive_product(g.B, g.A), c3) <= 1e-14);
    CHECK(entrywise_leq(oracle::naive_product(g.B, g.A), 0.5 * c3, 1e-14).passed);
    CHECK(g.B.is_nonnegative());
}

TEST_CASE("nilpotent factorization on permuted supports")
{
    // upper triangular: needs the reversing permutation
    const Matrix c(2, 2, {0, 1, 0, 0});
    const FactorPair f = nilpotent_commutator_factors(c, 1.0);
    CHECK(max_abs_diff(commutator(f.A, f.B), c) <= 1e-15);
    CHECK(f.A(0, 0) == 2.0);
    CHECK(f.A(1, 1) == 1.0);
    // A increases along the stored order
    for (std::size_t k = 1; k < f.order.size(); ++k)
        CHECK(f.A(f.order[k], f.order[k]) > f.A(f.order[k - 1], f.order[k - 1]));
}

TEST_CASE("nilpotent factorization properties")
{
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::size_t> sz(2, 50);
    std::uniform_real_distribution<double> dens(0.1, 0.9);
    for (int t = 0; t < 160; ++t) {
        const double eps = std::array{0.1, 0.5, 1.0, 10.0}[std::size_t(t % 4)];
        std::size_t n = sz(rng);
        if (eps == 0.1)
            n = std::min<std::size_t>(n, 30);
        const Matrix c = oracle::random_nilpotent(rng, n, dens(rng));
        const FactorPair f = nilpotent_commutator_factors(c, eps);
        const double kappa = std::pow((1 + eps) / eps, double(n - 1));
        const Matrix residual = oracle::naive_product(f.A, f.B) - oracle::naive_product(f.B, f.A) - c;
        CAPTURE(n);
        CAPTURE(eps);
        CHECK(residual.max_abs() <= 1e-9 * (1 + c.max_abs()) * kappa);
        CHECK(entrywise_leq(oracle::naive_product(f.B, f.A), eps * c, 1e-9).passed);
        CHECK(f.B.is_nonnegative());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(f.B(i, i) == 0.0);
            CHECK(f.A(i, i) > 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    CHECK(f.A(i, j) == 0.0);
        }
    }
}

TEST_CASE("nilpotent factorization errors")
{
    try {
        nilpotent_commutator_factors(Matrix(2, 2, {0, 1, 1, 0}), 1.0);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("not nilpotent: cycle 1->2->1") != std::string::npos);
    }
    CHECK_THROWS_AS(nilpotent_commutator_factors(Matrix(2, 2, {0, 0, -1, 0}), 1.0), InputError);
    CHECK_THROWS_AS(nilpotent_commutator_factors(Matrix(2, 2, {0, 0, 1, 0}), 0.0), InputError);
    CHECK_THROWS_AS(nilpotent_commutator_factors(Matrix(2, 3), 1.0), InputError);

    std::mt19937_64 rng(1);
    const Matrix big = oracle::random_nilpotent(rng, 120, 0.5);
    CHECK_THROWS_AS(nilpotent_commutator_factors(big, 1e-3), RangeError);
    CHECK_NOTHROW(nilpotent_commutator_factors(oracle::random_nilpotent(rng, 21, 0.5), 9e-4));
}

TEST_CASE("trace-zero factorization examples")
{
    const Matrix c(2, 2, {0, 1, 1, 0});
    const FactorPair f = trace_zero_commutator_factors(c);
    CHECK(f.A == Matrix::diagonal(std::vector<double>{1, 2}));
    CHECK(f.B == Matrix(2, 2, {0, -1, 1, 0}));
    CHECK(oracle::naive_product(f.A, f.B) - oracle::naive_product(f.B, f.A) == c);

    CHECK(trace_zero_commutator_factors(Matrix(4, 4)).B == Matrix(4, 4));

    Matrix c31(3, 3);
    c31(2, 0) = 6.0;
    const FactorPair g = trace_zero_commutator_factors(c31);
    CHECK(g.B(2, 0) == 3.0);
    CHECK(oracle::naive_product(g.A, g.B) - oracle::naive_product(g.B, g.A) == c31);

    CHECK_THROWS_AS(trace_zero_commutator_factors(identity(2)), InputError);
    CHECK_THROWS_AS(trace_zero_commutator_factors(Matrix(2, 2, {0, -1, 0, 0})), InputError);
}

TEST_CASE("trace-zero factorization properties")
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> sz(2, 50);
    std::uniform_real_distribution<double> dens(0.1, 0.9);
    int cyclic = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = sz(rng);
        Matrix c = t % 2 ? oracle::random_cyclic(rng, n, dens(rng)) : oracle::random_nilpotent(rng, n, dens(rng));
        const FactorPair f = trace_zero_commutator_factors(c);
        const Matrix residual = oracle::naive_product(f.A, f.B) - oracle::naive_product(f.B, f.A) - c;
        CHECK(residual.max_abs() <= 1e-9 * double(n) * c.max_abs());
        CHECK(f.A.is_nonnegative());
        if (!permutation_triangularization(c)) {
            ++cyclic;
            // a support cycle rules out a positive B
            CHECK(f.B.min_entry() < 0.0);
        }
    }
    CHECK(cyclic == 100);
}

TEST_CASE("FactorPair JSON")
{
    const FactorPair f = trace_zero_commutator_factors(Matrix(2, 2, {0, 1, 1, 0}));
    const auto j = to_json(f);
    CHECK(j.contains("A"));
    CHECK(j["B"]["data"] == nlohmann::json::array({0.0, -1.0, 1.0, 0.0}));
}

TEST_CASE("norm scaling of the scaled family at window 512")
{
    const HalmosPair p = halmos_pair_scaled();
    std::vector<double> lx, la, lb;
    for (double eps : {0.05, 0.1, 0.2, 0.4}) {
        const double nn = operator_norm(compress(p.N_tilde, 512, eps), 1e-8).upper;
        CHECK(nn / eps >= 1.0);
        CHECK(nn / eps <= 10.0);
        lx.push_back(std::log(eps));
        la.push_back(std::log(operator_norm(compress(p.A_tilde, 512, eps), 1e-8).lower));
        lb.push_back(std::log(operator_norm(compress(p.B_tilde, 512, eps), 1e-8).lower));
    }
    auto slope = [&](const std::vector<double>& y) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            mx += lx[i] / double(y.size());
            my += y[i] / double(y.size());
        }
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            sxy += (lx[i] - mx) * (y[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        return sxy / sxx;
    };
    CHECK(slope(la) >= -3.3);
    CHECK(slope(la) <= -2.7);
    CHECK(slope(lb) >= -3.3);
    CHECK(slope(lb) <= -2.7);
}
