#include "opcomm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <numeric>
#include <queue>
#include <string>

#include "opcomm/errors.hpp"
#include "opcomm/kernels.hpp"

namespace opcomm {

std::string_view to_string(LowerMethod m) noexcept
{
    switch (m) {
    case LowerMethod::compression: return "compression";
    case LowerMethod::power_iteration: return "power-iteration";
    }
    return "unknown";
}

std::string_view to_string(UpperMethod m) noexcept
{
    switch (m) {
    case UpperMethod::block_bound: return "block-bound";
    case UpperMethod::exact: return "exact";
    case UpperMethod::power_iteration_with_residual: return "power-iteration-with-residual";
    }
    return "unknown";
}

namespace {

double norm2(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s);
}

struct PowerResult {
    NormCertificate cert;
    std::vector<double> v; // final unit iterate
    bool converged = false;
    int steps = 0;         // products with A^T A
};

struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    double theta = 0.0;
};

// For unit v: lower = ||A v||, upper = sqrt(theta + ||A^T A v - theta v||).
// z receives A^T A v.
Bracket rayleigh_bracket(const Matrix& a, std::span<const double> v, std::vector<double>& w,
                         std::vector<double>& z)
{
    const std::size_t m = a.rows(), n = a.cols();
    kernels::parallel::gemv(a.data(), v, w, m, n);
    kernels::parallel::gemv_t(a.data(), w, z, m, n);
    Bracket b;
    b.lower = norm2(w);
    b.theta = b.lower * b.lower;
    double r2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = z[j] - b.theta * v[j];
        r2 += r * r;
    }
    b.upper = std::sqrt(b.theta + std::sqrt(r2));
    return b;
}

// Folds one bracket into the running certificate and reports convergence.
// theta + |r| bounds the eigenvalue nearest theta, so only the current
// iterate's value is kept for the upper side; a running minimum could pin a
// lower eigenvalue.
bool absorb(PowerResult& out, const Bracket& b, double rel_tol)
{
    out.cert.lower = std::max(out.cert.lower, b.lower);
    out.cert.upper = std::max(b.upper, out.cert.lower);
    return out.cert.upper == 0.0 ||
           (b.upper >= out.cert.lower * (1.0 - rel_tol) && out.cert.relative_gap() <= rel_tol);
}

void power_iterate(const Matrix& a, PowerResult& out, int budget, double rel_tol)
{
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<double> w(m), z(n);
    for (int it = 0; it < budget; ++it) {
        const Bracket b = rayleigh_bracket(a, out.v, w, z);
        ++out.steps;
        if (absorb(out, b, rel_tol)) {
            out.converged = true;
            return;
        }
        const double zn = norm2(z);
        if (zn == 0.0) // v is in the null space; nothing left to refine
            return;
        for (std::size_t j = 0; j < n; ++j)
            out.v[j] = z[j] / zn;
    }
}

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) below x.
std::size_t sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x)
{
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double off = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1];
        d = alpha[i] - x - (i == 0 ? 0.0 : off / d);
        if (d == 0.0)
            d = -std::numeric_limits<double>::min();
        if (d < 0.0)
            ++count;
    }
    return count;
}

// Top eigenpair of a symmetric tridiagonal: bisection on Sturm counts, then
// inverse iteration for the vector.
std::vector<double> tridiagonal_top_vector(const std::vector<double>& alpha, const std::vector<double>& beta)
{
    const std::size_t k = alpha.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < k ? std::abs(beta[i]) : 0.0);
        lo = std::min(lo, alpha[i] - r);
        hi = std::max(hi, alpha[i] + r);
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (sturm_count(alpha, beta, mid) == k)
            hi = mid;
        else
            lo = mid;
    }
    const double sigma = hi + 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi));

    std::vector<double> y(k, 1.0 / std::sqrt(double(k))), diag(k), upper(k), rhs(k);
    for (int sweep = 0; sweep < 3; ++sweep) {
        // Solve (T - sigma I) y_new = y by Gaussian elimination without pivoting.
        for (std::size_t i = 0; i < k; ++i) {
            diag[i] = alpha[i] - sigma;
            rhs[i] = y[i];
        }
        for (std::size_t i = 0; i + 1 < k; ++i) {
            if (diag[i] == 0.0)
                diag[i] = std::numeric_limits<double>::min();
            const double f = beta[i] / diag[i];
            diag[i + 1] -= f * beta[i];
            rhs[i + 1] -= f * rhs[i];
        }
        if (diag[k - 1] == 0.0)
            diag[k - 1] = std::numeric_limits<double>::min();
        y[k - 1] = rhs[k - 1] / diag[k - 1];
        for (std::size_t i = k - 1; i-- > 0;)
            y[i] = (rhs[i] - beta[i] * y[i + 1]) / diag[i];
        const double yn = norm2(y);
        if (!std::isfinite(yn) || yn == 0.0)
            break;
        for (double& t : y)
            t /= yn;
    }
    return y;
}

// Lanczos on A^T A with full reorthogonalization, restarted from the top Ritz
// vector. Power iteration stalls when the leading singular values cluster,
// which is typical for finite sections of operators with continuous spectrum.
void lanczos_refine(const Matrix& a, PowerResult& out, int budget, double rel_tol)
{
    const std::size_t m = a.rows(), n = a.cols();
    constexpr std::size_t max_basis = 600;
    std::vector<double> w(m), z(n), x(n);
    while (budget > 1) {
        const std::size_t k_max = std::min({n, max_basis, std::size_t(budget - 1)});
        std::vector<std::vector<double>> q{out.v};
        std::vector<double> alpha, beta;
        double scale = 0.0;
        for (std::size_t j = 0; j < k_max; ++j) {
            kernels::parallel::gemv(a.data(), q[j], w, m, n);
            kernels::parallel::gemv_t(a.data(), w, z, m, n);
            --budget;
            ++out.steps;
            alpha.push_back(std::inner_product(q[j].begin(), q[j].end(), z.begin(), 0.0));
            scale = std::max(scale, std::abs(alpha.back()));
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& qi : q) {
                    const double c = std::inner_product(qi.begin(), qi.end(), z.begin(), 0.0);
                    for (std::size_t t = 0; t < n; ++t)
                        z[t] -= c * qi[t];
                }
            const double bj = norm2(z);
            if (j + 1 == k_max || bj <= 1e-13 * scale)
                break;
            beta.push_back(bj);
            for (double& t : z)
                t /= bj;
            q.push_back(z);
        }
        beta.resize(alpha.size());
        const std::vector<double> y = tridiagonal_top_vector(alpha, beta);
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t j = 0; j < y.size(); ++j)
            for (std::size_t t = 0; t < n; ++t)
                x[t] += y[j] * q[j][t];
        const double xn = norm2(x);
        if (!(xn > 0.0) || !std::isfinite(xn))
            return;
        for (double& t : x)
            t /= xn;
        const Bracket b = rayleigh_bracket(a, x, w, z);
        --budget;
        ++out.steps;
        out.v = x;
        if (absorb(out, b, rel_tol)) {
            out.converged = true;
            return;
        }
    }
}

PowerResult norm_from(const Matrix& a, std::vector<double> v, const PowerIterationOptions& opts)
{
    constexpr int power_phase = 64;
    PowerResult res;
    res.v = std::move(v);
    power_iterate(a, res, std::min(power_phase, opts.max_iterations), opts.rel_tol);
    if (!res.converged && res.steps < opts.max_iterations)
        lanczos_refine(a, res, opts.max_iterations - res.steps, opts.rel_tol);
    return res;
}

PowerResult power_norm(const Matrix& a, const PowerIterationOptions& opts)
{
    const std::size_t n = a.cols();
    PowerResult res = norm_from(a, std::vector<double>(n, 1.0 / std::sqrt(double(n))), opts);

    // The longest column is a guaranteed lower bound. If it beats the
    // bracket, the start vector had no weight on the top singular direction.
    std::size_t best_col = 0;
    double best_len = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i)
            s += a(i, j) * a(i, j);
        if (s > best_len) {
            best_len = s;
            best_col = j;
        }
    }
    best_len = std::sqrt(best_len);
    if (best_len > res.cert.upper * (1.0 + 1e-12)) {
        std::vector<double> e(n, 0.0);
        e[best_col] = 1.0;
        res = norm_from(a, std::move(e), opts);
    }
    res.cert.lower_method = LowerMethod::power_iteration;
    res.cert.upper_method = UpperMethod::power_iteration_with_residual;
    return res;
}

} // namespace

NormCertificate operator_norm(const Matrix& a, PowerIterationOptions opts)
{
    if (!(opts.rel_tol > 0.0))
        throw InputError("operator_norm: rel_tol must be positive");
    PowerResult res = power_norm(a, opts);
    if (!res.converged)
        throw NormUnconverged("operator_norm: no convergence after " +
                                  std::to_string(opts.max_iterations) + " iterations (bracket [" +
                                  std::to_string(res.cert.lower) + ", " +
                                  std::to_string(res.cert.upper) + "])",
                              res.cert);
    return res.cert;
}

NormCertificate certified_nonnegative_norm(const Matrix& a, PowerIterationOptions opts)
{
    if (!a.is_nonnegative())
        throw InputError("certified_nonnegative_norm: matrix has a negative entry");
    PowerResult res = power_norm(a, opts);
    const std::size_t m = a.rows(), n = a.cols();

    // Any strictly positive w gives lambda_max(A^T A) <= max_i (A^T A w)_i / w_i.
    const double vmax = *std::max_element(res.v.begin(), res.v.end(),
                                          [](double x, double y) { return std::abs(x) < std::abs(y); });
    const double floor = std::max(std::abs(vmax), 1.0) * 1e-12;
    std::vector<double> w(n), aw(m), mw(n);
    for (std::size_t j = 0; j < n; ++j)
        w[j] = std::abs(res.v[j]) + floor;
    kernels::parallel::gemv(a.data(), w, aw, m, n);
    kernels::parallel::gemv_t(a.data(), aw, mw, m, n);
    double ratio = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        ratio = std::max(ratio, mw[j] / w[j]);
    // Rounding in the two products is at most a few ulps times the inner dimension.
    const double slack = 1.0 + 4.0 * double(std::max(m, n)) * std::numeric_limits<double>::epsilon();
    NormCertificate cert = res.cert;
    cert.upper = std::max(std::sqrt(ratio * slack), cert.lower);
    cert.upper_method = UpperMethod::exact;
    return cert;
}

double spectral_radius(const Matrix& a, double rel_tol)
{
    if (!a.is_square())
        throw InputError("spectral_radius: matrix is not square");
    const std::size_t n = a.rows();

    double gersh_row = 0.0, gersh_col = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0, c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            r += std::abs(a(i, j));
            c += std::abs(a(j, i));
        }
        gersh_row = std::max(gersh_row, r);
        gersh_col = std::max(gersh_col, c);
    }
    const double cap = std::min(gersh_row, gersh_col);
    if (cap == 0.0)
        return 0.0;

    // A^(2^k) = exp(log_scale) * b with ||b||_F = 1.
    auto frob = [](const Matrix& m) { return norm2(m.data()); };
    Matrix b = a;
    double f = frob(b);
    b *= 1.0 / f;
    double log_scale = std::log(f);
    double previous = f;
    constexpr int max_squarings = 40;
    for (int k = 1; k <= max_squarings; ++k) {
        b = b * b;
        f = frob(b);
        if (f == 0.0)
            return 0.0;
        b *= 1.0 / f;
        log_scale = 2.0 * log_scale + std::log(f);
        const double estimate = std::exp(log_scale / std::ldexp(1.0, k));
        if (std::abs(estimate - previous) <= rel_tol * std::max(estimate, previous))
            return std::min(estimate, cap);
        previous = estimate;
        if (estimate == 0.0 || !std::isfinite(log_scale))
            return std::min(estimate, cap);
    }
    const double last = std::exp(log_scale / std::ldexp(1.0, max_squarings));
    throw RadiusUnconverged("spectral_radius: Gelfand iteration did not settle within 40 squarings",
                            previous, last);
}

std::optional<unsigned> nilpotency_index(const Matrix& a, std::optional<double> tol)
{
    if (!a.is_square())
        throw InputError("nilpotency_index: matrix is not square");
    const std::size_t n = a.rows();
    Matrix abs_a = a;
    for (double& x : abs_a.data())
        x = std::abs(x);

    Matrix p = a;
    Matrix abs_p = abs_a;
    for (unsigned k = 1; k <= n; ++k) {
        const double threshold = tol ? *tol : 1e-9 * abs_p.max_abs();
        if (p.max_abs() <= threshold)
            return k;
        if (k == n)
            break;
        p = p * a;
        if (!tol)
            abs_p = abs_p * abs_a;
    }
    return std::nullopt;
}

std::optional<std::vector<std::size_t>> permutation_triangularization(const Matrix& c)
{
    if (!c.is_square())
        throw InputError("permutation_triangularization: matrix is not square");
    if (!c.is_nonnegative())
        throw InputError("permutation_triangularization: matrix has a negative entry");
    const std::size_t n = c.rows();

    // Vertex i must precede j whenever c(i, j) > 0.
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (c(i, j) > 0.0)
                ++indegree[j];

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t j = 0; j < n; ++j)
        if (indegree[j] == 0)
            ready.push(j);

    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t i = ready.top();
        ready.pop();
        order.push_back(i);
        for (std::size_t j = 0; j < n; ++j)
            if (c(i, j) > 0.0 && --indegree[j] == 0)
                ready.push(j);
    }
    if (order.size() != n)
        return std::nullopt;
    return order;
}

std::vector<std::size_t> find_support_cycle(const Matrix& c)
{
    if (!c.is_square())
        throw InputError("find_support_cycle: matrix is not square");
    const std::size_t n = c.rows();
    enum Color : unsigned char { white, grey, black };
    std::vector<Color> color(n, white);
    std::vector<std::size_t> parent(n, n);

    // Edge j -> i iff c(i, j) > 0; iterative DFS with explicit next-target cursor.
    for (std::size_t root = 0; root < n; ++root) {
        if (color[root] != white)
            continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        color[root] = grey;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next == n) {
                color[u] = black;
                stack.pop_back();
                continue;
            }
            const std::size_t t = next++;
            if (!(c(t, u) > 0.0))
                continue;
            if (color[t] == grey) {
                std::vector<std::size_t> cycle{t};
                for (std::size_t x = u; x != t; x = parent[x])
                    cycle.push_back(x);
                cycle.push_back(t);
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (color[t] == white) {
                color[t] = grey;
                parent[t] = u;
                stack.emplace_back(t, 0);
            }
        }
    }
    return {};
}

} // namespace opcomm
