#include "opcomm/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opcomm/constructions.hpp"
#include "opcomm/errors.hpp"

namespace opcomm {

namespace {

void require_finite(std::initializer_list<double> xs, const char* what)
{
    for (double x : xs)
        if (!std::isfinite(x))
            throw InputError(std::string(what) + ": inputs must be finite");
}

void require_alpha(double alpha, const char* what)
{
    if (!(alpha >= 1.0))
        throw InputError(std::string(what) + ": normality constant alpha must be >= 1");
}

void require_same_square(std::initializer_list<const Matrix*> ms, const char* what)
{
    const Matrix& first = **ms.begin();
    for (const Matrix* m : ms)
        if (!m->is_square() || m->rows() != first.rows())
            throw InputError(std::string(what) + ": matrices must be square of equal size");
}

Matrix corner(const Matrix& m, std::size_t k)
{
    if (k >= m.rows())
        return m;
    Matrix out(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            out(i, j) = m(i, j);
    return out;
}

nlohmann::json entry_json(std::size_t i, std::size_t j, double value)
{
    return {{"row", i + 1}, {"col", j + 1}, {"value", value}};
}

// lhs >= rhs entrywise with a tolerance scaled to the operands.
Verdict dominates(const Matrix& lhs, const Matrix& rhs, double tol, std::string claim)
{
    const double scaled = tol * (1.0 + std::max(lhs.max_abs(), rhs.max_abs()));
    Verdict v = entrywise_leq(rhs, lhs, scaled);
    v.claim = std::move(claim);
    return v;
}

} // namespace

double popa_lower_bound(double eps, double alpha)
{
    // ln(1 / (alpha eps)) written as a difference of logs, so e.g. eps = e^-4
    // reproduces 4 exactly.
    return -(std::log(alpha) + std::log(eps)) / (2.0 * alpha);
}

Verdict popa_bound(double norm_a, double norm_b, double eps, double alpha)
{
    require_finite({norm_a, norm_b, eps, alpha}, "popa_bound");
    require_alpha(alpha, "popa_bound");
    if (!(eps > 0.0))
        throw InputError("popa_bound: eps must be positive");
    if (norm_a < 0.0 || norm_b < 0.0)
        throw InputError("popa_bound: norms must be nonnegative");

    const double product = norm_a * norm_b;
    const double bound = popa_lower_bound(eps, alpha);
    Verdict v;
    v.claim = "popa_bound";
    v.passed = product >= bound;
    v.margin = product - bound;
    v.inputs = {{"norm_a", norm_a}, {"norm_b", norm_b}, {"eps", eps}, {"alpha", alpha}};
    v.witness = nlohmann::json{{"product", product}, {"bound", bound}};
    return v;
}

double delta_threshold(double norm_a, double norm_b, double alpha)
{
    require_finite({norm_a, norm_b, alpha}, "delta_threshold");
    require_alpha(alpha, "delta_threshold");
    return std::exp(-2.0 * alpha * norm_a * norm_b) / alpha;
}

std::vector<Verdict> power_inequality_report(const Matrix& a, const Matrix& b, const Matrix& x,
                                             PowerInequalityOptions opts)
{
    require_same_square({&a, &b, &x}, "power_inequality_report");
    const std::size_t k = opts.interior ? std::min(*opts.interior, a.rows()) : a.rows();
    if (k == 0)
        throw InputError("power_inequality_report: interior window must be positive");
    const nlohmann::json inputs = {{"size", a.rows()}, {"interior", k}, {"tol", opts.tol}, {"n_max", opts.n_max}};

    std::vector<Verdict> out;

    Verdict positive = entrywise_leq(Matrix(a.rows(), a.cols()), a, 0.0);
    positive.claim = "hypothesis: a >= 0";
    positive.inputs = inputs;
    out.push_back(std::move(positive));

    const Matrix e = Matrix::identity(a.rows());
    out.push_back(dominates(corner(commutator(a, b), k), corner(e + x, k), opts.tol, "hypothesis: [a,b] >= e + x"));
    out.back().inputs = inputs;

    std::vector<Matrix> powers{e};
    for (unsigned n = 1; n <= opts.n_max; ++n)
        powers.push_back(powers.back() * a);

    for (unsigned n = 1; n <= opts.n_max; ++n) {
        const Matrix lhs = powers[n] * b - b * powers[n];
        Matrix rhs = double(n) * powers[n - 1];
        for (unsigned j = 0; j < n; ++j)
            rhs += powers[n - 1 - j] * x * powers[j];
        Verdict v = dominates(corner(lhs, k), corner(rhs, k), opts.tol,
                              "power_inequality[n=" + std::to_string(n) + "]");
        v.inputs = inputs;
        v.inputs["n"] = n;
        if (v.witness)
            (*v.witness)["n"] = n;
        out.push_back(std::move(v));
    }
    return out;
}

Verdict wielandt_violation_witness(const Matrix& a, const Matrix& b)
{
    require_same_square({&a, &b}, "wielandt_violation_witness");
    const bool signed_pair = a.is_nonnegative() || a.is_nonpositive() || b.is_nonnegative() || b.is_nonpositive();
    if (!signed_pair)
        throw InputError("wielandt_violation_witness: neither a nor b is entrywise signed");

    Matrix d = commutator(a, b);
    for (std::size_t i = 0; i < d.rows(); ++i)
        d(i, i) -= 1.0;

    std::size_t wi = 0, wj = 0;
    double worst = d(0, 0);
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (d(i, j) < worst) {
                worst = d(i, j);
                wi = i;
                wj = j;
            }

    Verdict v;
    v.claim = "wielandt: [a,b] >= e is violated";
    v.passed = worst < 0.0;
    v.margin = -worst;
    v.witness = entry_json(wi, wj, worst);
    v.inputs = {{"size", a.rows()}, {"a_signed", a.is_nonnegative() || a.is_nonpositive()}};
    return v;
}

std::vector<Verdict> finite_dim_obstructions(const Matrix& a, const Matrix& b, const Matrix& x,
                                             ObstructionOptions opts)
{
    require_same_square({&a, &b, &x}, "finite_dim_obstructions");
    const std::size_t n = x.rows();
    const Matrix e = Matrix::identity(n);
    const nlohmann::json inputs = {{"size", n}, {"tol", opts.tol}, {"spectral_rel_tol", opts.spectral_rel_tol}};

    std::vector<Verdict> out;
    out.push_back(dominates(commutator(a, b), e - x, opts.tol, "hypothesis: [A,B] >= I - X"));
    out.back().inputs = inputs;
    const bool vacuous = !out.back().passed;

    {
        Verdict v;
        v.claim = "obstruction (i): trace(X) >= n";
        const double tr = trace(x);
        v.margin = tr - double(n);
        v.passed = tr >= double(n) - opts.tol;
        v.witness = nlohmann::json{{"trace", tr}, {"n", n}};
        v.vacuous = vacuous;
        v.inputs = inputs;
        out.push_back(std::move(v));
    }
    {
        Verdict v;
        v.claim = "obstruction (ii): r(X) >= 1 and ||X|| >= 1";
        double radius = 0.0;
        bool radius_converged = true;
        try {
            radius = spectral_radius(x, opts.spectral_rel_tol);
        } catch (const RadiusUnconverged& u) {
            radius = u.last;
            radius_converged = false;
        }
        NormCertificate norm;
        bool norm_converged = true;
        try {
            norm = operator_norm(x, opts.spectral_rel_tol);
        } catch (const NormUnconverged& u) {
            norm = u.best;
            norm_converged = false;
        }
        const double floor = 1.0 - opts.spectral_rel_tol;
        v.passed = radius >= floor && norm.lower >= floor;
        v.margin = std::min(radius, norm.lower) - 1.0;
        v.witness = nlohmann::json{{"spectral_radius", radius},
                                   {"norm_lower", norm.lower},
                                   {"norm_upper", norm.upper},
                                   {"radius_converged", radius_converged},
                                   {"norm_converged", norm_converged}};
        v.vacuous = vacuous;
        v.inputs = inputs;
        out.push_back(std::move(v));
    }
    {
        Verdict v;
        v.claim = "obstruction (iii): X idempotent implies X = I";
        const double idem_defect = (x * x - x).max_abs();
        const double identity_defect = (x - e).max_abs();
        const bool idempotent = idem_defect <= opts.tol;
        v.passed = !idempotent || identity_defect <= opts.tol;
        v.margin = idempotent ? opts.tol - identity_defect : idem_defect - opts.tol;
        v.witness = nlohmann::json{{"idempotent", idempotent},
                                   {"idempotent_defect", idem_defect},
                                   {"identity_defect", identity_defect}};
        v.vacuous = vacuous;
        v.inputs = inputs;
        out.push_back(std::move(v));
    }
    return out;
}

NormCertificate block_norm_majorant(const LazyOp& op, double eps)
{
    const LazyOp::Grid* grid = op.blocks();
    if (!grid)
        throw InputError("block_norm_majorant: operator has no 4x4 block structure");
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            m(i, j) = (*grid)[i * 4 + j].norm_bound(eps);
    NormCertificate cert = certified_nonnegative_norm(m);
    cert.lower = 0.0;
    cert.upper_method = UpperMethod::block_bound;
    return cert;
}

HalmosPopaCheck certified_halmos_popa_check(double eps, std::size_t window, double rel_tol)
{
    if (!(eps > 0.0 && eps <= 1.0))
        throw InputError("certified_halmos_popa_check: eps must lie in (0, 1]");
    if (window < 16)
        throw InputError("certified_halmos_popa_check: window must be at least 16");

    const HalmosPair pair = halmos_pair_scaled();
    auto compression_norm = [&](const LazyOp& op, bool& converged) {
        NormCertificate c;
        try {
            c = operator_norm(compress(op, window, eps), rel_tol);
        } catch (const NormUnconverged& u) {
            c = u.best; // the lower bound stays valid
            converged = false;
        }
        c.lower_method = LowerMethod::compression;
        return c;
    };

    bool converged = true;
    HalmosPopaCheck out;
    out.norm_a = compression_norm(pair.A_tilde, converged);
    out.norm_b = compression_norm(pair.B_tilde, converged);
    out.norm_n = block_norm_majorant(pair.N_tilde, eps);
    out.bound = 0.5 * std::log(1.0 / out.norm_n.upper);

    Verdict v;
    v.claim = "certified_halmos_popa";
    const double product = out.norm_a.lower * out.norm_b.lower;
    v.passed = product >= out.bound;
    v.margin = product - out.bound;
    v.witness = nlohmann::json{{"norm_a_lower", out.norm_a.lower},
                               {"norm_b_lower", out.norm_b.lower},
                               {"norm_n_upper", out.norm_n.upper},
                               {"product", product},
                               {"bound", out.bound},
                               {"norms_converged", converged}};
    v.inputs = {{"eps", eps}, {"window", window}, {"rel_tol", rel_tol}};
    out.verdict = std::move(v);
    return out;
}

} // namespace opcomm
