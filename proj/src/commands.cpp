#include "opcomm/commands.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <string>

#include "opcomm/constructions.hpp"
#include "opcomm/errors.hpp"
#include "opcomm/lazy_op.hpp"
#include "opcomm/matrix_io.hpp"
#include "opcomm/spectral.hpp"
#include "opcomm/verifiers.hpp"

namespace opcomm {

namespace {

RunReport start(std::string command, nlohmann::json parameters)
{
    RunReport r;
    r.command = std::move(command);
    r.parameters = std::move(parameters);
    r.timestamp = utc_timestamp();
    return r;
}

void require_eps_unit(double eps)
{
    if (!(eps > 0.0 && eps <= 1.0))
        throw InputError("eps must lie in (0, 1], got " + std::to_string(eps));
}

} // namespace

std::vector<Verdict> halmos_exact_verdicts(std::size_t depth, bool scaled)
{
    const HalmosPair p = scaled ? halmos_pair_scaled() : halmos_pair();
    const LazyOp defect = commutator(p.A_tilde, p.B_tilde) - LazyOp::identity() - p.N_tilde;
    const LazyOp n2 = p.N_tilde * p.N_tilde;
    const LazyOp n3 = n2 * p.N_tilde;
    const nlohmann::json inputs = {{"columns", depth}, {"eps_symbolic", scaled}};

    ColumnEvaluator ev;
    std::vector<Verdict> out;

    Verdict identity = make_verdict("exact identity: [A,B] = I + N", true);
    Verdict nil3 = make_verdict("nil-index 3: N^3 = 0 and N^2 != 0", true);
    Verdict positive = make_verdict("positivity: A >= 0 and B >= 0", true);
    std::optional<BasisIndex> n2_witness;
    for (BasisIndex g = 1; g <= depth; ++g) {
        if (identity.passed) {
            const Column& c = ev.column(defect, g);
            if (!c.empty()) {
                identity.passed = false;
                const auto& [row, value] = *c.entries().begin();
                identity.witness = nlohmann::json{{"column", g}, {"row", row}, {"value", value.to_string()}};
            }
        }
        if (nil3.passed && !ev.column(n3, g).empty()) {
            nil3.passed = false;
            nil3.witness = nlohmann::json{{"column", g}, {"reason", "N^3 column nonzero"}};
        }
        if (!n2_witness && g <= 64 && !ev.column(n2, g).empty())
            n2_witness = g;
        if (positive.passed) {
            for (const LazyOp* op : {&p.A_tilde, &p.B_tilde}) {
                for (const auto& [row, value] : ev.column(*op, g).entries()) {
                    if (!value.has_nonnegative_coefficients()) {
                        positive.passed = false;
                        positive.witness = nlohmann::json{
                            {"operator", op->to_string()}, {"column", g}, {"row", row}, {"value", value.to_string()}};
                        break;
                    }
                }
            }
        }
    }
    if (nil3.passed && !n2_witness) {
        nil3.passed = false;
        nil3.witness = nlohmann::json{{"reason", "every N^2 column with index <= 64 vanishes"}};
    } else if (nil3.passed) {
        nil3.witness = nlohmann::json{{"first_nonzero_N2_column", *n2_witness}};
    }
    for (Verdict* v : {&identity, &nil3, &positive}) {
        v->inputs = inputs;
        out.push_back(std::move(*v));
    }
    return out;
}

SweepRow halmos_norm_row(double eps, std::size_t window, double rel_tol, Verdict* certified)
{
    SweepRow row;
    row.eps = eps;
    const HalmosPopaCheck check = certified_halmos_popa_check(eps, window, rel_tol);
    row.norm_A = check.norm_a.lower;
    row.norm_B = check.norm_b.lower;
    row.norm_N_upper = check.norm_n.upper;
    row.bound = check.bound;
    row.margin = *check.verdict.margin;
    row.converged = check.verdict.witness->at("norms_converged").get<bool>();

    const HalmosPair pair = halmos_pair_scaled();
    try {
        row.norm_N = operator_norm(compress(pair.N_tilde, window, eps), rel_tol).lower;
    } catch (const NormUnconverged& u) {
        row.norm_N = u.best.lower;
        row.converged = false;
    }
    if (certified)
        *certified = check.verdict;
    return row;
}

RunReport cmd_construct_halmos(const ConstructOptions& opts)
{
    require_eps_unit(opts.eps);
    if (opts.window < 16)
        throw InputError("window must be at least 16");
    RunReport r = start("construct-halmos", {{"eps", opts.eps}, {"window", opts.window}});
    const std::size_t depth = std::max(opts.window, opts.column_depth);
    r.parameters["column_depth"] = depth;

    r.verdicts = halmos_exact_verdicts(depth, true);

    const HalmosPair pair = halmos_pair_scaled();
    const Matrix a = compress(pair.A_tilde, opts.window, opts.eps);
    const Matrix b = compress(pair.B_tilde, opts.window, opts.eps);
    const Matrix n = compress(pair.N_tilde, opts.window, opts.eps);

    Verdict nil = make_verdict("nil-index of compressed N = 3", false);
    const auto index = nilpotency_index(n);
    nil.passed = index && *index == 3;
    nil.witness = nlohmann::json{{"nilpotency_index", index ? nlohmann::json(*index) : nlohmann::json(nullptr)}};
    nil.inputs = {{"window", opts.window}, {"eps", opts.eps}};
    r.verdicts.push_back(std::move(nil));

    Verdict certified;
    r.tables.push_back(halmos_norm_row(opts.eps, opts.window, 1e-8, &certified));
    r.verdicts.push_back(std::move(certified));

    if (opts.out) {
        write_json(*opts.out, {{"eps", opts.eps},
                               {"window", opts.window},
                               {"A_tilde", to_json(a)},
                               {"B_tilde", to_json(b)},
                               {"N_tilde", to_json(n)}});
        r.parameters["out"] = opts.out->string();
    }
    return r;
}

FactorKind parse_factor_kind(std::string_view s)
{
    if (s == "nilpotent")
        return FactorKind::nilpotent;
    if (s == "tracezero")
        return FactorKind::tracezero;
    throw InputError("unknown factorization kind '" + std::string(s) + "' (expected nilpotent or tracezero)");
}

RunReport cmd_factor(const FactorOptions& opts)
{
    const Matrix c = read_matrix(opts.input);
    const bool nilpotent = opts.kind == FactorKind::nilpotent;
    RunReport r = start("factor", {{"kind", nilpotent ? "nilpotent" : "tracezero"},
                                   {"input", opts.input.string()},
                                   {"tol", opts.tol}});
    FactorPair f = [&] {
        if (nilpotent) {
            if (!opts.eps)
                throw InputError("factor nilpotent requires --eps");
            r.parameters["eps"] = *opts.eps;
            return nilpotent_commutator_factors(c, *opts.eps);
        }
        return trace_zero_commutator_factors(c);
    }();

    const Matrix residual = commutator(f.A, f.B) - c;
    const double res = residual.max_abs();
    // Nilpotent factors span a dynamic range of ((1+eps)/eps)^(n-1).
    double kappa = 1.0;
    if (nilpotent)
        kappa = std::pow((1.0 + *opts.eps) / *opts.eps, double(c.rows() - 1));
    const double allowed = opts.tol * (1.0 + c.max_abs()) * std::max(kappa, double(c.rows()));
    Verdict recon = make_verdict("reconstruction: AB - BA = C", res <= allowed);
    recon.margin = allowed - res;
    recon.witness = nlohmann::json{{"residual_max", res}, {"allowed", allowed}};
    recon.inputs = {{"size", c.rows()}};
    r.verdicts.push_back(std::move(recon));

    Verdict apos = entrywise_leq(Matrix(c.rows(), c.cols()), f.A, 0.0);
    apos.claim = "A >= 0 and diagonal";
    r.verdicts.push_back(std::move(apos));

    if (nilpotent) {
        Verdict bpos = entrywise_leq(Matrix(c.rows(), c.cols()), f.B, 0.0);
        bpos.claim = "B >= 0";
        r.verdicts.push_back(std::move(bpos));
        Verdict ba = entrywise_leq(f.B * f.A, *opts.eps * c, opts.tol);
        ba.claim = "BA <= eps C";
        r.verdicts.push_back(std::move(ba));
    }

    std::vector<std::size_t> order1;
    for (std::size_t k : f.order)
        order1.push_back(k + 1);
    r.extras["order"] = order1;
    r.extras["factors"] = to_json(f);
    if (opts.out) {
        write_json(*opts.out, to_json(f));
        r.parameters["out"] = opts.out->string();
    }
    return r;
}

RunReport cmd_verify(std::string_view suite, const VerifyOptions& opts)
{
    auto need_matrix = [](const std::optional<std::filesystem::path>& p, const char* flag) {
        if (!p)
            throw InputError(std::string("missing ") + flag);
        return read_matrix(*p);
    };
    RunReport r = start("verify", {{"suite", std::string(suite)}, {"tol", opts.tol}});

    if (suite == "popa") {
        if (!opts.norm_a || !opts.norm_b || !opts.eps)
            throw InputError("verify popa requires --norm-a, --norm-b and --eps");
        r.parameters.update({{"norm_a", *opts.norm_a}, {"norm_b", *opts.norm_b}, {"eps", *opts.eps},
                             {"alpha", opts.alpha}});
        r.verdicts.push_back(popa_bound(*opts.norm_a, *opts.norm_b, *opts.eps, opts.alpha));
        r.extras["delta_threshold"] = delta_threshold(*opts.norm_a, *opts.norm_b, opts.alpha);
    } else if (suite == "obstructions") {
        const Matrix x = need_matrix(opts.x, "--x");
        const Matrix a = opts.a ? read_matrix(*opts.a) : Matrix(x.rows(), x.cols());
        const Matrix b = opts.b ? read_matrix(*opts.b) : Matrix(x.rows(), x.cols());
        r.verdicts = finite_dim_obstructions(a, b, x, {opts.tol, 1e-6});
    } else if (suite == "wielandt") {
        const Matrix a = need_matrix(opts.a, "--a");
        const Matrix b = need_matrix(opts.b, "--b");
        r.verdicts.push_back(wielandt_violation_witness(a, b));
    } else if (suite == "power") {
        const Matrix a = need_matrix(opts.a, "--a");
        const Matrix b = need_matrix(opts.b, "--b");
        const Matrix x = need_matrix(opts.x, "--x");
        r.parameters["n_max"] = opts.n_max;
        if (opts.interior)
            r.parameters["interior"] = *opts.interior;
        r.verdicts = power_inequality_report(a, b, x, {opts.n_max, opts.tol, opts.interior});
    } else {
        throw InputError("unknown verify suite '" + std::string(suite) +
                         "' (expected popa, obstructions, wielandt or power)");
    }
    return r;
}

RunReport cmd_sweep(const SweepOptions& opts)
{
    if (opts.grid.empty())
        throw InputError("sweep grid is empty");
    for (double e : opts.grid)
        require_eps_unit(e);
    if (opts.window < 64)
        throw InputError("sweep window must be at least 64");
    RunReport r = start("sweep", {{"grid", opts.grid}, {"window", opts.window}, {"rel_tol", opts.rel_tol}});

    const std::size_t count = opts.grid.size();
    std::vector<SweepRow> rows(count);
    std::vector<Verdict> verdicts(count);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const auto k = static_cast<std::size_t>(i);
            rows[k] = halmos_norm_row(opts.grid[k], opts.window, opts.rel_tol, &verdicts[k]);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    r.tables = std::move(rows);
    r.verdicts = std::move(verdicts);

    std::vector<double> eps, na, nb, nn, nu;
    for (const auto& row : r.tables) {
        eps.push_back(row.eps);
        na.push_back(row.norm_A);
        nb.push_back(row.norm_B);
        nn.push_back(row.norm_N);
        nu.push_back(row.norm_N_upper);
    }
    auto slope_json = [](std::optional<double> s) { return s ? nlohmann::json(*s) : nlohmann::json(nullptr); };
    const auto sa = log_log_slope(eps, na);
    r.extras["slopes"] = {{"norm_A", slope_json(sa)},
                          {"norm_B", slope_json(log_log_slope(eps, nb))},
                          {"norm_N", slope_json(log_log_slope(eps, nn))},
                          {"norm_N_upper", slope_json(log_log_slope(eps, nu))}};
    if (!sa)
        r.extras["notes"] = {"slopes need at least two distinct grid points"};

    if (opts.out) {
        r.parameters["out"] = opts.out->string();
        write_json(*opts.out, to_json(r));
    }
    return r;
}

} // namespace opcomm
