// opcomm: build and check commutator witnesses from the command line.
//
//   opcomm construct-halmos --eps 0.5 --window 64 --out halmos.json
//   opcomm factor nilpotent --input c.json --eps 1 --out factors.json
//   opcomm verify popa --norm-a 1 --norm-b 1 --eps 0.1
//   opcomm sweep --grid 0.05,0.1,0.2,0.4 --window 512
//
// Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 usage/input error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "opcomm/commands.hpp"
#include "opcomm/errors.hpp"
#include "opcomm/spectral.hpp"

namespace {

void print_summary(const opcomm::RunReport& r)
{
    std::cout << r.command << ":\n";
    for (const auto& v : r.verdicts) {
        std::cout << "  [" << (v.passed ? "PASS" : "FAIL") << "] " << v.claim;
        if (v.vacuous)
            std::cout << " (vacuous)";
        if (v.margin)
            std::cout << "  margin=" << *v.margin;
        if (v.witness && !v.passed)
            std::cout << "  witness=" << v.witness->dump();
        std::cout << '\n';
    }
    if (!r.tables.empty()) {
        std::cout << "  eps        ||A~||        ||B~||        ||N~||        ||N~||<=      bound         margin\n";
        for (const auto& row : r.tables) {
            char line[200];
            std::snprintf(line, sizeof line, "  %-10g %-13.6g %-13.6g %-13.6g %-13.6g %-13.6g %-13.6g%s\n", row.eps,
                          row.norm_A, row.norm_B, row.norm_N, row.norm_N_upper, row.bound, row.margin,
                          row.converged ? "" : "  (unconverged)");
            std::cout << line;
        }
    }
    for (const auto& [k, v] : r.extras.items())
        if (k != "factors")
            std::cout << "  " << k << ": " << v.dump() << '\n';
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(field, &used));
            if (used != field.size())
                throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw opcomm::InputError("cannot parse grid value '" + field + "'");
        }
    }
    return grid;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Construct and verify commutators of positive operators"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "Print the JSON report to stdout")->configurable();

    opcomm::ConstructOptions construct;
    std::string construct_out;
    auto* c = app.add_subcommand("construct-halmos", "Scaled positive pair with [A,B] = I + N, N^3 = 0");
    c->add_option("--eps", construct.eps, "Scaling parameter in (0, 1]")->required();
    c->add_option("--window", construct.window, "Compression window (>= 16)");
    c->add_option("--out", construct_out, "Write compressions of A~, B~, N~ (JSON)");
    c->add_flag("--json", json, "Print the JSON report to stdout");

    opcomm::FactorOptions factor;
    std::string factor_kind, factor_input, factor_out;
    double factor_eps = 0.0;
    auto* f = app.add_subcommand("factor", "Factor a positive matrix C as AB - BA");
    f->add_option("kind", factor_kind, "nilpotent | tracezero")->required();
    f->add_option("--input", factor_input, "Matrix file (JSON or CSV)")->required();
    auto* f_eps = f->add_option("--eps", factor_eps, "BA <= eps C bound (nilpotent only)");
    f->add_option("--out", factor_out, "Write {\"A\", \"B\"} JSON");
    f->add_option("--tol", factor.tol, "Residual tolerance");
    f->add_flag("--json", json, "Print the JSON report to stdout");

    opcomm::VerifyOptions verify;
    std::string suite, va, vb, vx;
    double v_norm_a = 0, v_norm_b = 0, v_eps = 0;
    std::size_t v_interior = 0;
    auto* v = app.add_subcommand("verify", "Run one verification suite");
    v->add_option("suite", suite, "popa | obstructions | wielandt | power")->required();
    auto* o_na = v->add_option("--norm-a", v_norm_a, "||a||");
    auto* o_nb = v->add_option("--norm-b", v_norm_b, "||b||");
    auto* o_eps = v->add_option("--eps", v_eps, "Perturbation size");
    v->add_option("--alpha", verify.alpha, "Normality constant (>= 1)");
    auto* o_a = v->add_option("--a", va, "Matrix file for a / A");
    auto* o_b = v->add_option("--b", vb, "Matrix file for b / B");
    auto* o_x = v->add_option("--x", vx, "Matrix file for x / X");
    auto* o_input = v->add_option("--input", vx, "Alias for --x");
    v->add_option("--tol", verify.tol, "Entrywise tolerance");
    v->add_option("--n-max", verify.n_max, "Largest power for the power suite");
    auto* o_int = v->add_option("--interior", v_interior, "Check only the leading k x k corner");
    v->add_flag("--json", json, "Print the JSON report to stdout");

    opcomm::SweepOptions sweep;
    std::string grid_text, sweep_out;
    auto* s = app.add_subcommand("sweep", "Norm scaling table and certified bounds over an eps grid");
    s->add_option("--grid", grid_text, "Comma-separated eps values in (0, 1]");
    s->add_option("--window", sweep.window, "Compression window (>= 64)");
    s->add_option("--out", sweep_out, "Write the JSON report");
    s->add_option("--tol", sweep.rel_tol, "Relative tolerance for norm brackets");
    s->add_flag("--json", json, "Print the JSON report to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        opcomm::RunReport report;
        if (*c) {
            if (!construct_out.empty())
                construct.out = construct_out;
            report = opcomm::cmd_construct_halmos(construct);
        } else if (*f) {
            factor.kind = opcomm::parse_factor_kind(factor_kind);
            factor.input = factor_input;
            if (*f_eps)
                factor.eps = factor_eps;
            if (!factor_out.empty())
                factor.out = factor_out;
            report = opcomm::cmd_factor(factor);
        } else if (*v) {
            if (*o_na) verify.norm_a = v_norm_a;
            if (*o_nb) verify.norm_b = v_norm_b;
            if (*o_eps) verify.eps = v_eps;
            if (*o_a) verify.a = va;
            if (*o_b) verify.b = vb;
            if (*o_x || *o_input) verify.x = vx;
            if (*o_int) verify.interior = v_interior;
            report = opcomm::cmd_verify(suite, verify);
        } else {
            if (!grid_text.empty())
                sweep.grid = parse_grid(grid_text);
            if (!sweep_out.empty())
                sweep.out = sweep_out;
            report = opcomm::cmd_sweep(sweep);
        }
        if (json)
            std::cout << to_json(report).dump(2) << '\n';
        else
            print_summary(report);
        return opcomm::exit_code(report);
    } catch (const opcomm::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const opcomm::RangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
