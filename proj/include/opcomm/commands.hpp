#pragma once

// The command-line operations as library calls. Each returns a RunReport;
// usage and input problems are thrown as InputError (exit code 2 in the CLI).

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "opcomm/report.hpp"

namespace opcomm {

inline constexpr std::size_t default_window = 512;
inline constexpr std::size_t default_column_depth = 2000;

struct ConstructOptions {
    double eps = 1.0;
    std::size_t window = default_window;
    std::optional<std::filesystem::path> out;
    /// Columns checked exactly are 1..max(window, column_depth).
    std::size_t column_depth = default_column_depth;
};

RunReport cmd_construct_halmos(const ConstructOptions& opts);

enum class FactorKind { nilpotent, tracezero };
FactorKind parse_factor_kind(std::string_view s);

struct FactorOptions {
    FactorKind kind = FactorKind::nilpotent;
    std::filesystem::path input;
    std::optional<double> eps;
    std::optional<std::filesystem::path> out;
    double tol = 1e-9;
};

RunReport cmd_factor(const FactorOptions& opts);

struct VerifyOptions {
    std::optional<double> norm_a, norm_b, eps;
    double alpha = 1.0;
    std::optional<std::filesystem::path> a, b, x;
    double tol = 1e-9;
    unsigned n_max = 6;
    std::optional<std::size_t> interior;
};

/// suite: popa | obstructions | wielandt | power
RunReport cmd_verify(std::string_view suite, const VerifyOptions& opts);

struct SweepOptions {
    std::vector<double> grid{0.05, 0.1, 0.2, 0.4};
    std::size_t window = default_window;
    std::optional<std::filesystem::path> out;
    double rel_tol = 1e-8;
};

/// Rows are computed in parallel but reported in grid order.
RunReport cmd_sweep(const SweepOptions& opts);

/// Exact checks over columns 1..depth of the scaled pair:
/// [A~, B~] - I - N~ vanishes, N~^3 vanishes with some N~^2 column nonzero
/// below index 64, and all A~, B~ coefficients are nonnegative.
std::vector<Verdict> halmos_exact_verdicts(std::size_t depth, bool scaled);

SweepRow halmos_norm_row(double eps, std::size_t window, double rel_tol, Verdict* certified = nullptr);

} // namespace opcomm
