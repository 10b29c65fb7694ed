#pragma once

// Operators on l^2 given by exact column rules. Every atom sends a standard
// basis vector to at most one basis vector, so every column of every
// expression built from them has finite support and can be computed exactly
// with EpsScalar coefficients.
//
// Basis indices are 1-based. A 4x4 block operator acts on
// l^2 = l^2 (+) l^2 (+) l^2 (+) l^2 with the summands interleaved: global
// index g = 4 (n - 1) + s holds slot s in {1, 2, 3, 4} at internal index n.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "opcomm/eps_scalar.hpp"
#include "opcomm/matrix.hpp"

namespace opcomm {

using BasisIndex = std::uint64_t;

/// Finite-support column: basis index -> nonzero coefficient.
class Column {
public:
    using Map = std::map<BasisIndex, EpsScalar>;

    Column() = default;
    static Column unit(BasisIndex g) { Column c; c.add(g, EpsScalar(1)); return c; }

    void add(BasisIndex index, const EpsScalar& value);
    /// this += scale * other
    void add_scaled(const Column& other, const EpsScalar& scale);

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    const Map& entries() const noexcept { return entries_; }
    EpsScalar at(BasisIndex index) const;

    friend bool operator==(const Column&, const Column&) = default;

private:
    Map entries_;
};

enum class Atom {
    zero,
    identity,
    shift_even,     // U: e_n -> e_{2n}
    shift_odd,      // V: e_n -> e_{2n-1}
    shift_even_adj, // U*
    shift_odd_adj,  // V*
};

struct OpNode;

/// Immutable expression tree; copies share structure.
class LazyOp {
public:
    using Grid = std::array<LazyOp, 16>; // row-major 4x4 blocks

    LazyOp(); // zero operator

    static LazyOp atom(Atom a);
    static LazyOp zero() { return atom(Atom::zero); }
    static LazyOp identity() { return atom(Atom::identity); }

    /// Attach a display name and, optionally, an exact operator norm that the
    /// caller has established (e.g. 1 for an isometry). The name carries
    /// through adjoints with a trailing '*'.
    static LazyOp labeled(std::string name, LazyOp body, std::optional<double> norm = std::nullopt);

    friend LazyOp operator+(const LazyOp& a, const LazyOp& b);
    friend LazyOp operator-(const LazyOp& a, const LazyOp& b);
    /// Composition: (a * b) x = a (b x).
    friend LazyOp operator*(const LazyOp& a, const LazyOp& b);
    friend LazyOp scale(const EpsScalar& s, const LazyOp& a);
    friend LazyOp adjoint(const LazyOp& a);
    friend LazyOp block4(const Grid& grid);

    /// Exact column op e_g. Throws OverflowError if an index or coefficient
    /// leaves 64-bit range, InputError for g == 0.
    Column apply(BasisIndex g) const;

    /// The 16 blocks when this operator was built by block4.
    const Grid* blocks() const noexcept;

    /// Upper bound on the operator norm at a numeric eps: isometries and
    /// labeled norms contribute exactly, sums use the triangle inequality,
    /// compositions submultiplicativity, block operators the Frobenius norm of
    /// their block bounds.
    double norm_bound(double eps) const;

    std::string to_string() const;

    const OpNode& node() const noexcept { return *node_; }

private:
    explicit LazyOp(std::shared_ptr<const OpNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const OpNode> node_;

    friend class ColumnEvaluator;
};

LazyOp operator+(const LazyOp& a, const LazyOp& b);
LazyOp operator-(const LazyOp& a, const LazyOp& b);
LazyOp operator*(const LazyOp& a, const LazyOp& b);
LazyOp scale(const EpsScalar& s, const LazyOp& a);
LazyOp adjoint(const LazyOp& a);
LazyOp block4(const LazyOp::Grid& grid);

LazyOp make_U();
LazyOp make_V();
/// W = U V* + V U*, the involution swapping e_{2n-1} and e_{2n}.
LazyOp make_W();

LazyOp commutator(const LazyOp& a, const LazyOp& b);

/// S_eps op S_eps^{-1} with S_eps = diag(eps^3, eps^2, eps, 1) on the four
/// slots: block (i, j) picks up eps^(j - i). Throws InputError unless op came
/// from block4.
LazyOp conjugate_by_S(const LazyOp& op);

/// Column evaluation with a per-evaluator memo keyed on (node, index).
/// Not thread-safe; use one evaluator per thread.
class ColumnEvaluator {
public:
    const Column& column(const LazyOp& op, BasisIndex g);
    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    Column evaluate(const OpNode& node, BasisIndex g);

    struct Key {
        const OpNode* node;
        BasisIndex g;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept
        {
            return std::hash<const void*>{}(k.node) ^ (std::hash<BasisIndex>{}(k.g) * 0x9e3779b97f4a7c15ULL);
        }
    };
    std::unordered_map<Key, Column, KeyHash> memo_;
};

/// Leading m x m corner <e_i, op e_j>, i, j <= m, with coefficients evaluated
/// at eps. Columns are computed in parallel, one evaluator per thread.
Matrix compress(const LazyOp& op, std::size_t m, double eps);
/// Single-threaded reference for compress.
Matrix compress_serial(const LazyOp& op, std::size_t m, double eps);

/// Exact symbolic corner: entry (i, j) as an EpsScalar, row-major.
std::vector<EpsScalar> compress_exact(const LazyOp& op, std::size_t m);

} // namespace opcomm
