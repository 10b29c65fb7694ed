#include "opcomm/lazy_op.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <variant>
#include <vector>

#include "opcomm/errors.hpp"

namespace opcomm {

// ---------------------------------------------------------------------------
// Column

void Column::add(BasisIndex index, const EpsScalar& value)
{
    if (value.is_zero())
        return;
    auto [it, inserted] = entries_.try_emplace(index, value);
    if (inserted)
        return;
    it->second += value;
    if (it->second.is_zero())
        entries_.erase(it);
}

void Column::add_scaled(const Column& other, const EpsScalar& scale)
{
    for (const auto& [index, value] : other.entries_)
        add(index, value * scale);
}

EpsScalar Column::at(BasisIndex index) const
{
    auto it = entries_.find(index);
    return it == entries_.end() ? EpsScalar{} : it->second;
}

// ---------------------------------------------------------------------------
// Expression nodes

struct AtomNode {
    Atom atom;
};
struct ScaleNode {
    EpsScalar factor;
    LazyOp child;
};
struct SumNode {
    std::vector<LazyOp> terms;
};
struct ComposeNode {
    LazyOp outer;
    LazyOp inner;
};
struct BlockNode {
    LazyOp::Grid grid;
};
struct LabelNode {
    std::string name;
    LazyOp body;
    std::optional<double> norm;
};

struct OpNode {
    std::variant<AtomNode, ScaleNode, SumNode, ComposeNode, BlockNode, LabelNode> v;
};

namespace {

const std::shared_ptr<const OpNode>& zero_node()
{
    static const auto node = std::make_shared<const OpNode>(OpNode{AtomNode{Atom::zero}});
    return node;
}

bool is_atom(const OpNode& n, Atom a)
{
    const auto* atom = std::get_if<AtomNode>(&n.v);
    return atom && atom->atom == a;
}

Atom adjoint_atom(Atom a)
{
    switch (a) {
    case Atom::zero: return Atom::zero;
    case Atom::identity: return Atom::identity;
    case Atom::shift_even: return Atom::shift_even_adj;
    case Atom::shift_odd: return Atom::shift_odd_adj;
    case Atom::shift_even_adj: return Atom::shift_even;
    case Atom::shift_odd_adj: return Atom::shift_odd;
    }
    return Atom::zero;
}

const char* atom_name(Atom a)
{
    switch (a) {
    case Atom::zero: return "0";
    case Atom::identity: return "I";
    case Atom::shift_even: return "U";
    case Atom::shift_odd: return "V";
    case Atom::shift_even_adj: return "U*";
    case Atom::shift_odd_adj: return "V*";
    }
    return "?";
}

BasisIndex checked_double(BasisIndex n)
{
    if (n > std::numeric_limits<BasisIndex>::max() / 2)
        throw OverflowError("basis index overflow");
    return 2 * n;
}

BasisIndex block_global(BasisIndex internal, unsigned slot)
{
    // 4 (n - 1) + slot, slot in 1..4
    if (internal - 1 > (std::numeric_limits<BasisIndex>::max() - slot) / 4)
        throw OverflowError("basis index overflow in block embedding");
    return 4 * (internal - 1) + slot;
}

Column apply_atom(Atom a, BasisIndex g)
{
    Column c;
    switch (a) {
    case Atom::zero: break;
    case Atom::identity: c.add(g, EpsScalar(1)); break;
    case Atom::shift_even: c.add(checked_double(g), EpsScalar(1)); break;
    case Atom::shift_odd: c.add(checked_double(g) - 1, EpsScalar(1)); break;
    case Atom::shift_even_adj:
        if (g % 2 == 0)
            c.add(g / 2, EpsScalar(1));
        break;
    case Atom::shift_odd_adj:
        if (g % 2 == 1)
            c.add((g + 1) / 2, EpsScalar(1));
        break;
    }
    return c;
}

} // namespace

// ---------------------------------------------------------------------------
// LazyOp

LazyOp::LazyOp() : node_(zero_node()) {}

LazyOp LazyOp::atom(Atom a)
{
    if (a == Atom::zero)
        return LazyOp{};
    return LazyOp(std::make_shared<const OpNode>(OpNode{AtomNode{a}}));
}

LazyOp LazyOp::labeled(std::string name, LazyOp body, std::optional<double> norm)
{
    return LazyOp(std::make_shared<const OpNode>(OpNode{LabelNode{std::move(name), std::move(body), norm}}));
}

LazyOp operator+(const LazyOp& a, const LazyOp& b)
{
    if (is_atom(*a.node_, Atom::zero))
        return b;
    if (is_atom(*b.node_, Atom::zero))
        return a;
    std::vector<LazyOp> terms;
    for (const LazyOp* op : {&a, &b}) {
        if (const auto* s = std::get_if<SumNode>(&op->node_->v))
            terms.insert(terms.end(), s->terms.begin(), s->terms.end());
        else
            terms.push_back(*op);
    }
    return LazyOp(std::make_shared<const OpNode>(OpNode{SumNode{std::move(terms)}}));
}

LazyOp operator-(const LazyOp& a, const LazyOp& b)
{
    return a + scale(EpsScalar(-1), b);
}

LazyOp operator*(const LazyOp& a, const LazyOp& b)
{
    if (is_atom(*a.node_, Atom::zero) || is_atom(*b.node_, Atom::zero))
        return LazyOp{};
    if (is_atom(*a.node_, Atom::identity))
        return b;
    if (is_atom(*b.node_, Atom::identity))
        return a;
    return LazyOp(std::make_shared<const OpNode>(OpNode{ComposeNode{a, b}}));
}

LazyOp scale(const EpsScalar& s, const LazyOp& a)
{
    if (s.is_zero() || is_atom(*a.node_, Atom::zero))
        return LazyOp{};
    if (s == EpsScalar(1))
        return a;
    if (const auto* inner = std::get_if<ScaleNode>(&a.node_->v))
        return scale(s * inner->factor, inner->child);
    return LazyOp(std::make_shared<const OpNode>(OpNode{ScaleNode{s, a}}));
}

LazyOp adjoint(const LazyOp& a)
{
    return std::visit(
        [&](const auto& n) -> LazyOp {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AtomNode>) {
                return LazyOp::atom(adjoint_atom(n.atom));
            } else if constexpr (std::is_same_v<T, ScaleNode>) {
                return scale(n.factor, adjoint(n.child));
            } else if constexpr (std::is_same_v<T, SumNode>) {
                LazyOp out;
                for (const auto& t : n.terms)
                    out = out + adjoint(t);
                return out;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                return adjoint(n.inner) * adjoint(n.outer);
            } else if constexpr (std::is_same_v<T, BlockNode>) {
                LazyOp::Grid g;
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        g[j * 4 + i] = adjoint(n.grid[i * 4 + j]);
                return block4(g);
            } else {
                std::string name = n.name;
                if (!name.empty() && name.back() == '*')
                    name.pop_back();
                else
                    name.push_back('*');
                return LazyOp::labeled(std::move(name), adjoint(n.body), n.norm);
            }
        },
        a.node_->v);
}

LazyOp block4(const LazyOp::Grid& grid)
{
    return LazyOp(std::make_shared<const OpNode>(OpNode{BlockNode{grid}}));
}

Column LazyOp::apply(BasisIndex g) const
{
    ColumnEvaluator ev;
    return ev.column(*this, g);
}

const LazyOp::Grid* LazyOp::blocks() const noexcept
{
    if (const auto* b = std::get_if<BlockNode>(&node_->v))
        return &b->grid;
    if (const auto* l = std::get_if<LabelNode>(&node_->v))
        return l->body.blocks();
    return nullptr;
}

double LazyOp::norm_bound(double eps) const
{
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AtomNode>) {
                return n.atom == Atom::zero ? 0.0 : 1.0;
            } else if constexpr (std::is_same_v<T, ScaleNode>) {
                return std::abs(n.factor.evaluate(eps)) * n.child.norm_bound(eps);
            } else if constexpr (std::is_same_v<T, SumNode>) {
                double s = 0.0;
                for (const auto& t : n.terms)
                    s += t.norm_bound(eps);
                return s;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                return n.outer.norm_bound(eps) * n.inner.norm_bound(eps);
            } else if constexpr (std::is_same_v<T, BlockNode>) {
                double s = 0.0;
                for (const auto& b : n.grid) {
                    const double x = b.norm_bound(eps);
                    s += x * x;
                }
                return std::sqrt(s);
            } else {
                return n.norm ? *n.norm : n.body.norm_bound(eps);
            }
        },
        node_->v);
}

std::string LazyOp::to_string() const
{
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AtomNode>) {
                return atom_name(n.atom);
            } else if constexpr (std::is_same_v<T, ScaleNode>) {
                return "(" + n.factor.to_string() + ")" + n.child.to_string();
            } else if constexpr (std::is_same_v<T, SumNode>) {
                std::string s = "(";
                for (std::size_t i = 0; i < n.terms.size(); ++i)
                    s += (i ? " + " : "") + n.terms[i].to_string();
                return s + ")";
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                return n.outer.to_string() + n.inner.to_string();
            } else if constexpr (std::is_same_v<T, BlockNode>) {
                std::string s = "[";
                for (int i = 0; i < 16; ++i)
                    s += n.grid[i].to_string() + (i == 15 ? "]" : (i % 4 == 3 ? "; " : ", "));
                return s;
            } else {
                return n.name;
            }
        },
        node_->v);
}

LazyOp make_U() { return LazyOp::atom(Atom::shift_even); }
LazyOp make_V() { return LazyOp::atom(Atom::shift_odd); }

LazyOp make_W()
{
    const LazyOp u = make_U(), v = make_V();
    // W is a self-adjoint involution, hence unitary.
    return LazyOp::labeled("W", u * adjoint(v) + v * adjoint(u), 1.0);
}

LazyOp commutator(const LazyOp& a, const LazyOp& b)
{
    return a * b - b * a;
}

LazyOp conjugate_by_S(const LazyOp& op)
{
    const LazyOp::Grid* grid = op.blocks();
    if (!grid)
        throw InputError("conjugate_by_S: operator has no 4x4 block structure");
    LazyOp::Grid scaled;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            scaled[i * 4 + j] = scale(EpsScalar::eps_power(j - i), (*grid)[i * 4 + j]);
    return block4(scaled);
}

// ---------------------------------------------------------------------------
// Evaluation

const Column& ColumnEvaluator::column(const LazyOp& op, BasisIndex g)
{
    if (g == 0)
        throw InputError("basis indices start at 1");
    const Key key{op.node_.get(), g};
    if (auto it = memo_.find(key); it != memo_.end())
        return it->second;
    Column c = evaluate(*op.node_, g);
    return memo_.emplace(key, std::move(c)).first->second;
}

Column ColumnEvaluator::evaluate(const OpNode& node, BasisIndex g)
{
    return std::visit(
        [&](const auto& n) -> Column {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AtomNode>) {
                return apply_atom(n.atom, g);
            } else if constexpr (std::is_same_v<T, ScaleNode>) {
                Column out;
                out.add_scaled(column(n.child, g), n.factor);
                return out;
            } else if constexpr (std::is_same_v<T, SumNode>) {
                Column out;
                for (const auto& t : n.terms)
                    out.add_scaled(column(t, g), EpsScalar(1));
                return out;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                // Copy: evaluating the outer columns may grow the memo.
                const Column inner = column(n.inner, g);
                Column out;
                for (const auto& [k, c] : inner.entries())
                    out.add_scaled(column(n.outer, k), c);
                return out;
            } else if constexpr (std::is_same_v<T, BlockNode>) {
                const unsigned slot = static_cast<unsigned>((g - 1) % 4); // 0-based column slot
                const BasisIndex internal = (g - 1) / 4 + 1;
                Column out;
                for (unsigned row = 0; row < 4; ++row) {
                    const Column& c = column(n.grid[row * 4 + slot], internal);
                    for (const auto& [k, value] : c.entries())
                        out.add(block_global(k, row + 1), value);
                }
                return out;
            } else {
                return column(n.body, g);
            }
        },
        node.v);
}

// ---------------------------------------------------------------------------
// Compression

namespace {

void fill_column(Matrix& out, const Column& col, std::size_t j, std::size_t m, double eps)
{
    for (const auto& [i, value] : col.entries()) {
        if (i > m)
            break;
        out(i - 1, j) = value.evaluate(eps);
    }
}

} // namespace

Matrix compress_serial(const LazyOp& op, std::size_t m, double eps)
{
    Matrix out(m, m);
    ColumnEvaluator ev;
    for (std::size_t j = 0; j < m; ++j)
        fill_column(out, ev.column(op, j + 1), j, m, eps);
    return out;
}

Matrix compress(const LazyOp& op, std::size_t m, double eps)
{
    Matrix out(m, m);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto cols = static_cast<std::int64_t>(m);
#pragma omp parallel
    {
        ColumnEvaluator ev;
#pragma omp for schedule(static)
        for (std::int64_t j = 0; j < cols; ++j) {
            try {
                const auto jj = static_cast<std::size_t>(j);
                fill_column(out, ev.column(op, jj + 1), jj, m, eps);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

std::vector<EpsScalar> compress_exact(const LazyOp& op, std::size_t m)
{
    std::vector<EpsScalar> out(m * m);
    ColumnEvaluator ev;
    for (std::size_t j = 0; j < m; ++j) {
        for (const auto& [i, value] : ev.column(op, j + 1).entries()) {
            if (i > m)
                break;
            out[(i - 1) * m + j] = value;
        }
    }
    return out;
}

} // namespace opcomm
