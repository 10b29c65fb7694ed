#include "opcomm/eps_scalar.hpp"

#include <cmath>
#include <limits>

#include "opcomm/errors.hpp"

namespace opcomm {

namespace {

EpsScalar::Coefficient checked_add(EpsScalar::Coefficient a, EpsScalar::Coefficient b)
{
    EpsScalar::Coefficient r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("EpsScalar: coefficient overflow in addition");
    return r;
}

EpsScalar::Coefficient checked_mul(EpsScalar::Coefficient a, EpsScalar::Coefficient b)
{
    EpsScalar::Coefficient r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("EpsScalar: coefficient overflow in multiplication");
    return r;
}

int checked_exponent(int a, int b)
{
    int r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("EpsScalar: exponent overflow");
    return r;
}

} // namespace

EpsScalar::EpsScalar(Coefficient c)
{
    if (c != 0)
        terms_.emplace(0, c);
}

EpsScalar EpsScalar::monomial(Coefficient c, int exponent)
{
    EpsScalar s;
    if (c != 0)
        s.terms_.emplace(exponent, c);
    return s;
}

EpsScalar::Coefficient EpsScalar::coefficient(int exponent) const noexcept
{
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0 : it->second;
}

bool EpsScalar::has_nonnegative_coefficients() const noexcept
{
    for (const auto& [k, c] : terms_)
        if (c < 0)
            return false;
    return true;
}

double EpsScalar::evaluate(double eps) const
{
    double sum = 0.0;
    for (const auto& [k, c] : terms_)
        sum += static_cast<double>(c) * std::pow(eps, k);
    return sum;
}

void EpsScalar::add_term(int exponent, Coefficient c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (inserted)
        return;
    it->second = checked_add(it->second, c);
    if (it->second == 0)
        terms_.erase(it);
}

EpsScalar& EpsScalar::operator+=(const EpsScalar& rhs)
{
    for (const auto& [k, c] : rhs.terms_)
        add_term(k, c);
    return *this;
}

EpsScalar& EpsScalar::operator-=(const EpsScalar& rhs)
{
    for (const auto& [k, c] : rhs.terms_) {
        if (c == std::numeric_limits<Coefficient>::min())
            throw OverflowError("EpsScalar: coefficient overflow in negation");
        add_term(k, -c);
    }
    return *this;
}

EpsScalar& EpsScalar::operator*=(const EpsScalar& rhs)
{
    EpsScalar product;
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : rhs.terms_)
            product.add_term(checked_exponent(k1, k2), checked_mul(c1, c2));
    *this = std::move(product);
    return *this;
}

EpsScalar EpsScalar::operator-() const
{
    return EpsScalar{} - *this;
}

std::string EpsScalar::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    // Highest power first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        auto [k, c] = *it;
        if (!out.empty()) {
            out += c < 0 ? " - " : " + ";
            c = c < 0 ? -c : c;
        }
        out += std::to_string(c);
        if (k != 0)
            out += "e^" + std::to_string(k);
    }
    return out;
}

} // namespace opcomm
