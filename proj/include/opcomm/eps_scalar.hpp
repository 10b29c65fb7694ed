#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace opcomm {

/// Exact Laurent polynomial sum_k c_k eps^k in a symbolic eps, with 64-bit
/// integer coefficients. Arithmetic is checked and throws OverflowError
/// instead of wrapping. Zero coefficients are never stored.
class EpsScalar {
public:
    using Coefficient = std::int64_t;

    EpsScalar() = default;
    EpsScalar(Coefficient c); // NOLINT(google-explicit-constructor): c * eps^0

    static EpsScalar monomial(Coefficient c, int exponent);
    static EpsScalar eps_power(int exponent) { return monomial(1, exponent); }

    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<int, Coefficient>& terms() const noexcept { return terms_; }
    Coefficient coefficient(int exponent) const noexcept;

    /// Every coefficient >= 0, hence the value is >= 0 for every eps > 0.
    bool has_nonnegative_coefficients() const noexcept;

    double evaluate(double eps) const;

    EpsScalar& operator+=(const EpsScalar& rhs);
    EpsScalar& operator-=(const EpsScalar& rhs);
    EpsScalar& operator*=(const EpsScalar& rhs);
    EpsScalar operator-() const;

    friend EpsScalar operator+(EpsScalar a, const EpsScalar& b) { return a += b; }
    friend EpsScalar operator-(EpsScalar a, const EpsScalar& b) { return a -= b; }
    friend EpsScalar operator*(EpsScalar a, const EpsScalar& b) { return a *= b; }
    friend bool operator==(const EpsScalar&, const EpsScalar&) = default;

    /// e.g. "3e^3", "-4e^-1 + 2", "0".
    std::string to_string() const;

private:
    void add_term(int exponent, Coefficient c);

    std::map<int, Coefficient> terms_;
};

} // namespace opcomm
