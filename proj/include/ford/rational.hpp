#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ford {

/// Exact rational number.
///
/// Values whose numerator and denominator fit in a signed 64-bit word are
/// kept inline; anything larger spills to a GMP rational. Arithmetic
/// promotes on overflow and demotes again whenever a result fits, so the
/// representation of a given value is unique and equality is structural.
class Rational {
public:
    Rational() noexcept = default;
    Rational(std::int64_t value);  // NOLINT(google-explicit-constructor)
    Rational(int value) noexcept : num_(value) {}           // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class& value);

    Rational(const Rational& other);
    Rational(Rational&& other) noexcept = default;
    Rational& operator=(const Rational& other);
    Rational& operator=(Rational&& other) noexcept = default;
    ~Rational() = default;

    /// Parses "p", "-p" or "p/q" (q may be any nonzero integer).
    static Rational parse(std::string_view text);

    bool is_zero() const noexcept { return !big_ && num_ == 0; }
    bool is_integer() const;
    int sign() const noexcept;
    bool is_small() const noexcept { return !big_; }

    mpq_class to_mpq() const;
    mpz_class numerator() const;
    mpz_class denominator() const;
    double to_double() const;

    /// Largest integer not exceeding the value.
    mpz_class floor() const;
    /// Nearest integer, halves rounded down (toward -infinity).
    mpz_class round_half_down() const;

    /// Canonical "p/q" form, q > 0, always with the slash.
    std::string to_string() const;
    /// "p" for integers, "p/q" otherwise.
    std::string to_compact_string() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend int compare(const Rational& a, const Rational& b);
    friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

    std::size_t hash() const noexcept;

private:
    void assign_big(mpq_class value);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);

/// Exact square root when r is the square of a rational.
bool exact_sqrt(const Rational& r, Rational& out);

/// Rational bounds on sqrt(r): lo <= sqrt(r) <= hi, hi - lo <= 2^-precision_bits (roughly).
void sqrt_bounds(const Rational& r, Rational& lo, Rational& hi, unsigned precision_bits = 40);

}  // namespace ford

template <>
struct std::hash<ford::Rational> {
    std::size_t operator()(const ford::Rational& r) const noexcept { return r.hash(); }
};
