#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ford/rational.hpp"

namespace ford {

/// Basis blade e_S encoded as a bit mask: bit j-1 set iff generator e_j is in S.
using Blade = std::uint32_t;

class AlgebraContext;
using ContextPtr = std::shared_ptr<const AlgebraContext>;

/// Clifford algebra of the diagonal form d_1 y_1^2 + ... + d_m y_m^2 over Q,
/// with e_j^2 = -d_j. Contexts are interned: equal ds-lists share one
/// instance, so pointer comparison is value comparison.
class AlgebraContext {
public:
    struct BladeProduct {
        Blade blade;
        std::int64_t factor;  // e_A e_B = factor * e_{A xor B}
    };

    /// Validates and interns. Throws ContextError on a bad ds-list.
    static ContextPtr make(std::vector<std::int64_t> ds);

    const std::vector<std::int64_t>& ds() const { return ds_; }
    int generators() const { return static_cast<int>(ds_.size()); }
    std::size_t dimension() const { return std::size_t{1} << ds_.size(); }

    BladeProduct product(Blade a, Blade b) const { return table_[a * dimension() + b]; }
    /// e_S times its Clifford conjugate: the product of d_j over j in S.
    std::int64_t blade_weight(Blade s) const { return weights_[s]; }

    /// The context with one more generator of square -1 (the vertical direction).
    ContextPtr ambient() const;

    /// Blades in canonical order: lexicographic on the ascending index list.
    const std::vector<Blade>& canonical_blades() const { return canonical_; }

    std::string describe() const;

    explicit AlgebraContext(std::vector<std::int64_t> ds);

private:
    std::vector<std::int64_t> ds_;
    std::vector<BladeProduct> table_;
    std::vector<std::int64_t> weights_;
    std::vector<Blade> canonical_;
};

int blade_grade(Blade s);
std::vector<int> blade_indices(Blade s);  // 1-based, ascending
Blade blade_from_indices(std::span<const int> indices);

enum class Involution { parity, reversal, conjugation };

/// Exact multivector. Coefficients are stored densely by blade mask; the
/// sparse view (terms()) omits zeros.
class CliffordNumber {
public:
    explicit CliffordNumber(ContextPtr ctx);
    CliffordNumber(ContextPtr ctx, const Rational& scalar);
    CliffordNumber(ContextPtr ctx, std::vector<Rational> coeffs);

    static CliffordNumber blade(ContextPtr ctx, Blade s, const Rational& coeff = Rational(1));
    /// e_j for 1 <= j <= m.
    static CliffordNumber generator(ContextPtr ctx, int j);
    /// x_0 + x_1 e_1 + ... + x_m e_m.
    static CliffordNumber vector(ContextPtr ctx, std::span<const Rational> coords);

    const ContextPtr& context() const { return ctx_; }
    const Rational& coeff(Blade s) const { return coeffs_[s]; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    std::vector<std::pair<Blade, Rational>> terms() const;

    bool is_zero() const;
    bool is_scalar() const;
    /// Grade <= 1, i.e. a Clifford vector.
    bool is_vector() const;
    int max_grade() const;  // -1 for zero
    Rational scalar_part() const { return coeffs_[0]; }
    /// (x_0, ..., x_m); requires nothing, drops higher grades.
    std::vector<Rational> vector_coords() const;

    /// Re-expresses the number in a context whose ds-list extends this one.
    CliffordNumber embed(const ContextPtr& larger) const;
    /// Inverse of embed; throws ContextError if a blade uses a dropped generator.
    CliffordNumber restrict_to(const ContextPtr& smaller) const;

    CliffordNumber operator-() const;
    CliffordNumber& operator+=(const CliffordNumber& rhs);
    CliffordNumber& operator-=(const CliffordNumber& rhs);
    CliffordNumber& operator*=(const Rational& s);
    CliffordNumber& operator/=(const Rational& s);

    friend CliffordNumber operator+(CliffordNumber a, const CliffordNumber& b) { return a += b; }
    friend CliffordNumber operator-(CliffordNumber a, const CliffordNumber& b) { return a -= b; }
    friend CliffordNumber operator*(CliffordNumber a, const Rational& s) { return a *= s; }
    friend CliffordNumber operator*(const Rational& s, CliffordNumber a) { return a *= s; }
    friend CliffordNumber operator/(CliffordNumber a, const Rational& s) { return a /= s; }
    friend CliffordNumber operator*(const CliffordNumber& a, const CliffordNumber& b);
    friend bool operator==(const CliffordNumber& a, const CliffordNumber& b);

    std::string to_string() const;
    std::size_t hash() const;

private:
    ContextPtr ctx_;
    std::vector<Rational> coeffs_;
};

CliffordNumber multiply(const CliffordNumber& a, const CliffordNumber& b);
CliffordNumber involution(const CliffordNumber& x, Involution kind);
inline CliffordNumber parity(const CliffordNumber& x) { return involution(x, Involution::parity); }
inline CliffordNumber reversal(const CliffordNumber& x) { return involution(x, Involution::reversal); }
inline CliffordNumber conjugation(const CliffordNumber& x) { return involution(x, Involution::conjugation); }

/// x^-1 = conj(x) / (x conj(x)) when x conj(x) is a nonzero scalar; nullopt otherwise.
std::optional<CliffordNumber> try_inverse(const CliffordNumber& x);

/// Invertible and the twisted conjugation v -> x' v x^-1 keeps 1, e_1, ..., e_m
/// inside the grade <= 1 span.
bool clifford_group_test(const CliffordNumber& x);

/// x conj(x) when it is a rational scalar.
std::optional<Rational> reduced_norm(const CliffordNumber& x);

/// |x|^2 = x_0^2 + sum d_j x_j^2 for a Clifford vector (higher grades ignored).
Rational vector_norm2(const CliffordNumber& x);

/// Scalar part of x conj(x): the positive definite norm form on the whole algebra.
Rational norm_form(const CliffordNumber& x);

}  // namespace ford

template <>
struct std::hash<ford::CliffordNumber> {
    std::size_t operator()(const ford::CliffordNumber& x) const { return x.hash(); }
};
