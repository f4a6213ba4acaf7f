#include "ford/vahlen.hpp"

#include <sstream>

#include "ford/errors.hpp"

namespace ford {

namespace {

CliffordNumber vertical(const ContextPtr& ambient) { return CliffordNumber::generator(ambient, ambient->generators()); }

bool inverse_is_vector(const CliffordNumber& x, const CliffordNumber& y) {
    // x y^-1 is a vector, when y is invertible.
    auto inv = try_inverse(y);
    return !inv || (x * *inv).is_vector();
}

}  // namespace

VahlenMatrix VahlenMatrix::identity(const ContextPtr& ctx) {
    return {CliffordNumber(ctx, 1), CliffordNumber(ctx), CliffordNumber(ctx), CliffordNumber(ctx, 1)};
}

VahlenMatrix VahlenMatrix::translation(const CliffordNumber& b) {
    const auto& ctx = b.context();
    return {CliffordNumber(ctx, 1), b, CliffordNumber(ctx), CliffordNumber(ctx, 1)};
}

VahlenMatrix VahlenMatrix::inversion(const ContextPtr& ctx) {
    return {CliffordNumber(ctx), CliffordNumber(ctx, 1), CliffordNumber(ctx, -1), CliffordNumber(ctx)};
}

VahlenMatrix VahlenMatrix::dilation(const CliffordNumber& u) {
    auto inv = try_inverse(reversal(u));
    if (!inv) throw PreconditionError("dilation by a non-invertible element " + u.to_string());
    const auto& ctx = u.context();
    return {u, CliffordNumber(ctx), CliffordNumber(ctx), *inv};
}

VahlenMatrix VahlenMatrix::inverse() const { return {reversal(d), -reversal(b), -reversal(c), reversal(a)}; }

VahlenMatrix VahlenMatrix::embed(const ContextPtr& larger) const {
    return {a.embed(larger), b.embed(larger), c.embed(larger), d.embed(larger)};
}

VahlenMatrix operator*(const VahlenMatrix& g, const VahlenMatrix& h) {
    return {g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

std::string VahlenMatrix::to_string() const {
    return "((" + a.to_string() + ", " + b.to_string() + "), (" + c.to_string() + ", " + d.to_string() + "))";
}

CliffordNumber pseudo_det(const VahlenMatrix& g) { return g.a * reversal(g.d) - g.b * reversal(g.c); }

bool vahlen_check(const VahlenMatrix& g) {
    for (const auto* e : {&g.a, &g.b, &g.c, &g.d}) {
        if (!e->is_zero() && !clifford_group_test(*e)) return false;
    }
    if (pseudo_det(g) != CliffordNumber(g.context(), 1)) return false;
    return inverse_is_vector(g.a, g.c) && inverse_is_vector(g.b, g.d);
}

bool vahlen_check(const VahlenMatrix& g, const Order& order) {
    if (g.context() != order.context() || !vahlen_check(g)) return false;
    const VahlenMatrix inv = g.inverse();
    for (const CliffordNumber* e : {&g.a, &g.b, &g.c, &g.d, &inv.a, &inv.b, &inv.c, &inv.d}) {
        if (!order.contains(*e)) return false;
    }
    return true;
}

BoundaryPoint::BoundaryPoint(CliffordNumber x) : point_(std::move(x)) {
    if (!point_->is_vector()) throw PreconditionError("boundary point must be a Clifford vector: " + point_->to_string());
}

const CliffordNumber& BoundaryPoint::point() const {
    if (!point_) throw PreconditionError("the point at infinity has no coordinates");
    return *point_;
}

std::string BoundaryPoint::to_string() const { return point_ ? point_->to_string() : "inf"; }

BoundaryPoint mobius_apply(const VahlenMatrix& g, const BoundaryPoint& p) {
    if (p.is_infinity()) {
        auto inv = try_inverse(g.c);
        if (!inv) return BoundaryPoint::infinity();
        CliffordNumber r = g.a * *inv;
        if (!r.is_vector()) throw StructureError("g(inf) = " + r.to_string() + " is not a vector");
        return BoundaryPoint(std::move(r));
    }
    const auto& x = p.point();
    auto inv = try_inverse(g.c * x + g.d);
    if (!inv) return BoundaryPoint::infinity();
    CliffordNumber r = (g.a * x + g.b) * *inv;
    if (!r.is_vector()) throw StructureError("g(x) = " + r.to_string() + " is not a vector");
    return BoundaryPoint(std::move(r));
}

std::optional<CliffordNumber> mobius_apply_interior(const VahlenMatrix& g, const CliffordNumber& x) {
    VahlenMatrix h = g.context() == x.context() ? g : g.embed(x.context());
    auto inv = try_inverse(h.c * x + h.d);
    if (!inv) return std::nullopt;
    return (h.a * x + h.b) * *inv;
}

VahlenMatrix rev_adjoint(const VahlenMatrix& m) {
    return {conjugation(m.d), conjugation(m.b), conjugation(m.c), conjugation(m.a)};
}

VahlenMatrix RevHermitian::matrix() const {
    const auto& ctx = beta.context();
    return {beta, CliffordNumber(ctx, alpha), CliffordNumber(ctx, gamma), conjugation(beta)};
}

std::string RevHermitian::to_string() const {
    return "(beta " + beta.to_string() + ", alpha " + alpha.to_compact_string() + ", gamma " +
           gamma.to_compact_string() + ")";
}

RevHermitian a_infinity(const ContextPtr& boundary_ctx) {
    auto amb = boundary_ctx->ambient();
    return {vertical(amb) * Rational(1, 2), Rational(1), Rational(0)};
}

Rational discriminant(const RevHermitian& A) { return vector_norm2(A.beta) - A.alpha * A.gamma; }

RevHermitian canonical_sign(const RevHermitian& A) {
    int s = A.gamma.sign();
    if (s == 0) s = A.alpha.sign();
    if (s == 0) {
        for (const auto& c : A.beta.vector_coords()) {
            if (!c.is_zero()) {
                s = c.sign();
                break;
            }
        }
    }
    if (s >= 0) return A;
    return {-A.beta, -A.alpha, -A.gamma};
}

RevHermitian rherm_action(const VahlenMatrix& g, const RevHermitian& A) {
    const auto& amb = A.beta.context();
    VahlenMatrix h = g.context() == amb ? g : g.embed(amb);
    VahlenMatrix m = rev_adjoint(h) * A.matrix() * h;
    if (!m.a.is_vector() || !m.b.is_scalar() || !m.c.is_scalar() || m.d != conjugation(m.a)) {
        throw StructureError("g^dagger A g is not reverse Hermitian: " + m.to_string());
    }
    return {m.a, m.b.scalar_part(), m.c.scalar_part()};
}

RevHermitian ford_image(const VahlenMatrix& g) {
    const auto& ctx = g.context();
    auto amb = ctx->ambient();
    CliffordNumber s = reversal(g.d) * g.a - reversal(g.b) * g.c;
    if (!s.is_scalar()) throw StructureError("d* a - b* c is not a scalar for " + g.to_string());
    CliffordNumber beta = (conjugation(g.d) * g.c).embed(amb) + vertical(amb) * (s.scalar_part() / Rational(2));
    if (!beta.is_vector()) throw StructureError("beta is not a vector for " + g.to_string());
    return {std::move(beta), norm_form(g.d), norm_form(g.c)};
}

CliffordNumber quadric_value(const RevHermitian& A, const CliffordNumber& x) {
    const auto& amb = A.beta.context();
    CliffordNumber xx = x.context() == amb ? x : x.embed(amb);
    return CliffordNumber(amb, A.gamma * norm_form(xx)) + A.beta * xx + conjugation(xx) * conjugation(A.beta) +
           CliffordNumber(amb, A.alpha);
}

QuadricGeometry sphere_of_rherm(const RevHermitian& A) {
    Rational delta = discriminant(A);
    if (delta.sign() <= 0) throw DegenerateQuadric("discriminant " + delta.to_compact_string() + " is not positive");
    if (A.gamma.is_zero()) return PlaneGeometry{A.beta, A.alpha};
    return SphereGeometry{-conjugation(A.beta) / A.gamma, delta / (A.gamma * A.gamma)};
}

}  // namespace ford
