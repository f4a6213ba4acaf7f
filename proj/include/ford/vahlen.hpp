#pragma once

#include <optional>
#include <string>
#include <variant>

#include "ford/clifford.hpp"
#include "ford/order.hpp"

namespace ford {

/// 2x2 matrix of Clifford numbers (a b; c d), all entries in one algebra.
struct VahlenMatrix {
    CliffordNumber a, b, c, d;

    const ContextPtr& context() const { return a.context(); }

    static VahlenMatrix identity(const ContextPtr& ctx);
    /// Y(b) = (1 b; 0 1), translation by the vector b.
    static VahlenMatrix translation(const CliffordNumber& b);
    /// Z = (0 1; -1 0), x -> -x^-1.
    static VahlenMatrix inversion(const ContextPtr& ctx);
    /// X(u) = (u 0; 0 (u*)^-1).
    static VahlenMatrix dilation(const CliffordNumber& u);

    /// The Vahlen inverse (d* -b*; -c* a*).
    VahlenMatrix inverse() const;
    VahlenMatrix embed(const ContextPtr& larger) const;

    friend VahlenMatrix operator*(const VahlenMatrix& g, const VahlenMatrix& h);
    friend bool operator==(const VahlenMatrix& g, const VahlenMatrix& h) = default;

    std::string to_string() const;
};

CliffordNumber pseudo_det(const VahlenMatrix& g);

/// Entries are 0 or in the Clifford group, ad* - bc* = 1, and ac^-1, bd^-1 are
/// vectors whenever c, d are invertible.
bool vahlen_check(const VahlenMatrix& g);
/// Additionally every entry of g and of its inverse lies in the order.
bool vahlen_check(const VahlenMatrix& g, const Order& order);

/// A point of V_n (rational coordinates) or infinity.
class BoundaryPoint {
public:
    BoundaryPoint() = default;  // infinity
    explicit BoundaryPoint(CliffordNumber x);
    static BoundaryPoint infinity() { return {}; }

    bool is_infinity() const { return !point_.has_value(); }
    const CliffordNumber& point() const;

    friend bool operator==(const BoundaryPoint& p, const BoundaryPoint& q) = default;
    std::string to_string() const;

private:
    std::optional<CliffordNumber> point_;
};

/// x -> (ax + b)(cx + d)^-1, with g(inf) = ac^-1 (inf if c = 0) and
/// g(x) = inf when cx + d is not invertible.
BoundaryPoint mobius_apply(const VahlenMatrix& g, const BoundaryPoint& p);
/// The same formula on a point of the upper half space, given as a vector of
/// the ambient algebra. Returns nullopt when cx + d is not invertible.
std::optional<CliffordNumber> mobius_apply_interior(const VahlenMatrix& g, const CliffordNumber& x);

/// (a b; c d)^dagger = (conj d, conj b; conj c, conj a).
VahlenMatrix rev_adjoint(const VahlenMatrix& m);

/// Reverse Hermitian matrix (beta alpha; gamma conj(beta)) over the ambient
/// algebra; beta is a vector there.
struct RevHermitian {
    CliffordNumber beta;
    Rational alpha;
    Rational gamma;

    VahlenMatrix matrix() const;
    friend bool operator==(const RevHermitian& p, const RevHermitian& q) = default;
    std::string to_string() const;
};

/// The quadric of S_inf: beta = e_n / 2, alpha = 1, gamma = 0, over the ambient
/// algebra of the given boundary context.
RevHermitian a_infinity(const ContextPtr& boundary_ctx);

Rational discriminant(const RevHermitian& A);

/// Representative with gamma > 0, else alpha > 0, else first nonzero beta
/// coordinate > 0 (overall sign does not change the quadric).
RevHermitian canonical_sign(const RevHermitian& A);

/// g^dagger A g, g taken over the boundary algebra. Throws StructureError if
/// the product is not reverse Hermitian.
RevHermitian rherm_action(const VahlenMatrix& g, const RevHermitian& A);

/// Closed form of the quadric of g^-1(S_inf): beta = conj(d) c + (e_n / 2)(d* a - b* c),
/// alpha = |d|^2, gamma = |c|^2. Throws StructureError when d* a - b* c is not a
/// scalar or beta is not a vector.
RevHermitian ford_image(const VahlenMatrix& g);

/// gamma |x|^2 + beta x + conj(x) conj(beta) + alpha, for x in the ambient algebra.
CliffordNumber quadric_value(const RevHermitian& A, const CliffordNumber& x);

struct SphereGeometry {
    CliffordNumber center;  // ambient vector
    Rational radius_sq;
};

/// 2 (beta_0 x_0 - sum d_j beta_j x_j) + alpha = 0.
struct PlaneGeometry {
    CliffordNumber beta;
    Rational alpha;
};

using QuadricGeometry = std::variant<SphereGeometry, PlaneGeometry>;

/// Center -conj(beta)/gamma and radius^2 = delta / gamma^2, or the plane when
/// gamma = 0. Throws DegenerateQuadric when delta <= 0.
QuadricGeometry sphere_of_rherm(const RevHermitian& A);

}  // namespace ford
