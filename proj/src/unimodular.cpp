#include "ford/unimodular.hpp"

#include <numeric>

#include "ford/errors.hpp"

namespace ford {

namespace {

constexpr int kMaxSteps = 64;

std::vector<mpz_class> integer_coords(const Order& order, const CliffordNumber& x) {
    std::vector<mpz_class> out;
    for (const auto& c : order.coordinates(x)) {
        if (!c.is_integer()) throw PreconditionError(x.to_string() + " is not in the order " + order.name());
        out.push_back(c.numerator());
    }
    return out;
}

CliffordNumber combine(const Order& order, const std::vector<mpz_class>& z, std::size_t offset) {
    CliffordNumber out(order.context());
    for (std::size_t i = 0; i < order.zbasis().size(); ++i) {
        const auto& v = z[offset + i];
        if (v != 0) out += order.zbasis()[i] * Rational(mpq_class(v));
    }
    return out;
}

// Solves a nu* - b mu* = 1 over the order; only meaningful for commutative
// algebras, where every solution is a valid Vahlen matrix.
std::optional<VahlenMatrix> solve_commutative(const Order& order, const CliffordNumber& mu, const CliffordNumber& nu) {
    const auto& basis = order.zbasis();
    const std::size_t r = basis.size();
    ZMatrix rows;
    for (std::size_t i = 0; i < 2 * r; ++i) {
        CliffordNumber img = i < r ? basis[i] * reversal(nu) : -(basis[i - r] * reversal(mu));
        auto row = integer_coords(order, img);
        row.resize(r + 2 * r);
        row[r + i] = 1;
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> cols(r);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    const std::size_t rank = hnf_in_place(rows, cols);

    auto target = integer_coords(order, CliffordNumber(order.context(), 1));
    std::vector<mpz_class> x(2 * r);
    for (std::size_t k = 0; k < rank; ++k) {
        std::size_t p = 0;
        while (p < r && rows[k][p] == 0) ++p;
        if (p == r) continue;
        if (target[p] % rows[k][p] != 0) return std::nullopt;
        mpz_class f = target[p] / rows[k][p];
        if (f == 0) continue;
        for (std::size_t j = 0; j < r; ++j) target[j] -= f * rows[k][j];
        for (std::size_t j = 0; j < 2 * r; ++j) x[j] += f * rows[k][r + j];
    }
    for (const auto& t : target) {
        if (t != 0) return std::nullopt;
    }
    VahlenMatrix g{combine(order, x, 0), combine(order, x, r), mu, nu};
    if (!vahlen_check(g, order)) {
        throw CompletionUnknown("linear completion of (" + mu.to_string() + ", " + nu.to_string() +
                                ") is not a Vahlen matrix");
    }
    return g;
}

}  // namespace

std::optional<VahlenMatrix> try_complete(const Order& order, const CliffordNumber& mu, const CliffordNumber& nu) {
    const auto& ctx = order.context();
    if (mu.is_zero() && nu.is_zero()) throw PreconditionError("cannot complete the zero row");
    if (!order.contains(mu) || !order.contains(nu)) throw PreconditionError("row entries must lie in the order");

    const bool commutative = ctx->generators() <= 1;
    CliffordNumber c = mu;
    CliffordNumber d = nu;
    VahlenMatrix e = VahlenMatrix::identity(ctx);
    const VahlenMatrix z = VahlenMatrix::inversion(ctx);
    bool stalled = false;
    int steps = 0;
    while (!c.is_zero()) {
        if (++steps > kMaxSteps) {
            if (commutative) return solve_commutative(order, mu, nu);
            throw CompletionUnknown("descent did not finish within 64 steps");
        }
        CliffordNumber ratio = *try_inverse(c) * d;
        if (!ratio.is_vector()) {
            throw PreconditionError("(" + mu.to_string() + ", " + nu.to_string() + ") is not a Vahlen row");
        }
        CliffordNumber q = order.vec().nearest(ratio);
        CliffordNumber r = d - c * q;
        auto nr = reduced_norm(r);
        auto nc = reduced_norm(c);
        if (!nr || !nc || *nr >= *nc) {
            stalled = true;
            break;
        }
        e = e * VahlenMatrix::translation(-q) * z;
        d = c;
        c = -r;
    }
    if (stalled) {
        if (commutative) return solve_commutative(order, mu, nu);
        throw CompletionUnknown("Euclidean descent stalled on (" + mu.to_string() + ", " + nu.to_string() + ") in " +
                                order.name());
    }
    // (0, d) completes only when d is a unit, and the descent preserves completability.
    if (!order.is_unit(d)) return std::nullopt;
    VahlenMatrix g = VahlenMatrix::dilation(*try_inverse(reversal(d))) * e.inverse();
    if (g.c != mu || g.d != nu || !vahlen_check(g, order)) {
        throw StructureError("completion of (" + mu.to_string() + ", " + nu.to_string() + ") failed its check");
    }
    return g;
}

VahlenMatrix unimodular_complete(const Order& order, const CliffordNumber& mu, const CliffordNumber& nu) {
    auto g = try_complete(order, mu, nu);
    if (!g) throw NotCompletable("(" + mu.to_string() + ", " + nu.to_string() + ") is not unimodular in " + order.name());
    return *g;
}

}  // namespace ford
