#include "ford/order.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "ford/errors.hpp"

namespace ford {

namespace {

RatVec blade_coords(const CliffordNumber& x) { return x.coeffs(); }

std::vector<std::size_t> iota_columns(std::size_t n) {
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return cols;
}

bool all_integer(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r.is_integer(); });
}

RatMatrix gram_of(const std::vector<CliffordNumber>& basis, bool vector_form) {
    const std::size_t n = basis.size();
    RatMatrix g(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            // Polarisation of the norm form.
            const auto& a = basis[i];
            const auto& b = basis[j];
            Rational v = vector_form ? (vector_norm2(a + b) - vector_norm2(a) - vector_norm2(b))
                                     : (norm_form(a + b) - norm_form(a) - norm_form(b));
            v /= Rational(2);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    return g;
}

}  // namespace

std::string to_string(EuclideanFlag flag) {
    switch (flag) {
        case EuclideanFlag::norm_euclidean: return "norm-euclidean";
        case EuclideanFlag::euclidean: return "euclidean";
        case EuclideanFlag::unknown: return "unknown";
        case EuclideanFlag::not_euclidean: return "not-euclidean";
    }
    return "unknown";
}

EuclideanFlag parse_euclidean_flag(const std::string& text) {
    if (text == "norm-euclidean") return EuclideanFlag::norm_euclidean;
    if (text == "euclidean") return EuclideanFlag::euclidean;
    if (text == "unknown") return EuclideanFlag::unknown;
    if (text == "not-euclidean") return EuclideanFlag::not_euclidean;
    throw ParseError("unknown euclidean flag '" + text + "'");
}

VecLattice::VecLattice(ContextPtr ctx, std::vector<CliffordNumber> basis)
    : ctx_(std::move(ctx)), basis_(std::move(basis)) {
    RatMatrix rows;
    for (const auto& b : basis_) rows.push_back(b.vector_coords());
    auto inv = invert(rows);
    if (!inv) throw NotAnOrder("vector lattice is not of full rank");
    inverse_ = std::move(*inv);
    enumerator_ = std::make_shared<EllipsoidEnumerator>(gram_of(basis_, true));
}

RatVec VecLattice::coordinates(const CliffordNumber& x) const { return row_times(x.vector_coords(), inverse_); }

bool VecLattice::contains(const CliffordNumber& x) const { return x.is_vector() && all_integer(coordinates(x)); }

CliffordNumber VecLattice::combine(const IntVec& z) const {
    CliffordNumber out(ctx_);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] != 0) out += basis_[i] * Rational(z[i]);
    }
    return out;
}

CliffordNumber VecLattice::nearest(const CliffordNumber& x) const {
    auto winners = enumerator_->closest(coordinates(x));
    return combine(winners.front());
}

RatVec Order::coordinates(const CliffordNumber& x) const {
    if (x.context() != data_->ctx) throw ContextError("element is not in the algebra of order " + name());
    return row_times(blade_coords(x), data_->inverse);
}

bool Order::contains(const CliffordNumber& x) const { return all_integer(coordinates(x)); }

CliffordNumber Order::combine(const IntVec& z) const {
    CliffordNumber out(data_->ctx);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] != 0) out += data_->zbasis[i] * Rational(z[i]);
    }
    return out;
}

bool Order::is_unit(const CliffordNumber& x) const {
    auto n = reduced_norm(x);
    return n && *n == Rational(1) && contains(x) && clifford_group_test(x);
}

Order order_from_generators(const ContextPtr& ctx, const std::vector<CliffordNumber>& gens, const std::string& name,
                            EuclideanFlag flag) {
    const std::size_t dim = ctx->dimension();
    const auto cols = iota_columns(dim);
    RatMatrix rows{blade_coords(CliffordNumber(ctx, 1))};
    for (const auto& g : gens) {
        if (g.context() != ctx) throw ContextError("generator outside " + ctx->describe());
        rows.push_back(blade_coords(g));
    }
    RatMatrix basis = rational_hnf(rows, cols);
    const int passes = static_cast<int>(dim) + 4;
    bool stable = false;
    for (int pass = 0; pass < passes && !stable; ++pass) {
        std::vector<CliffordNumber> elems;
        for (const auto& r : basis) elems.emplace_back(ctx, r);
        RatMatrix next = basis;
        for (const auto& a : elems) {
            for (const auto& b : elems) next.push_back(blade_coords(a * b));
        }
        next = rational_hnf(next, cols);
        stable = (next == basis);
        basis = std::move(next);
    }
    if (!stable) throw NotAnOrder(name + ": module closure does not stabilise (generators not integral)");
    if (basis.size() != dim) {
        throw NotAnOrder(name + ": closure has rank " + std::to_string(basis.size()) + ", expected " +
                         std::to_string(dim));
    }

    auto data = std::make_shared<Order::Data>();
    data->name = name;
    data->ctx = ctx;
    data->generators = gens;
    data->flag = flag;
    for (const auto& r : basis) data->zbasis.emplace_back(ctx, r);
    auto inv = invert(basis);
    if (!inv) throw NotAnOrder(name + ": singular basis");
    data->inverse = std::move(*inv);

    for (const auto& b : data->zbasis) {
        if (!all_integer(row_times(blade_coords(reversal(b)), data->inverse))) {
            throw NotStarClosed(name + ": reversal of " + b.to_string() + " leaves the order");
        }
    }

    data->enumerator = std::make_shared<EllipsoidEnumerator>(gram_of(data->zbasis, false));

    // Vec(O): integer combinations whose grade >= 2 part vanishes.
    std::vector<std::size_t> high;
    for (std::size_t s = 0; s < dim; ++s) {
        if (blade_grade(static_cast<Blade>(s)) >= 2) high.push_back(s);
    }
    ZMatrix kernel = integer_kernel(basis, high);
    RatMatrix vec_rows;
    for (const auto& k : kernel) {
        RatVec v(dim);
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (k[i] == 0) continue;
            Rational c{mpq_class(k[i])};
            for (std::size_t s = 0; s < dim; ++s) {
                if (!basis[i][s].is_zero()) v[s] += c * basis[i][s];
            }
        }
        RatVec coords;
        CliffordNumber x(ctx, v);
        coords = x.vector_coords();
        vec_rows.push_back(std::move(coords));
    }
    const std::size_t n = static_cast<std::size_t>(ctx->generators()) + 1;
    std::vector<std::size_t> reversed(n);
    for (std::size_t i = 0; i < n; ++i) reversed[i] = n - 1 - i;
    RatMatrix vec_basis = rational_hnf(vec_rows, reversed);
    std::reverse(vec_basis.begin(), vec_basis.end());
    std::vector<CliffordNumber> vb;
    for (const auto& r : vec_basis) vb.push_back(CliffordNumber::vector(ctx, r));
    if (vb.size() != n) throw NotAnOrder(name + ": Vec lattice is not of full rank");
    data->vec = VecLattice(ctx, std::move(vb));

    Order order;
    order.data_ = data;

    std::vector<std::pair<IntVec, CliffordNumber>> found;
    data->enumerator->run(RatVec(dim), Rational(1), [&](const IntVec& z, const Rational& value) {
        if (value == Rational(1)) {
            CliffordNumber x = order.combine(z);
            auto nrm = reduced_norm(x);
            if (nrm && *nrm == Rational(1) && clifford_group_test(x)) found.emplace_back(z, std::move(x));
        }
        return true;
    });
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& f : found) data->units.push_back(std::move(f.second));
    return order;
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"Z",          "Z_i",          "Z_omega",      "Z_sqrt_m5",
                                                "Z_sqrt_m11", "hurwitz_O3",   "O4",           "O5_2",
                                                "B_m1m1m3_1", "B_m1m1m3_2",   "B_m1m1m3_3"};
    return names;
}

namespace {

CliffordNumber blade(const ContextPtr& ctx, Blade s, Rational c = Rational(1)) {
    return CliffordNumber::blade(ctx, s, c);
}

Order build_catalog(const std::string& name) {
    const Rational half(1, 2);
    if (name == "Z") {
        return order_from_generators(AlgebraContext::make({}), {}, name, EuclideanFlag::norm_euclidean);
    }
    if (name == "Z_i") {
        auto ctx = AlgebraContext::make({1});
        return order_from_generators(ctx, {blade(ctx, 1)}, name, EuclideanFlag::norm_euclidean);
    }
    if (name == "Z_omega") {
        auto ctx = AlgebraContext::make({3});
        return order_from_generators(ctx, {(blade(ctx, 0) + blade(ctx, 1)) * half}, name,
                                     EuclideanFlag::norm_euclidean);
    }
    if (name == "Z_sqrt_m5") {
        auto ctx = AlgebraContext::make({5});
        return order_from_generators(ctx, {blade(ctx, 1)}, name, EuclideanFlag::not_euclidean);
    }
    if (name == "Z_sqrt_m11") {
        auto ctx = AlgebraContext::make({11});
        return order_from_generators(ctx, {blade(ctx, 1)}, name, EuclideanFlag::not_euclidean);
    }
    if (name == "hurwitz_O3") {
        auto ctx = AlgebraContext::make({1, 1});
        auto h = (blade(ctx, 0) + blade(ctx, 1) + blade(ctx, 2) + blade(ctx, 3)) * half;
        return order_from_generators(ctx, {blade(ctx, 1), blade(ctx, 2), h}, name, EuclideanFlag::euclidean);
    }
    if (name == "O4") {
        auto ctx = AlgebraContext::make({1, 1, 1});
        auto h = (blade(ctx, 0) + blade(ctx, 1) + blade(ctx, 2) + blade(ctx, 4)) * half;
        return order_from_generators(ctx, {blade(ctx, 1), blade(ctx, 2), blade(ctx, 4), h}, name,
                                     EuclideanFlag::euclidean);
    }
    if (name == "O5_2") {
        auto ctx = AlgebraContext::make({1, 1, 1, 1});
        auto h = (blade(ctx, 0) + blade(ctx, 1) + blade(ctx, 4) + blade(ctx, 8)) * half;
        return order_from_generators(ctx, {blade(ctx, 1), blade(ctx, 2), blade(ctx, 4), blade(ctx, 8), h}, name,
                                     EuclideanFlag::euclidean);
    }
    if (name == "B_m1m1m3_1" || name == "B_m1m1m3_2" || name == "B_m1m1m3_3") {
        auto ctx = AlgebraContext::make({1, 1, 3});
        std::vector<CliffordNumber> gens{blade(ctx, 1), blade(ctx, 2), blade(ctx, 4)};
        const int j = name.back() - '0';
        if (j == 3) {
            gens.push_back((blade(ctx, 0) + blade(ctx, 4)) * half);
        } else {
            Blade ej = Blade{1} << (j - 1);
            gens.push_back((blade(ctx, ej) + blade(ctx, ej | 4)) * half);
        }
        return order_from_generators(ctx, gens, name, EuclideanFlag::euclidean);
    }
    throw UnknownOrder("no catalog order named '" + name + "'");
}

}  // namespace

Order catalog(const std::string& name) {
    static std::mutex mutex;
    static std::map<std::string, Order> cache;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(name);
        if (it != cache.end()) return it->second;
    }
    Order order = build_catalog(name);
    std::lock_guard lock(mutex);
    return cache.emplace(name, order).first->second;
}

CliffordNumber nearest_vec(const Order& order, const CliffordNumber& x) {
    if (!x.is_vector()) throw PreconditionError("nearest_vec needs a Clifford vector, got " + x.to_string());
    return order.vec().nearest(x);
}

Division euclid_divide(const Order& order, const CliffordNumber& x, const CliffordNumber& y) {
    auto nx = reduced_norm(x);
    if (!nx || nx->sign() <= 0) throw PreconditionError("divisor " + x.to_string() + " has no positive norm");
    CliffordNumber ratio = *try_inverse(x) * y;
    if (!ratio.is_vector()) throw PreconditionError("x^-1 y is not a Clifford vector: " + ratio.to_string());
    CliffordNumber q = order.vec().nearest(ratio);
    CliffordNumber r = y - x * q;
    auto nr = reduced_norm(r);
    if (!nr || *nr >= *nx) {
        throw DivisionFailed("no Euclidean step for " + y.to_string() + " / " + x.to_string() + " in " +
                             order.name() + ": N(r) = " + (nr ? nr->to_compact_string() : "?") +
                             " >= N(x) = " + nx->to_compact_string());
    }
    return {std::move(q), std::move(r)};
}

std::string CoveringReport::verdict() const {
    if (certifies_euclidean()) return "norm-euclidean";
    if (refutes_euclidean()) return "not norm-euclidean";
    return "undecided";
}

CoveringReport covering_radius_report(const Order& order, int resolution) {
    if (resolution < 1) throw PreconditionError("resolution must be at least 1");
    const auto& vec = order.vec();
    const std::size_t n = vec.rank();
    CoveringReport rep;
    rep.resolution = resolution;
    const Rational step(1, resolution);

    IntVec k(n, 0);
    RatVec center(n);
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) center[i] = Rational(k[i]) * step;
        Rational d;
        vec.enumerator().closest(center, &d);
        if (d > rep.lower_sq) rep.lower_sq = d;
        std::size_t i = 0;
        while (i < n && ++k[i] == resolution) k[i++] = 0;
        if (i == n) break;
    }

    const Rational half_step = step * Rational(1, 2);
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << n); ++signs) {
        RatVec y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = ((signs >> i) & 1U) ? -half_step : half_step;
        Rational v = quadratic_value(vec.gram(), y);
        if (v > rep.slack_sq) rep.slack_sq = v;
    }

    Rational lo, hi, slo, shi;
    sqrt_bounds(rep.lower_sq, lo, hi);
    sqrt_bounds(rep.slack_sq, slo, shi);
    rep.lower = lo;
    rep.upper = hi + shi;
    return rep;
}

}  // namespace ford
