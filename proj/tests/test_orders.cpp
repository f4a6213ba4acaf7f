#include <doctest.h>

#include <set>

#include "ford/errors.hpp"
#include "ford/order.hpp"
#include "ford/unimodular.hpp"
#include "support.hpp"

using namespace ford;

namespace {

CliffordNumber bl(const ContextPtr& ctx, Blade s, Rational c = Rational(1)) { return CliffordNumber::blade(ctx, s, c); }

CliffordNumber vec(const ContextPtr& ctx, std::vector<Rational> xs) { return CliffordNumber::vector(ctx, xs); }

// Oracle: all x with blade coefficients in {-1, -1/2, 0, 1/2, 1} that lie in the
// order, have reduced norm 1 and pass the Clifford group test.
std::size_t brute_unit_count(const Order& o) {
    const auto& ctx = o.context();
    const std::size_t dim = ctx->dimension();
    std::vector<int> digits(dim, -2);
    std::size_t count = 0;
    for (;;) {
        std::vector<Rational> c(dim);
        Rational nf;
        for (std::size_t s = 0; s < dim; ++s) {
            c[s] = Rational(digits[s], 2);
            nf += Rational(ctx->blade_weight(static_cast<Blade>(s))) * c[s] * c[s];
        }
        if (nf == Rational(1)) {
            CliffordNumber x(ctx, c);
            auto n = reduced_norm(x);
            if (o.contains(x) && n && *n == Rational(1) && clifford_group_test(x)) ++count;
        }
        std::size_t i = 0;
        while (i < dim && digits[i] == 2) digits[i++] = -2;
        if (i == dim) break;
        ++digits[i];
    }
    return count;
}

}  // namespace

TEST_CASE("order closure") {
    auto c1 = AlgebraContext::make({1});
    auto zi = order_from_generators(c1, {bl(c1, 1)});
    CHECK(zi.zbasis().size() == 2);
    CHECK(zi.contains(bl(c1, 0) + bl(c1, 1) * Rational(3)));
    CHECK_FALSE(zi.contains(bl(c1, 1, Rational(1, 2))));
    CHECK_THROWS_AS(order_from_generators(c1, {bl(c1, 1, Rational(1, 2))}), NotAnOrder);
    auto c2 = AlgebraContext::make({1, 1});
    CHECK_THROWS_AS(order_from_generators(c2, {bl(c2, 1)}), NotAnOrder);  // rank 2 < 4
    auto h = catalog("hurwitz_O3");
    CHECK(h.zbasis().size() == 4);
    CHECK(catalog("O4").zbasis().size() == 8);
    CHECK(catalog("O5_2").zbasis().size() == 16);
    CHECK_THROWS_AS(catalog("nope"), UnknownOrder);
}

TEST_CASE("order closure properties for the whole catalog") {
    for (const auto& name : catalog_names()) {
        auto o = catalog(name);
        CAPTURE(name);
        CHECK(o.contains(CliffordNumber(o.context(), 1)));
        for (const auto& a : o.zbasis()) {
            CHECK(o.contains(reversal(a)));
            for (const auto& b : o.zbasis()) CHECK(o.contains(a * b));
        }
        for (const auto& g : o.generators()) CHECK(o.contains(g));
        for (const auto& v : o.vec().basis()) {
            CHECK(v.is_vector());
            CHECK(o.contains(v));
        }
    }
}

TEST_CASE("catalog bases") {
    auto zi = catalog("Z_i");
    CHECK(zi.flag() == EuclideanFlag::norm_euclidean);
    auto c1 = zi.context();
    CHECK(zi.vec().basis() == std::vector<CliffordNumber>{bl(c1, 0), bl(c1, 1)});
    CHECK(zi.vec().gram() == RatMatrix{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});

    auto zw = catalog("Z_omega");
    auto c3 = zw.context();
    CHECK(zw.vec().basis() == std::vector<CliffordNumber>{bl(c3, 0), (bl(c3, 0) + bl(c3, 1)) * Rational(1, 2)});
    auto omega = (bl(c3, 1) - bl(c3, 0)) * Rational(1, 2);
    CHECK(omega * omega + omega + CliffordNumber(c3, 1) == CliffordNumber(c3));
    CHECK(zw.contains(omega));

    CHECK(catalog("Z_sqrt_m5").flag() == EuclideanFlag::not_euclidean);

    // The three B orders coincide.
    auto b1 = catalog("B_m1m1m3_1");
    for (const char* other : {"B_m1m1m3_2", "B_m1m1m3_3"}) {
        auto b = catalog(other);
        for (const auto& x : b.zbasis()) CHECK(b1.contains(x));
        for (const auto& x : b1.zbasis()) CHECK(b.contains(x));
    }
}

TEST_CASE("vector lattices") {
    auto h = catalog("hurwitz_O3");
    CHECK(h.vec().rank() == 3);
    auto c2 = h.context();
    for (Blade s : {0u, 1u, 2u}) CHECK(h.vec().contains(bl(c2, s)));
    CHECK_FALSE(h.vec().contains((bl(c2, 1) + bl(c2, 2)) * Rational(1, 2)));

    // Vec(O4) is a D4 lattice: minimal norm 1, 24 minimal vectors.
    auto o4 = catalog("O4");
    CHECK(o4.vec().rank() == 4);
    std::size_t minimal = 0;
    o4.vec().enumerator().run(RatVec(4), Rational(1), [&](const IntVec& z, const Rational& v) {
        bool zero = std::all_of(z.begin(), z.end(), [](std::int64_t x) { return x == 0; });
        if (!zero) {
            CHECK(v == Rational(1));
            ++minimal;
        }
        return true;
    });
    CHECK(minimal == 24);
}

TEST_CASE("units") {
    auto zi = catalog("Z_i");
    auto c1 = zi.context();
    std::set<std::string> got;
    for (const auto& u : zi.units()) got.insert(u.to_string());
    CHECK(got == std::set<std::string>{"1", "-1", "e1", "-e1"});
    CHECK(catalog("Z_sqrt_m5").units().size() == 2);
    CHECK(catalog("Z_sqrt_m11").units().size() == 2);
    CHECK(catalog("Z_omega").units().size() == 6);
    CHECK(catalog("Z").units().size() == 2);
    CHECK(catalog("hurwitz_O3").units().size() == 24);
    for (const char* name : {"hurwitz_O3", "O4", "B_m1m1m3_1"}) {
        auto o = catalog(name);
        CAPTURE(name);
        CHECK(o.units().size() == brute_unit_count(o));
        std::set<std::string> all;
        for (const auto& u : o.units()) all.insert(u.to_string());
        for (const auto& u : o.units()) {
            CHECK(*reduced_norm(u) == Rational(1));
            CHECK(all.count(try_inverse(u)->to_string()) == 1);
            for (const auto& v : o.units()) CHECK(all.count((u * v).to_string()) == 1);
        }
    }
    CHECK(catalog("O4").units().size() == 192);
    CHECK(catalog("B_m1m1m3_1").units().size() == 24);
}

TEST_CASE("nearest lattice vector") {
    auto zi = catalog("Z_i");
    auto c1 = zi.context();
    CHECK(nearest_vec(zi, vec(c1, {Rational(3, 2), Rational(1, 2)})) == bl(c1, 0));
    auto z = catalog("Z");
    auto c0 = z.context();
    CHECK(nearest_vec(z, CliffordNumber(c0, Rational(2, 5))) == CliffordNumber(c0, 0));
    CHECK(nearest_vec(z, CliffordNumber(c0, Rational(5, 2))) == CliffordNumber(c0, 2));
    CHECK(nearest_vec(z, CliffordNumber(c0, Rational(-5, 2))) == CliffordNumber(c0, -3));

    for (const auto& name : catalog_names()) {
        auto o = catalog(name);
        const auto& ctx = o.context();
        CAPTURE(name);
        for (int i = 0; i < 20; ++i) {
            auto v = testsupport::random_lattice_vector(o);
            CHECK(nearest_vec(o, v) == v);
        }
        // Brute force over a coordinate box around the rounded point.
        const std::size_t n = o.vec().rank();
        for (int i = 0; i < (n <= 3 ? 200 : 20); ++i) {
            auto x = testsupport::rand_vector(ctx);
            auto got = nearest_vec(o, x);
            Rational best = vector_norm2(x - got);
            auto c = o.vec().coordinates(x);
            IntVec base(n);
            for (std::size_t k = 0; k < n; ++k) base[k] = c[k].floor().get_si();
            IntVec off(n, -2);
            for (;;) {
                IntVec z(n);
                for (std::size_t k = 0; k < n; ++k) z[k] = base[k] + off[k];
                CHECK(vector_norm2(x - o.vec().combine(z)) >= best);
                std::size_t k = 0;
                while (k < n && off[k] == 3) off[k++] = -2;
                if (k == n) break;
                ++off[k];
            }
        }
    }
}

TEST_CASE("euclidean division") {
    auto z = catalog("Z");
    auto c0 = z.context();
    auto d = euclid_divide(z, CliffordNumber(c0, 2), CliffordNumber(c0, 5));
    CHECK(d.q == CliffordNumber(c0, 2));
    CHECK(d.r == CliffordNumber(c0, 1));

    auto zi = catalog("Z_i");
    auto c1 = zi.context();
    auto g = euclid_divide(zi, CliffordNumber(c1, 2), bl(c1, 0, 3) + bl(c1, 1));
    CHECK(g.q == CliffordNumber(c1, 1));
    CHECK(g.r == bl(c1, 0) + bl(c1, 1));
    CHECK(*reduced_norm(g.r) == Rational(2));

    auto z5 = catalog("Z_sqrt_m5");
    auto c5 = z5.context();
    CHECK_THROWS_AS(euclid_divide(z5, CliffordNumber(c5, 2), bl(c5, 0) + bl(c5, 1)), DivisionFailed);

    auto h = catalog("hurwitz_O3");
    CHECK_THROWS_AS(euclid_divide(h, bl(h.context(), 1), bl(h.context(), 1) * bl(h.context(), 3) + bl(h.context(), 0)),
                    PreconditionError);

    for (const auto& name : catalog_names()) {
        auto o = catalog(name);
        if (!o.flagged_euclidean()) continue;
        CAPTURE(name);
        int done = 0;
        for (int attempt = 0; attempt < 2000 && done < 1000; ++attempt) {
            CliffordNumber x = testsupport::random_lattice_vector(o, 2);
            if (testsupport::rand_int(0, 1)) x = x * testsupport::random_lattice_vector(o, 2);
            auto nx = reduced_norm(x);
            if (!nx || nx->is_zero()) continue;
            // x^-1 t x' is a vector for any vector t and Clifford group element x.
            auto y = testsupport::random_lattice_vector(o, 6) * parity(x);
            REQUIRE(o.contains(y));
            auto dv = euclid_divide(o, x, y);
            CHECK(y == x * dv.q + dv.r);
            CHECK(o.vec().contains(dv.q));
            CHECK(*reduced_norm(dv.r) < *nx);
            ++done;
        }
        CHECK(done == 1000);
    }
}

TEST_CASE("covering radius") {
    auto zi = covering_radius_report(catalog("Z_i"), 4);
    CHECK(zi.lower_sq == Rational(1, 2));
    CHECK(zi.certifies_euclidean());
    auto z = covering_radius_report(catalog("Z"), 2);
    CHECK(z.lower_sq == Rational(1, 4));
    auto z5 = covering_radius_report(catalog("Z_sqrt_m5"), 2);
    CHECK(z5.lower_sq == Rational(3, 2));
    CHECK(z5.refutes_euclidean());
    CHECK(z5.verdict() == "not norm-euclidean");
    CHECK(covering_radius_report(catalog("Z_omega"), 6).lower_sq == Rational(1, 3));
}

TEST_CASE("unimodular completion") {
    auto z = catalog("Z");
    auto c0 = z.context();
    auto g = unimodular_complete(z, CliffordNumber(c0, 2), CliffordNumber(c0, 5));
    CHECK(g.c == CliffordNumber(c0, 2));
    CHECK(g.d == CliffordNumber(c0, 5));
    CHECK(pseudo_det(g) == CliffordNumber(c0, 1));
    CHECK(g == VahlenMatrix{CliffordNumber(c0, 1), CliffordNumber(c0, 2), CliffordNumber(c0, 2), CliffordNumber(c0, 5)});
    CHECK_FALSE(try_complete(z, CliffordNumber(c0, 2), CliffordNumber(c0, 4)).has_value());
    CHECK_THROWS_AS(unimodular_complete(z, CliffordNumber(c0, 6), CliffordNumber(c0, 4)), NotCompletable);

    for (const auto& name : catalog_names()) {
        auto o = catalog(name);
        const auto& ctx = o.context();
        CAPTURE(name);
        auto id = unimodular_complete(o, CliffordNumber(ctx, 1), CliffordNumber(ctx));
        CHECK(vahlen_check(id, o));
        for (int i = 0; i < 100; ++i) {
            auto w = testsupport::random_word(o, 10);
            auto h = unimodular_complete(o, w.c, w.d);
            CHECK(h.c == w.c);
            CHECK(h.d == w.d);
            CHECK(pseudo_det(h) == CliffordNumber(ctx, 1));
            CHECK(vahlen_check(h, o));
        }
    }

    auto zi = catalog("Z_i");
    auto c1 = zi.context();
    auto gi = unimodular_complete(zi, bl(c1, 0) + bl(c1, 1), CliffordNumber(c1, 1));
    CHECK(gi.c == bl(c1, 0) + bl(c1, 1));
    CHECK(gi.d == CliffordNumber(c1, 1));
    CHECK(vahlen_check(gi, zi));

    // (2, 1 + sqrt-5) generates a non-principal ideal.
    auto z5 = catalog("Z_sqrt_m5");
    auto c5 = z5.context();
    CHECK_FALSE(try_complete(z5, CliffordNumber(c5, 2), bl(c5, 0) + bl(c5, 1)).has_value());
    CHECK_FALSE(try_complete(z5, CliffordNumber(c5, 3), bl(c5, 0) + bl(c5, 1)).has_value());
    // Oracle: (c, d) is unimodular when a d - b c = 1 has a solution with small a.
    int stalled = 0;
    for (std::int64_t c0x = -4; c0x <= 4; ++c0x) {
        for (std::int64_t c1x = 0; c1x <= 2; ++c1x) {
            for (std::int64_t d0x = -4; d0x <= 4; ++d0x) {
                for (std::int64_t d1x = -2; d1x <= 2; ++d1x) {
                    auto c = bl(c5, 0, Rational(c0x)) + bl(c5, 1, Rational(c1x));
                    auto d = bl(c5, 0, Rational(d0x)) + bl(c5, 1, Rational(d1x));
                    if (c.is_zero()) continue;
                    bool witness = false;
                    for (std::int64_t a0 = -8; a0 <= 8 && !witness; ++a0) {
                        for (std::int64_t a1 = -4; a1 <= 4 && !witness; ++a1) {
                            auto a = bl(c5, 0, Rational(a0)) + bl(c5, 1, Rational(a1));
                            witness = z5.contains((a * d - CliffordNumber(c5, 1)) * *try_inverse(c));
                        }
                    }
                    auto got = try_complete(z5, c, d);
                    if (witness) CHECK(got.has_value());
                    if (got) {
                        CHECK(got->c == c);
                        CHECK(got->d == d);
                        CHECK(vahlen_check(*got, z5));
                        try {
                            euclid_divide(z5, c, d);
                        } catch (const DivisionFailed&) {
                            ++stalled;
                        }
                    }
                }
            }
        }
    }
    CHECK(stalled > 0);
}
