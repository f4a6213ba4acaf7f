#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ford/clifford.hpp"

namespace testsupport {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240917);
    return gen;
}

inline std::int64_t rand_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

inline ford::Rational rand_rational(std::int64_t span = 9, std::int64_t maxden = 6) {
    return ford::Rational(rand_int(-span, span), rand_int(1, maxden));
}

inline ford::CliffordNumber rand_clifford(const ford::ContextPtr& ctx, double density = 0.6) {
    std::vector<ford::Rational> c(ctx->dimension());
    std::bernoulli_distribution keep(density);
    for (auto& x : c) {
        if (keep(rng())) x = rand_rational();
    }
    return ford::CliffordNumber(ctx, std::move(c));
}

inline ford::CliffordNumber rand_vector(const ford::ContextPtr& ctx) {
    std::vector<ford::Rational> v;
    for (int j = 0; j <= ctx->generators(); ++j) v.push_back(rand_rational());
    return ford::CliffordNumber::vector(ctx, v);
}

inline ford::CliffordNumber rand_nonzero_vector(const ford::ContextPtr& ctx) {
    for (;;) {
        auto v = rand_vector(ctx);
        if (!v.is_zero()) return v;
    }
}

}  // namespace testsupport

#include "ford/order.hpp"
#include "ford/vahlen.hpp"

namespace testsupport {

/// Random word of length <= max_len in Y(+-b) (b a Vec basis vector), X(u), Z.
inline ford::VahlenMatrix random_word(const ford::Order& order, int max_len = 8) {
    using ford::VahlenMatrix;
    const auto& ctx = order.context();
    VahlenMatrix g = VahlenMatrix::identity(ctx);
    int len = static_cast<int>(rand_int(0, max_len));
    const auto& vb = order.vec().basis();
    const auto& us = order.units();
    for (int i = 0; i < len; ++i) {
        switch (rand_int(0, 2)) {
            case 0: {
                auto b = vb[static_cast<std::size_t>(rand_int(0, static_cast<std::int64_t>(vb.size()) - 1))];
                g = g * VahlenMatrix::translation(rand_int(0, 1) ? b : -b);
                break;
            }
            case 1:
                g = g * VahlenMatrix::dilation(us[static_cast<std::size_t>(rand_int(0, static_cast<std::int64_t>(us.size()) - 1))]);
                break;
            default:
                g = g * VahlenMatrix::inversion(ctx);
        }
    }
    return g;
}

/// Random element of Vec(O) with small coordinates.
inline ford::CliffordNumber random_lattice_vector(const ford::Order& order, std::int64_t span = 3) {
    ford::IntVec z;
    for (std::size_t i = 0; i < order.vec().rank(); ++i) z.push_back(rand_int(-span, span));
    return order.vec().combine(z);
}

}  // namespace testsupport
