#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ford/rational.hpp"

namespace testsupport {

/// Imaginary quadratic order Z[w], w = sqrt(-d) or, with half set (d = 3 mod 4),
/// w = (1 + sqrt(-d)) / 2. Elements are (a, b) = a + b w.
struct Quadratic {
    std::int64_t d;
    bool halved = false;
    bool half() const { return halved; }

    using El = std::pair<std::int64_t, std::int64_t>;

    El mul(El x, El y) const {
        auto [a, b] = x;
        auto [c, e] = y;
        if (!half()) return {a * c - d * b * e, a * e + b * c};
        // w^2 = w - (1 + d) / 4
        const std::int64_t k = (1 + d) / 4;
        return {a * c - k * b * e, a * e + b * c + b * e};
    }
    std::int64_t norm(El x) const {
        auto [a, b] = x;
        return half() ? a * a + a * b + (1 + d) / 4 * b * b : a * a + d * b * b;
    }
    El conj(El x) const { return half() ? El{x.first + x.second, -x.second} : El{x.first, -x.second}; }
    /// Coordinates of x in the basis 1, sqrt(-d).
    std::pair<ford::Rational, ford::Rational> coords(El x) const {
        if (!half()) return {ford::Rational(x.first), ford::Rational(x.second)};
        return {ford::Rational(x.first) + ford::Rational(x.second, 2), ford::Rational(x.second, 2)};
    }
    /// mu O + lambda O = O: the Z-span of mu, mu w, lambda, lambda w has index 1.
    bool unit_ideal(El mu, El lambda) const {
        const El w{0, 1};
        std::vector<El> gens{mu, mul(mu, w), lambda, mul(lambda, w)};
        std::int64_t g = 0;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            for (std::size_t j = i + 1; j < gens.size(); ++j) {
                g = std::gcd(g, gens[i].first * gens[j].second - gens[i].second * gens[j].first);
            }
        }
        return g == 1;
    }
    /// Elements of norm at most bound.
    std::vector<El> ball(std::int64_t bound) const {
        std::vector<El> out;
        const auto r = static_cast<std::int64_t>(2 * std::sqrt(static_cast<double>(bound))) + 2;
        for (std::int64_t a = -r; a <= r; ++a) {
            for (std::int64_t b = -r; b <= r; ++b) {
                if (norm({a, b}) <= bound) out.emplace_back(a, b);
            }
        }
        return out;
    }

    using Point = std::pair<ford::Rational, ford::Rational>;

    /// Tangency point -> curvature for every sphere with tangency lambda / mu in
    /// [x0, x1] x [y0, y1] (coordinates in 1, sqrt(-d)), mu O + lambda O = O and
    /// 2 N(mu) <= max_curvature.
    std::map<Point, ford::Rational> ford_spheres(const ford::Rational& x0, const ford::Rational& x1,
                                                 const ford::Rational& y0, const ford::Rational& y1,
                                                 std::int64_t max_curvature) const {
        std::map<Point, ford::Rational> out;
        const std::int64_t reach = std::max({ford::abs(x0).floor().get_si(), ford::abs(x1).floor().get_si(),
                                             ford::abs(y0).floor().get_si(), ford::abs(y1).floor().get_si()}) + 1;
        for (El mu : ball(max_curvature / 2)) {
            const std::int64_t n = norm(mu);
            if (n == 0) continue;
            for (El lambda : ball(n * reach * reach * (1 + d))) {
                if (!unit_ideal(mu, lambda)) continue;
                auto [px, py] = coords(mul(lambda, conj(mu)));
                Point p{px / ford::Rational(n), py / ford::Rational(n)};
                if (p.first < x0 || p.first > x1 || p.second < y0 || p.second > y1) continue;
                ford::Rational kappa(2 * n);
                auto [it, fresh] = out.emplace(p, kappa);
                if (!fresh && it->second != kappa) throw std::logic_error("curvature depends on the representative");
            }
        }
        return out;
    }
};

}  // namespace testsupport
