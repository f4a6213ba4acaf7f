#include "ford/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ford/errors.hpp"

namespace ford {

namespace {

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

void sub_multiple(std::vector<mpz_class>& row, const std::vector<mpz_class>& pivot, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (pivot[k] != 0) row[k] -= q * pivot[k];
    }
}

mpz_class common_denominator(const RatMatrix& rows, const std::vector<std::size_t>& columns) {
    mpz_class d = 1;
    for (const auto& r : rows) {
        for (std::size_t c : columns) {
            if (!r[c].is_integer()) d = lcm(d, r[c].denominator());
        }
    }
    return d;
}

}  // namespace

std::size_t hnf_in_place(ZMatrix& rows, const std::vector<std::size_t>& pivot_columns) {
    std::size_t rank = 0;
    for (std::size_t col : pivot_columns) {
        if (rank == rows.size()) break;
        bool found = false;
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t r = rank; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                if (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col])) best = r;
            }
            if (best == rows.size()) break;
            found = true;
            std::swap(rows[rank], rows[best]);
            bool remaining = false;
            for (std::size_t r = rank + 1; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                sub_multiple(rows[r], rows[rank], floor_div(rows[r][col], rows[rank][col]));
                if (rows[r][col] != 0) remaining = true;
            }
            if (!remaining) break;
        }
        if (!found) continue;
        if (rows[rank][col] < 0) {
            for (auto& x : rows[rank]) x = -x;
        }
        for (std::size_t r = 0; r < rank; ++r) {
            sub_multiple(rows[r], rows[rank], floor_div(rows[r][col], rows[rank][col]));
        }
        ++rank;
    }
    return rank;
}

RatMatrix rational_hnf(const RatMatrix& rows, const std::vector<std::size_t>& pivot_columns) {
    if (rows.empty()) return {};
    const std::size_t n = rows.front().size();
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    mpz_class d = common_denominator(rows, all);
    ZMatrix z;
    z.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<mpz_class> zr(n);
        for (std::size_t c = 0; c < n; ++c) {
            mpq_class v = r[c].to_mpq() * d;
            zr[c] = v.get_num();
        }
        z.push_back(std::move(zr));
    }
    std::size_t rank = hnf_in_place(z, pivot_columns);
    RatMatrix out;
    for (std::size_t i = 0; i < rank; ++i) {
        RatVec v(n);
        for (std::size_t c = 0; c < n; ++c) v[c] = Rational(mpq_class(z[i][c], d));
        out.push_back(std::move(v));
    }
    return out;
}

RatMatrix rational_hnf(const RatMatrix& rows) {
    if (rows.empty()) return {};
    std::vector<std::size_t> cols(rows.front().size());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return rational_hnf(rows, cols);
}

ZMatrix integer_kernel(const RatMatrix& rows, const std::vector<std::size_t>& columns) {
    const std::size_t k = rows.size();
    const std::size_t p = columns.size();
    mpz_class d = common_denominator(rows, columns);
    ZMatrix z(k, std::vector<mpz_class>(p + k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t c = 0; c < p; ++c) {
            mpq_class v = rows[i][columns[c]].to_mpq() * d;
            z[i][c] = v.get_num();
        }
        z[i][p + i] = 1;
    }
    std::vector<std::size_t> pivots(p);
    std::iota(pivots.begin(), pivots.end(), std::size_t{0});
    std::size_t rank = hnf_in_place(z, pivots);
    ZMatrix out;
    for (std::size_t i = rank; i < k; ++i) out.emplace_back(z[i].begin() + p, z[i].end());
    // Canonical echelon form of the kernel itself.
    if (!out.empty()) {
        std::vector<std::size_t> cols(k);
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        out.resize(hnf_in_place(out, cols));
    }
    return out;
}

std::optional<RatMatrix> invert(const RatMatrix& m) {
    const std::size_t n = m.size();
    RatMatrix a = m;
    RatMatrix inv(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Rational(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rational s = Rational(1) / a[col][col];
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[col][k].is_zero()) a[col][k] *= s;
            if (!inv[col][k].is_zero()) inv[col][k] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Rational f = a[r][col];
            for (std::size_t k = 0; k < n; ++k) {
                if (!a[col][k].is_zero()) a[r][k] -= f * a[col][k];
                if (!inv[col][k].is_zero()) inv[r][k] -= f * inv[col][k];
            }
        }
    }
    return inv;
}

RatVec row_times(const RatVec& v, const RatMatrix& m) {
    RatVec out(m.empty() ? 0 : m.front().size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        for (std::size_t j = 0; j < out.size(); ++j) {
            if (!m[i][j].is_zero()) out[j] += v[i] * m[i][j];
        }
    }
    return out;
}

Rational quadratic_value(const RatMatrix& gram, const RatVec& y) {
    Rational total;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i].is_zero()) continue;
        Rational row = gram[i][i] * y[i];
        for (std::size_t j = i + 1; j < y.size(); ++j) {
            if (!y[j].is_zero() && !gram[i][j].is_zero()) row += Rational(2) * gram[i][j] * y[j];
        }
        total += row * y[i];
    }
    return total;
}

EllipsoidEnumerator::EllipsoidEnumerator(RatMatrix gram) : gram_(std::move(gram)) {
    const std::size_t n = gram_.size();
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q[i][j] = gram_[i][j].to_double();
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(q[i][i] > 0)) throw PreconditionError("gram matrix is not positive definite");
        for (std::size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
        }
    }
    q_.resize(n);
    mu_.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        q_[i] = q[i][i];
        for (std::size_t j = i + 1; j < n; ++j) mu_[i][j] = q[i][j];
    }
}

void EllipsoidEnumerator::run(const RatVec& center, const Rational& bound,
                              const std::function<bool(const IntVec&, const Rational&)>& visit) const {
    const std::size_t n = gram_.size();
    if (bound.sign() < 0) return;
    if (n == 0) {
        visit(IntVec{}, Rational(0));
        return;
    }
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = center[i].to_double();
    const double limit = bound.to_double() * (1 + 1e-9) + 1e-9;

    IntVec z(n);
    std::vector<double> y(n);
    RatVec diff(n);
    bool stop = false;

    std::function<void(std::size_t, double)> level = [&](std::size_t i, double remaining) {
        double shift = 0;
        for (std::size_t j = i + 1; j < n; ++j) shift += mu_[i][j] * y[j];
        double mid = c[i] - shift;
        double w = std::sqrt(std::max(remaining, 0.0) / q_[i]) * (1 + 1e-9) + 1e-9;
        auto lo = static_cast<std::int64_t>(std::ceil(mid - w));
        auto hi = static_cast<std::int64_t>(std::floor(mid + w));
        for (std::int64_t v = lo; v <= hi && !stop; ++v) {
            z[i] = v;
            y[i] = static_cast<double>(v) - c[i];
            double t = y[i] + shift;
            double rest = remaining - q_[i] * t * t;
            if (rest < -1e-9 * (1 + limit)) continue;
            if (i > 0) {
                level(i - 1, rest);
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) diff[k] = Rational(z[k]) - center[k];
            Rational value = quadratic_value(gram_, diff);
            if (value <= bound && !visit(z, value)) stop = true;
        }
    };
    level(n - 1, limit);
}

std::vector<IntVec> EllipsoidEnumerator::closest(const RatVec& center, Rational* distance) const {
    const std::size_t n = gram_.size();
    if (n == 0) {
        if (distance) *distance = Rational(0);
        return {IntVec{}};
    }
    // Nearest-plane rounding for an initial radius.
    IntVec z(n);
    std::vector<double> y(n);
    for (std::size_t k = n; k-- > 0;) {
        double shift = 0;
        for (std::size_t j = k + 1; j < n; ++j) shift += mu_[k][j] * y[j];
        double mid = center[k].to_double() - shift;
        z[k] = static_cast<std::int64_t>(std::llround(mid));
        y[k] = static_cast<double>(z[k]) - center[k].to_double();
    }
    RatVec diff(n);
    for (std::size_t k = 0; k < n; ++k) diff[k] = Rational(z[k]) - center[k];
    Rational best = quadratic_value(gram_, diff);
    std::vector<IntVec> winners;
    run(center, best, [&](const IntVec& v, const Rational& value) {
        int cmp = compare(value, best);
        if (cmp < 0) {
            best = value;
            winners.clear();
        }
        if (cmp <= 0) winners.push_back(v);
        return true;
    });
    std::sort(winners.begin(), winners.end());
    if (distance) *distance = best;
    return winners;
}

}  // namespace ford
