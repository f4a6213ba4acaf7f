#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "ford/rational.hpp"

namespace ford {

using RatVec = std::vector<Rational>;
using RatMatrix = std::vector<RatVec>;
using IntVec = std::vector<std::int64_t>;
using ZMatrix = std::vector<std::vector<mpz_class>>;

/// Row Hermite normal form over Z, in place. Pivots are searched in the
/// given column order; entries above a pivot are reduced into [0, pivot).
/// Returns the rank; rows [0, rank) carry the pivots in the order found,
/// the remaining rows are zero on the pivot columns.
std::size_t hnf_in_place(ZMatrix& rows, const std::vector<std::size_t>& pivot_columns);

/// Echelon Z-basis of the module spanned by rational row vectors.
RatMatrix rational_hnf(const RatMatrix& rows, const std::vector<std::size_t>& pivot_columns);
RatMatrix rational_hnf(const RatMatrix& rows);

/// Z-basis of { c in Z^k : sum_i c_i rows_i = 0 on the listed columns }.
ZMatrix integer_kernel(const RatMatrix& rows, const std::vector<std::size_t>& columns);

/// Exact inverse of a square rational matrix; nullopt when singular.
std::optional<RatMatrix> invert(const RatMatrix& m);

/// Row vector times matrix.
RatVec row_times(const RatVec& v, const RatMatrix& m);

/// Q(z - c) = (z - c)^T G (z - c).
Rational quadratic_value(const RatMatrix& gram, const RatVec& point);

/// Visits every integer vector z with (z - c)^T G (z - c) <= bound, G positive
/// definite. Candidate pruning uses a floating Cholesky factor with widened
/// bounds; every visited point has been checked exactly. Visiting stops early
/// when the callback returns false.
class EllipsoidEnumerator {
public:
    explicit EllipsoidEnumerator(RatMatrix gram);

    std::size_t dimension() const { return gram_.size(); }
    const RatMatrix& gram() const { return gram_; }

    void run(const RatVec& center, const Rational& bound,
             const std::function<bool(const IntVec& z, const Rational& value)>& visit) const;

    /// All closest integer vectors to center, sorted lexicographically.
    std::vector<IntVec> closest(const RatVec& center, Rational* distance = nullptr) const;

private:
    RatMatrix gram_;
    std::vector<double> q_;                // diagonal of the Cholesky form
    std::vector<std::vector<double>> mu_;  // mu_[i][j], j > i
};

}  // namespace ford
