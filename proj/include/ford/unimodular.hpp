#pragma once

#include <optional>

#include "ford/order.hpp"
#include "ford/vahlen.hpp"

namespace ford {

/// A row (mu, nu) of order elements, with a matrix of SL_2(O) whose bottom row
/// it is, when one is known.
struct UnimodularPair {
    CliffordNumber mu;
    CliffordNumber nu;
    std::optional<VahlenMatrix> witness;
};

/// Completes (mu, nu) to g in SL_2(O) with bottom row (mu, nu).
///
/// Runs the Euclidean descent (c, d) -> (c, d - c q) -> (-(d - c q), c) until
/// c = 0 and then needs d to be a unit. Commutative orders where the descent
/// stalls fall back to solving a nu - b mu = 1 over Z. Throws NotCompletable
/// when the row provably has no completion and CompletionUnknown when the
/// descent neither finishes nor fails within 64 steps.
VahlenMatrix unimodular_complete(const Order& order, const CliffordNumber& mu, const CliffordNumber& nu);

/// Same, returning nullopt instead of NotCompletable.
std::optional<VahlenMatrix> try_complete(const Order& order, const CliffordNumber& mu, const CliffordNumber& nu);

}  // namespace ford
