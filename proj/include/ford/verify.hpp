#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ford/document.hpp"

namespace ford {

/// The sphere of smallest curvature tangent at t, searched with curvature
/// bounds 2, 4, 8, ... up to max_curvature.
std::optional<FordSphere> find_sphere(const Order& order, const CliffordNumber& t, const Rational& max_curvature);

const std::vector<std::string>& check_names();

struct VerifyOptions {
    std::vector<std::string> checks = check_names();
    int dirichlet_samples = 5;
    int dirichlet_count = 5;
    std::uint64_t seed = 1;
};

/// Runs the exact checks against a document and returns a report
/// {"checks": [...], "result": "pass" | "fail"}; each check carries a status
/// (pass, fail, skipped) and the first counterexample. Throws PreconditionError
/// for unknown check names.
Json verify_document(const PackingDocument& doc, const VerifyOptions& options = {});

}  // namespace ford
