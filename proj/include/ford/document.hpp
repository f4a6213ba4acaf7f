#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ford/packing.hpp"

namespace ford {

using Json = nlohmann::json;

/// [[indices], "p/q"] pairs over the nonzero blades, in canonical blade order.
Json clifford_to_json(const CliffordNumber& x);
CliffordNumber clifford_from_json(const ContextPtr& ctx, const Json& j);
/// [a, b, c, d], row-major.
Json matrix_to_json(const VahlenMatrix& g);
VahlenMatrix matrix_from_json(const ContextPtr& ctx, const Json& j);
Rational rational_from_json(const Json& j);

struct OrderDescriptor {
    std::string name;
    std::vector<std::int64_t> ds;
    std::vector<CliffordNumber> generators;
    std::vector<CliffordNumber> zbasis;
    EuclideanFlag flag = EuclideanFlag::unknown;

    friend bool operator==(const OrderDescriptor&, const OrderDescriptor&) = default;
};

OrderDescriptor describe(const Order& order);
/// The catalog order of that name when its Z-basis matches, else the closure
/// of the generators. Throws ParseError when the Z-basis does not match.
Order resolve(const OrderDescriptor& d);

struct Diagnostics {
    std::optional<bool> integrality;
    std::optional<bool> disjointness;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct PackingDocument {
    OrderDescriptor order;
    Window window;
    Rational max_curvature;
    std::string method;
    Json parameters = Json::object();
    std::vector<FordSphere> spheres;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::optional<std::size_t> component_count;
    Diagnostics diagnostics;
    std::vector<std::string> warnings;

    friend bool operator==(const PackingDocument&, const PackingDocument&) = default;
};

/// Diagnostics are filled from the packing: integrality always, disjointness
/// when tangency_graph has run.
PackingDocument make_document(const Packing& packing, Json parameters = Json::object());
Packing to_packing(const PackingDocument& doc);

Json to_json(const PackingDocument& doc);
/// Throws ParseError on schema violations. Without require_sorted the sphere
/// order is taken as given, so that damaged documents can still be verified.
PackingDocument document_from_json(const Json& j, bool require_sorted = true);

std::string write_document(const PackingDocument& doc);
PackingDocument read_document(const std::string& text, bool require_sorted = true);
PackingDocument load_document(const std::string& path, bool require_sorted = true);
void save_document(const PackingDocument& doc, const std::string& path);

/// Order config text: "name", "ds", "flag" and "gen" lines, '#' comments;
/// each gen line holds one number in the JSON serialization.
Order parse_order_config(const std::string& text);
Order load_order_file(const std::string& path);

}  // namespace ford
