#include "ford/document.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ford/errors.hpp"

namespace ford {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string as_string(const Json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

std::size_t as_index(const Json& j, const char* what) {
    if (!j.is_number_unsigned()) throw ParseError(std::string(what) + " must be a non-negative integer");
    return j.get<std::size_t>();
}

Json ratvec_to_json(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x.to_string());
    return out;
}

}  // namespace

Rational rational_from_json(const Json& j) {
    return Rational::parse(as_string(j, "rational"));
}

Json clifford_to_json(const CliffordNumber& x) {
    Json out = Json::array();
    for (Blade s : x.context()->canonical_blades()) {
        const Rational& c = x.coeff(s);
        if (c.is_zero()) continue;
        out.push_back(Json::array({blade_indices(s), c.to_string()}));
    }
    return out;
}

CliffordNumber clifford_from_json(const ContextPtr& ctx, const Json& j) {
    if (!j.is_array()) throw ParseError("Clifford number must be a list of [indices, coefficient] pairs");
    CliffordNumber x(ctx);
    const int m = ctx->generators();
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2 || !term[0].is_array()) {
            throw ParseError("bad Clifford term " + term.dump());
        }
        std::vector<int> idx;
        for (const auto& i : term[0]) {
            if (!i.is_number_integer()) throw ParseError("blade index must be an integer in " + term.dump());
            int k = i.get<int>();
            if (k < 1 || k > m) throw ParseError("blade index out of range in " + term.dump());
            if (!idx.empty() && k <= idx.back()) throw ParseError("blade indices must ascend in " + term.dump());
            idx.push_back(k);
        }
        Blade s = blade_from_indices(idx);
        if (!x.coeff(s).is_zero()) throw ParseError("repeated blade in " + j.dump());
        x += CliffordNumber::blade(ctx, s, rational_from_json(term[1]));
    }
    return x;
}

Json matrix_to_json(const VahlenMatrix& g) {
    return Json::array({clifford_to_json(g.a), clifford_to_json(g.b), clifford_to_json(g.c), clifford_to_json(g.d)});
}

VahlenMatrix matrix_from_json(const ContextPtr& ctx, const Json& j) {
    if (!j.is_array() || j.size() != 4) throw ParseError("matrix must be a list [a, b, c, d]");
    return {clifford_from_json(ctx, j[0]), clifford_from_json(ctx, j[1]), clifford_from_json(ctx, j[2]),
            clifford_from_json(ctx, j[3])};
}

OrderDescriptor describe(const Order& order) {
    return {order.name(), order.context()->ds(), order.generators(), order.zbasis(), order.flag()};
}

Order resolve(const OrderDescriptor& d) {
    auto ctx = AlgebraContext::make(d.ds);
    const auto& names = catalog_names();
    if (std::find(names.begin(), names.end(), d.name) != names.end()) {
        Order cat = catalog(d.name);
        if (cat.context() == ctx && cat.zbasis() == d.zbasis) return cat;
    }
    Order order = order_from_generators(ctx, d.generators, d.name, d.flag);
    if (order.zbasis() != d.zbasis) {
        throw ParseError("order '" + d.name + "': generators do not produce the recorded Z-basis");
    }
    return order;
}

PackingDocument make_document(const Packing& packing, Json parameters) {
    PackingDocument doc;
    doc.order = describe(packing.order);
    doc.window = packing.window;
    doc.max_curvature = packing.max_curvature;
    doc.method = packing.method;
    doc.parameters = std::move(parameters);
    doc.spheres = packing.spheres;
    doc.edges = packing.edges;
    doc.component_count = packing.component_count;
    doc.diagnostics.integrality = std::all_of(packing.spheres.begin(), packing.spheres.end(), [](const FordSphere& s) {
        return s.curvature.is_integer() && s.curvature.sign() >= 0;
    });
    if (packing.component_count) doc.diagnostics.disjointness = true;
    doc.warnings = packing.warnings;
    return doc;
}

Packing to_packing(const PackingDocument& doc) {
    Packing p;
    p.order = resolve(doc.order);
    p.window = doc.window;
    p.max_curvature = doc.max_curvature;
    p.method = doc.method;
    p.spheres = doc.spheres;
    p.edges = doc.edges;
    p.component_count = doc.component_count;
    p.warnings = doc.warnings;
    return p;
}

Json to_json(const PackingDocument& doc) {
    Json order;
    order["name"] = doc.order.name;
    order["ds"] = doc.order.ds;
    order["flag"] = to_string(doc.order.flag);
    order["generators"] = Json::array();
    for (const auto& g : doc.order.generators) order["generators"].push_back(clifford_to_json(g));
    order["zbasis"] = Json::array();
    for (const auto& b : doc.order.zbasis) order["zbasis"].push_back(clifford_to_json(b));

    Json window = Json::array();
    for (const auto& [lo, hi] : doc.window.bounds) window.push_back(Json::array({lo.to_string(), hi.to_string()}));

    Json spheres = Json::array();
    for (const auto& s : doc.spheres) {
        Json e;
        e["tangency"] = s.is_plane() ? Json(nullptr) : ratvec_to_json(s.tangency.point().vector_coords());
        e["curvature"] = s.curvature.to_string();
        e["witness"] = s.witness ? matrix_to_json(*s.witness) : Json(nullptr);
        spheres.push_back(std::move(e));
    }

    Json edges = Json::array();
    for (const auto& [i, j] : doc.edges) edges.push_back(Json::array({i, j}));

    auto opt_bool = [](const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); };

    Json out;
    out["order"] = std::move(order);
    out["window"] = std::move(window);
    out["max_curvature"] = doc.max_curvature.to_string();
    out["method"] = doc.method;
    out["parameters"] = doc.parameters;
    out["spheres"] = std::move(spheres);
    out["edges"] = std::move(edges);
    out["component_count"] = doc.component_count ? Json(*doc.component_count) : Json(nullptr);
    out["diagnostics"] = {{"integrality", opt_bool(doc.diagnostics.integrality)},
                          {"disjointness", opt_bool(doc.diagnostics.disjointness)}};
    out["warnings"] = doc.warnings;
    return out;
}

PackingDocument document_from_json(const Json& j, bool require_sorted) {
    PackingDocument doc;

    const Json& order = field(j, "order");
    doc.order.name = as_string(field(order, "name"), "order name");
    const Json& ds = field(order, "ds");
    if (!ds.is_array()) throw ParseError("order ds must be a list");
    for (const auto& d : ds) {
        if (!d.is_number_integer() || d.get<std::int64_t>() <= 0) throw ParseError("ds entries must be positive integers");
        doc.order.ds.push_back(d.get<std::int64_t>());
    }
    doc.order.flag = parse_euclidean_flag(as_string(field(order, "flag"), "order flag"));
    auto ctx = AlgebraContext::make(doc.order.ds);
    for (const auto& g : field(order, "generators")) doc.order.generators.push_back(clifford_from_json(ctx, g));
    for (const auto& b : field(order, "zbasis")) doc.order.zbasis.push_back(clifford_from_json(ctx, b));
    if (doc.order.zbasis.size() != ctx->dimension()) throw ParseError("zbasis must have one element per blade");

    const std::size_t n = doc.order.ds.size() + 1;
    const Json& window = field(j, "window");
    if (!window.is_array() || window.size() != n) throw ParseError("window must have one [lo, hi] per coordinate");
    for (const auto& b : window) {
        if (!b.is_array() || b.size() != 2) throw ParseError("window bound must be [lo, hi]");
        Rational lo = rational_from_json(b[0]);
        Rational hi = rational_from_json(b[1]);
        if (hi < lo) throw ParseError("empty window interval " + b.dump());
        doc.window.bounds.emplace_back(std::move(lo), std::move(hi));
    }

    doc.max_curvature = rational_from_json(field(j, "max_curvature"));
    doc.method = as_string(field(j, "method"), "method");
    doc.parameters = j.value("parameters", Json::object());
    if (!doc.parameters.is_object()) throw ParseError("parameters must be an object");

    const Json& spheres = field(j, "spheres");
    if (!spheres.is_array()) throw ParseError("spheres must be a list");
    for (const auto& e : spheres) {
        FordSphere s;
        const Json& t = field(e, "tangency");
        if (!t.is_null()) {
            if (!t.is_array() || t.size() != n) throw ParseError("tangency must have " + std::to_string(n) + " coordinates");
            std::vector<Rational> coords;
            for (const auto& c : t) coords.push_back(rational_from_json(c));
            s.tangency = BoundaryPoint(CliffordNumber::vector(ctx, coords));
        }
        s.curvature = rational_from_json(field(e, "curvature"));
        if (s.is_plane() != s.curvature.is_zero()) throw ParseError("only the plane has curvature 0");
        if (s.curvature.sign() < 0) throw ParseError("negative curvature " + s.curvature.to_string());
        const Json& w = e.contains("witness") ? e.at("witness") : Json(nullptr);
        if (!w.is_null()) s.witness = matrix_from_json(ctx, w);
        if (require_sorted && !doc.spheres.empty() && !sphere_less(doc.spheres.back(), s)) {
            throw ParseError("spheres are not in canonical order at index " + std::to_string(doc.spheres.size()));
        }
        doc.spheres.push_back(std::move(s));
    }

    const Json& edges = field(j, "edges");
    if (!edges.is_array()) throw ParseError("edges must be a list");
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2) throw ParseError("edge must be [i, j]");
        std::size_t a = as_index(e[0], "edge index");
        std::size_t b = as_index(e[1], "edge index");
        if (a >= b || b >= doc.spheres.size()) throw ParseError("invalid edge " + e.dump());
        if (!doc.edges.empty() && !(doc.edges.back() < std::pair{a, b})) throw ParseError("edges are not sorted");
        doc.edges.emplace_back(a, b);
    }

    const Json& cc = j.contains("component_count") ? j.at("component_count") : Json(nullptr);
    if (!cc.is_null()) doc.component_count = as_index(cc, "component_count");

    if (j.contains("diagnostics")) {
        const Json& d = j.at("diagnostics");
        auto opt = [&](const char* key) -> std::optional<bool> {
            if (!d.contains(key) || d.at(key).is_null()) return std::nullopt;
            if (!d.at(key).is_boolean()) throw ParseError(std::string("diagnostic ") + key + " must be a boolean");
            return d.at(key).get<bool>();
        };
        doc.diagnostics.integrality = opt("integrality");
        doc.diagnostics.disjointness = opt("disjointness");
    }
    if (j.contains("warnings")) {
        for (const auto& w : j.at("warnings")) doc.warnings.push_back(as_string(w, "warning"));
    }
    return doc;
}

std::string write_document(const PackingDocument& doc) {
    return to_json(doc).dump(2) + "\n";
}

PackingDocument read_document(const std::string& text, bool require_sorted) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        return document_from_json(j, require_sorted);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

PackingDocument load_document(const std::string& path, bool require_sorted) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return read_document(ss.str(), require_sorted);
}

void save_document(const PackingDocument& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << write_document(doc);
    if (!out) throw Error("write failed for " + path);
}

Order parse_order_config(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string name = "custom";
    std::optional<std::vector<std::int64_t>> ds;
    EuclideanFlag flag = EuclideanFlag::unknown;
    std::vector<Json> gens;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string rest;
        std::getline(ls, rest);
        auto where = " on line " + std::to_string(lineno);
        if (key == "name") {
            std::istringstream rs(rest);
            if (!(rs >> name)) throw ParseError("empty name" + where);
        } else if (key == "ds") {
            ds.emplace();
            std::istringstream rs(rest);
            std::string tok;
            while (rs >> tok) {
                for (char& c : tok) {
                    if (c == ',' || c == '(' || c == ')') c = ' ';
                }
                std::istringstream ts(tok);
                std::int64_t d;
                while (ts >> d) {
                    if (d <= 0) throw ParseError("ds entries must be positive" + where);
                    ds->push_back(d);
                }
                if (!ts.eof()) throw ParseError("bad ds entry '" + tok + "'" + where);
            }
        } else if (key == "flag") {
            std::istringstream rs(rest);
            std::string f;
            rs >> f;
            try {
                flag = parse_euclidean_flag(f);
            } catch (const Error& e) {
                throw ParseError(e.what() + where);
            }
        } else if (key == "gen") {
            try {
                gens.push_back(Json::parse(rest));
            } catch (const Json::parse_error&) {
                throw ParseError("generator is not valid JSON" + where);
            }
        } else {
            throw ParseError("unknown key '" + key + "'" + where);
        }
    }
    if (!ds) throw ParseError("order config needs a ds line");
    auto ctx = AlgebraContext::make(*ds);
    std::vector<CliffordNumber> generators;
    for (const auto& g : gens) generators.push_back(clifford_from_json(ctx, g));
    return order_from_generators(ctx, generators, name, flag);
}

Order load_order_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_order_config(ss.str());
}

}  // namespace ford
