#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ford/document.hpp"
#include "ford/errors.hpp"
#include "ford/render.hpp"
#include "ford/verify.hpp"

using namespace ford;

namespace {

struct OrderFlags {
    std::string name;
    std::string file;

    void add(CLI::App* cmd) {
        auto* o = cmd->add_option("--order", name, "catalog order name");
        auto* f = cmd->add_option("--order-file", file, "order config file");
        o->excludes(f);
    }
    Order load() const {
        if (!file.empty()) return load_order_file(file);
        if (name.empty()) throw CLI::RequiredError("--order or --order-file");
        return catalog(name);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

CliffordNumber parse_point(const Order& order, const std::string& text) {
    std::vector<Rational> coords;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) coords.push_back(Rational::parse(part));
    if (coords.size() != static_cast<std::size_t>(order.context()->generators() + 1)) {
        throw ParseError("point needs " + std::to_string(order.context()->generators() + 1) + " coordinates");
    }
    return CliffordNumber::vector(order.context(), coords);
}

Json sphere_row(const FordSphere& s) {
    return Json{{"tangency", s.is_plane() ? Json("inf") : Json(s.tangency.point().to_string())},
                {"curvature", s.curvature.to_compact_string()}};
}

std::vector<std::string> sphere_keys(const Packing& p) {
    std::vector<std::string> keys;
    for (const auto& s : p.spheres) keys.push_back(s.tangency.to_string() + " @ " + s.curvature.to_compact_string());
    return keys;
}

struct Generate {
    OrderFlags order;
    std::string window;
    std::string max_curvature;
    std::string method = "orbit";
    std::string out;
    int depth_cap = OrbitOptions{}.depth_cap;
    std::string prune_margin = "1";
    std::string locality = "0";
    std::size_t state_cap = OrbitOptions{}.state_cap;
    std::string extra_generators;
    bool no_graph = false;
    bool verify_duplicates = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("generate", "build a Ford packing and write it as JSON");
        order.add(cmd);
        cmd->add_option("--window", window, "\"lo,hi;lo,hi;...\" (default: unit cube)");
        cmd->add_option("--max-curvature", max_curvature, "largest curvature kept")->required();
        cmd->add_option("--method", method)->check(CLI::IsMember({"orbit", "pairs", "both-verify"}));
        cmd->add_option("--out", out, "output path (default stdout)");
        cmd->add_option("--depth-cap", depth_cap);
        cmd->add_option("--prune-margin", prune_margin);
        cmd->add_option("--locality", locality, "0 selects a value from the covering radius");
        cmd->add_option("--state-cap", state_cap);
        cmd->add_option("--extra-generators", extra_generators, "JSON list of [a, b, c, d] matrices");
        cmd->add_flag("--no-graph", no_graph, "skip the tangency graph");
        cmd->add_flag("--verify-duplicates", verify_duplicates, "pairs: complete repeated tangencies too");
        cmd->callback([this] { run(); });
    }

    void run() {
        Order o = order.load();
        const std::size_t n = o.context()->generators() + 1;
        Window w = window.empty() ? Window::unit_cube(n) : Window::parse(window);
        Rational k = Rational::parse(max_curvature);

        OrbitOptions oo;
        oo.depth_cap = depth_cap;
        oo.prune_margin = Rational::parse(prune_margin);
        oo.locality = Rational::parse(locality);
        oo.state_cap = state_cap;
        if (!extra_generators.empty()) {
            Json j = Json::parse(read_file(extra_generators));
            if (!j.is_array()) throw ParseError("extra generators must be a JSON list");
            for (const auto& m : j) oo.extra_generators.push_back(matrix_from_json(o.context(), m));
        }
        PairsOptions po;
        po.verify_duplicates = verify_duplicates;

        Json params = Json::object();
        Packing p;
        if (method == "pairs") {
            p = generate_by_pairs(o, w, k, po);
            params["verify_duplicates"] = verify_duplicates;
        } else {
            p = generate_orbit(o, w, k, oo);
            params["depth_cap"] = depth_cap;
            params["prune_margin"] = oo.prune_margin.to_string();
            params["locality"] = oo.locality.is_zero() ? default_locality(o).to_string() : oo.locality.to_string();
            params["state_cap"] = state_cap;
            params["extra_generators"] = oo.extra_generators.size();
            params["states_explored"] = p.states_explored;
            if (method == "both-verify") {
                Packing q = generate_by_pairs(o, w, k, po);
                auto a = sphere_keys(p);
                auto b = sphere_keys(q);
                if (a != b) {
                    std::sort(a.begin(), a.end());
                    std::sort(b.begin(), b.end());
                    std::vector<std::string> only_orbit, only_pairs;
                    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_orbit));
                    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_pairs));
                    std::ostringstream msg;
                    msg << "generators disagree: orbit " << p.spheres.size() << " spheres, pairs " << q.spheres.size();
                    for (std::size_t i = 0; i < std::min<std::size_t>(only_orbit.size(), 5); ++i) {
                        msg << "\n  orbit only: " << only_orbit[i];
                    }
                    for (std::size_t i = 0; i < std::min<std::size_t>(only_pairs.size(), 5); ++i) {
                        msg << "\n  pairs only: " << only_pairs[i];
                    }
                    throw Error(msg.str());
                }
                p.method = "both-verify";
                params["pairs_spheres"] = q.spheres.size();
            }
        }
        if (!no_graph) tangency_graph(p);
        write_output(out, write_document(make_document(p, params)));
        std::cerr << p.spheres.size() << " spheres";
        if (p.component_count) std::cerr << ", " << p.edges.size() << " edges, " << *p.component_count << " components";
        std::cerr << "\n";
        for (const auto& warning : p.warnings) std::cerr << "warning: " << warning << "\n";
    }
};

struct Render {
    std::string in;
    std::string out;
    std::string axes;
    double scale = 400.0;
    double stroke = 0.75;
    bool no_plane = false;
    std::string slice = "0";

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("render", "draw the equators of a packing as SVG");
        cmd->add_option("--in", in)->required();
        cmd->add_option("--out", out, "output path (default stdout)");
        cmd->add_option("--axes", axes, "\"i,j\"; j may be h for a side view");
        cmd->add_option("--scale", scale, "pixels per unit");
        cmd->add_option("--stroke", stroke);
        cmd->add_flag("--no-plane", no_plane, "omit the window frame / base line");
        cmd->add_option("--slice", slice, "value of the remaining coordinates, or * for the full shadow");
        cmd->callback([this] { run(); });
    }

    void run() {
        PackingDocument doc = load_document(in);
        RenderSpec spec = RenderSpec::defaults_for(doc.window.dimension());
        if (!axes.empty()) spec.set_axes(axes);
        spec.scale = scale;
        spec.stroke = stroke;
        spec.include_plane = !no_plane;
        spec.slice = slice == "*" ? std::nullopt : std::optional<Rational>(Rational::parse(slice));
        write_output(out, render_svg(doc, spec));
    }
};

struct Verify {
    std::string in;
    std::string checks;
    int samples = 5;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("verify", "run exact theorem checks on a packing document");
        cmd->add_option("--in", in)->required();
        cmd->add_option("--checks", checks, "comma list of integrality,disjointness,walk,mediants,dirichlet");
        cmd->add_option("--dirichlet-samples", samples);
        cmd->callback([this] { run(); });
    }

    int status = 0;

    void run() {
        PackingDocument doc = load_document(in, false);
        VerifyOptions opt;
        opt.dirichlet_samples = samples;
        if (!checks.empty()) {
            opt.checks.clear();
            std::stringstream ss(checks);
            std::string c;
            while (std::getline(ss, c, ',')) opt.checks.push_back(c);
        }
        Json report = verify_document(doc, opt);
        std::cout << report.dump(2) << "\n";
        if (report["result"] != "pass") status = 2;
    }
};

struct ListOrders {
    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("list-orders", "print the order catalog");
        cmd->callback([] { run(); });
    }

    static void run() {
        for (const auto& name : catalog_names()) {
            Order o = catalog(name);
            const auto& ds = o.context()->ds();
            std::string dlist = "(";
            for (std::size_t i = 0; i < ds.size(); ++i) dlist += (i ? "," : "") + std::to_string(ds[i]);
            dlist += ")";
            const std::size_t n = o.vec().rank();
            CoveringReport cov = covering_radius_report(o, n <= 2 ? 24 : n == 3 ? 8 : 4);
            std::string status = cov.refutes_euclidean() ? cov.verdict() : to_string(o.flag());
            std::string gram;
            for (const auto& row : o.vec().gram()) {
                gram += gram.empty() ? "[" : " ";
                gram += "[";
                for (std::size_t j = 0; j < row.size(); ++j) gram += (j ? "," : "") + row[j].to_compact_string();
                gram += "]";
            }
            gram += "]";
            std::cout << name << " | " << dlist << " | rank " << o.zbasis().size() << " | " << status << " | "
                      << o.units().size() << " units | covering " << cov.verdict() << " | Vec gram " << gram << "\n";
        }
    }
};

struct Walk {
    OrderFlags order;
    std::string tangency;
    std::string max_curvature = "1000000";
    std::string in;
    std::size_t index = 0;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("walk", "descend from one sphere to S_inf");
        order.add(cmd);
        cmd->add_option("--tangency", tangency, "\"x0,x1,...\"");
        cmd->add_option("--max-curvature", max_curvature, "search bound for --tangency");
        cmd->add_option("--in", in, "packing document");
        cmd->add_option("--index", index, "sphere index in --in");
        cmd->callback([this] { run(); });
    }

    void run() {
        Order o;
        FordSphere s;
        if (!in.empty()) {
            PackingDocument doc = load_document(in);
            o = resolve(doc.order);
            if (index >= doc.spheres.size()) throw PreconditionError("index out of range");
            s = doc.spheres[index];
            if (!s.witness && !s.is_plane()) {
                auto found = find_sphere(o, s.tangency.point(), s.curvature);
                if (!found) throw PreconditionError("no witness for sphere " + std::to_string(index));
                s = *found;
            }
        } else {
            o = order.load();
            if (tangency.empty()) throw CLI::RequiredError("--tangency or --in");
            auto found = find_sphere(o, parse_point(o, tangency), Rational::parse(max_curvature));
            if (!found) throw PreconditionError("no sphere at " + tangency + " up to curvature " + max_curvature);
            s = *found;
        }
        Json chain = Json::array();
        for (const auto& step : walk_to_infinity(o, s)) chain.push_back(sphere_row(step));
        std::cout << Json{{"order", o.name()}, {"chain", chain}}.dump(2) << "\n";
    }
};

struct Approx {
    OrderFlags order;
    std::string alpha;
    int count = 5;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("approx", "Dirichlet approximants of a point");
        order.add(cmd);
        cmd->add_option("--alpha", alpha, "\"x0,x1,...\"")->required();
        cmd->add_option("--count", count);
        cmd->callback([this] { run(); });
    }

    void run() {
        Order o = order.load();
        CliffordNumber a = parse_point(o, alpha);
        Json rows = Json::array();
        for (const auto& ap : dirichlet_approximants(o, a, count)) {
            Json r = sphere_row(ap.sphere);
            r["step"] = ap.step;
            r["mu"] = clifford_to_json(ap.mu);
            r["lambda"] = clifford_to_json(ap.lambda);
            r["error_sq"] = ap.error_sq.to_string();
            r["radius_sq"] = ap.bound_sq.to_string();
            rows.push_back(r);
        }
        std::cout << Json{{"order", o.name()}, {"alpha", a.to_string()}, {"approximants", rows}}.dump(2) << "\n";
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ford sphere packings for Clifford-Bianchi groups"};
    app.require_subcommand(1);
    Generate generate;
    Render render;
    Verify verify;
    ListOrders list;
    Walk walk;
    Approx approx;
    generate.add(app);
    render.add(app);
    verify.add(app);
    list.add(app);
    walk.add(app);
    approx.add(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const FalsificationError& e) {
        std::cerr << "falsified: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return verify.status;
}
