#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ford/document.hpp"
#include "ford/errors.hpp"
#include "ford/render.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ford;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back("FAILED " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

int run_criterion(int number, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome out;
    auto t0 = Clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.notes.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (out.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " ["
              << fixed(seconds_since(t0)) << " s]";
    for (const auto& n : out.notes) std::cout << "; " << n;
    std::cout << std::endl;
    return out.ok ? 0 : 1;
}

std::string golden_path(const std::string& name) { return std::string(FORD_GOLDEN_DIR) + "/" + name + ".json"; }

int run_cli(const std::string& args, const fs::path& stdout_file) {
    std::string cmd = std::string("\"") + FORD_CLI_PATH + "\" " + args + " > \"" + stdout_file.string() + "\" 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> euclidean_orders() {
    std::vector<std::string> out;
    for (const auto& n : catalog_names()) {
        if (catalog(n).flagged_euclidean()) out.push_back(n);
    }
    return out;
}

// Packings of criteria 2, 3 and 7.
struct Case {
    std::string order;
    std::string window;
    std::string method;
};

const std::vector<Case> integrality_cases{
    {"Z_i", "0,1;0,1", "orbit"},
    {"Z_omega", "0,1;0,1", "orbit"},
    {"Z_sqrt_m5", "0,1;0,1", "pairs"},
    {"Z_sqrt_m11", "0,1;0,1", "pairs"},
    {"hurwitz_O3", "0,1;0,1;0,1", "orbit"},
    {"O4", "0,1/4;0,1/4;0,1/4;0,1/4", "orbit"},
};

std::map<std::string, Packing> g_packings;
std::map<std::string, double> g_seconds;

// Exact |t1 - t2|^2 >= 4 r1 r2 for all pairs; doubles only skip pairs that are
// far apart by a wide margin.
std::size_t count_overlaps(const Packing& p, std::string* example) {
    const auto& ds = p.order.context()->ds();
    const std::size_t n = p.window.dimension();
    std::vector<double> w(n, 1.0);
    for (std::size_t j = 1; j < n; ++j) w[j] = static_cast<double>(ds[j - 1]);
    std::vector<std::vector<double>> t;
    std::vector<double> r;
    std::vector<const FordSphere*> sp;
    std::size_t bad = 0;
    for (const auto& s : p.spheres) {
        if (s.is_plane()) continue;
        if (s.curvature < Rational(2)) {
            ++bad;
            if (example) *example = "sphere crosses S_inf: " + s.to_string();
        }
        std::vector<double> c;
        for (const auto& x : s.tangency.point().vector_coords()) c.push_back(x.to_double());
        t.push_back(std::move(c));
        r.push_back(1.0 / s.curvature.to_double());
        sp.push_back(&s);
    }
    for (std::size_t i = 0; i < sp.size(); ++i) {
        for (std::size_t k = i + 1; k < sp.size(); ++k) {
            double d2 = 0;
            for (std::size_t j = 0; j < n; ++j) {
                double dx = t[i][j] - t[k][j];
                d2 += w[j] * dx * dx;
            }
            const double bound = 4 * r[i] * r[k];
            if (d2 > bound * (1 + 1e-6) + 1e-15) continue;
            Rational e = vector_norm2(sp[i]->tangency.point() - sp[k]->tangency.point());
            if (e * sp[i]->curvature * sp[k]->curvature < Rational(4)) {
                ++bad;
                if (example) *example = sp[i]->to_string() + " overlaps " + sp[k]->to_string();
            }
        }
    }
    return bad;
}

bool chain_ok(const std::vector<FordSphere>& chain, const FordSphere& start) {
    if (chain.empty() || !same_sphere(chain.front(), start) || !chain.back().is_plane()) return false;
    for (std::size_t k = 1; k < chain.size(); ++k) {
        if (tangency_test(chain[k - 1], chain[k]) != Contact::tangent) return false;
        if (!chain[k].is_plane() && !(chain[k].curvature < chain[k - 1].curvature)) return false;
    }
    return true;
}

// Mediant of a tangent pair given by g: parents g(S_inf), g(S_0), child at g(1).
bool mediant_ok(const VahlenMatrix& g, std::string* why) {
    MediantTriple m = mediant(g);
    if (tangency_test(m.first, m.second) != Contact::tangent) {
        *why = "parents not tangent";
        return false;
    }
    auto check_child = [&](const FordSphere& s) { return tangency_test(m.mediant, s) == Contact::tangent; };
    if (!check_child(m.first) || !check_child(m.second)) {
        *why = "mediant " + m.mediant.to_string() + " misses a parent";
        return false;
    }
    // The child is the image of S_1, so its tangency is g(1).
    auto one = BoundaryPoint(CliffordNumber(g.context(), 1));
    if (!(m.mediant.tangency == mobius_apply(g, one))) {
        *why = "mediant tangency is not g(1)";
        return false;
    }
    return true;
}

}  // namespace

int main() {
    int failures = 0;
    const fs::path tmp = fs::temp_directory_path() / ("ford_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);

    failures += run_criterion(1, "H2 Ford circles, q <= 12", [](Outcome& out) {
        auto t0 = Clock::now();
        Order z = catalog("Z");
        Packing p = generate_orbit(z, Window::unit_cube(1), Rational(288));
        tangency_graph(p);
        const double secs = seconds_since(t0);

        std::vector<std::pair<std::int64_t, std::int64_t>> fracs;
        for (std::int64_t q = 1; q <= 12; ++q) {
            for (std::int64_t a = 0; a <= q; ++a) {
                if (std::gcd(a, q) == 1) fracs.emplace_back(a, q);
            }
        }
        std::set<std::pair<Rational, Rational>> expect, got;
        for (auto [a, q] : fracs) expect.emplace(Rational(a, q), Rational(2 * q * q));
        std::map<Rational, std::size_t> index;
        for (std::size_t i = 1; i < p.spheres.size(); ++i) {
            const auto& s = p.spheres[i];
            Rational t = s.tangency.point().scalar_part();
            got.emplace(t, s.curvature);
            index[t] = i;
        }
        out.require(p.spheres.front().is_plane(), "plane first");
        out.require(got == expect, "sphere set equals the reduced fractions with 2q^2");

        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < fracs.size(); ++i) {
            for (std::size_t k = i + 1; k < fracs.size(); ++k) {
                auto [a, q] = fracs[i];
                auto [b, s] = fracs[k];
                if (std::abs(a * s - q * b) == 1) {
                    auto x = index.at(Rational(a, q));
                    auto y = index.at(Rational(b, s));
                    edges.emplace(std::min(x, y), std::max(x, y));
                }
            }
            if (fracs[i].second == 1) edges.emplace(0, index.at(Rational(fracs[i].first)));
        }
        std::set<std::pair<std::size_t, std::size_t>> got_edges(p.edges.begin(), p.edges.end());
        out.require(got_edges == edges, "edges equal the |ps - qr| = 1 pairs");
        out.require(secs < 5.0, "runtime under 5 s");
        out.note(std::to_string(got.size()) + " circles, " + std::to_string(edges.size()) + " edges, generation " +
                 fixed(secs, 3) + " s");
    });

    failures += run_criterion(2, "integral curvatures at max curvature 100", [](Outcome& out) {
        for (const auto& c : integrality_cases) {
            auto t0 = Clock::now();
            Order o = catalog(c.order);
            Window w = Window::parse(c.window);
            Packing p = c.method == "orbit" ? generate_orbit(o, w, Rational(100)) : generate_by_pairs(o, w, Rational(100));
            const double secs = seconds_since(t0);
            std::size_t bad = 0;
            for (const auto& s : p.spheres) {
                if (!s.curvature.is_integer() || s.curvature.sign() < 0) ++bad;
                if (s.is_plane()) continue;
                VahlenMatrix g = s.witness->inverse();
                if (s.curvature != Rational(2) * norm_form(g.c)) ++bad;
            }
            bool witnesses = true;
            for (std::size_t i = 1; i < p.spheres.size(); i += std::max<std::size_t>(1, p.spheres.size() / 400)) {
                witnesses = witnesses && vahlen_check(*p.spheres[i].witness, o);
            }
            out.require(bad == 0, c.order + " curvatures integral");
            out.require(witnesses, c.order + " witnesses in SL2(O)");
            out.require(secs < 60.0, c.order + " runtime under 60 s");
            out.note(c.order + " [" + c.window + "] " + c.method + ": " + std::to_string(p.spheres.size()) +
                     " spheres, " + fixed(secs) + " s");
            g_seconds[c.order] = secs;
            g_packings[c.order] = std::move(p);
        }
    });

    failures += run_criterion(3, "internal disjointness, all pairs exact", [](Outcome& out) {
        for (const auto& c : integrality_cases) {
            auto it = g_packings.find(c.order);
            out.require(it != g_packings.end(), c.order + " packing available");
            if (it == g_packings.end()) continue;
            std::string example;
            std::size_t bad = count_overlaps(it->second, &example);
            out.require(bad == 0, c.order + " has no overlapping pair" + (example.empty() ? "" : ": " + example));
            const std::size_t n = it->second.spheres.size();
            out.note(c.order + " " + std::to_string(n * (n - 1) / 2) + " pairs");
        }
    });

    failures += run_criterion(4, "discriminant invariance under random words", [](Outcome& out) {
        std::size_t total = 0;
        for (const auto& name : catalog_names()) {
            Order o = catalog(name);
            RevHermitian a = a_infinity(o.context());
            std::size_t bad = 0;
            for (int i = 0; i < 1000; ++i) {
                auto g = testsupport::random_word(o);
                if (discriminant(rherm_action(g, a)) != Rational(1, 4)) ++bad;
                ++total;
            }
            out.require(bad == 0, name + " discriminant 1/4");
        }
        out.note(std::to_string(total) + " words");
    });

    failures += run_criterion(5, "closed-form image equals the hermitian action", [](Outcome& out) {
        std::size_t points = 0;
        for (const auto& name : catalog_names()) {
            Order o = catalog(name);
            auto ctx = o.context();
            auto amb = ctx->ambient();
            RevHermitian a = a_infinity(ctx);
            std::size_t bad = 0;
            for (int i = 0; i < 200; ++i) {
                auto g = testsupport::random_word(o);
                RevHermitian f = ford_image(g);
                if (f != canonical_sign(rherm_action(g, a))) ++bad;
                for (int k = 0; k < 5; ++k) {
                    auto x = testsupport::rand_vector(ctx).embed(amb) + CliffordNumber::generator(amb, amb->generators());
                    auto y = mobius_apply_interior(g.inverse(), x);
                    if (!y || !quadric_value(f, *y).is_zero()) ++bad;
                    ++points;
                }
            }
            out.require(bad == 0, name + " images agree");
        }
        out.note(std::to_string(points) + " quadric points");
    });

    failures += run_criterion(6, "orbit and pair generators agree", [](Outcome& out) {
        for (const std::string name : {"Z", "Z_i", "Z_omega"}) {
            Order o = catalog(name);
            Window w = Window::unit_cube(o.context()->generators() + 1);
            Packing a = generate_orbit(o, w, Rational(100));
            Packing b = generate_by_pairs(o, w, Rational(100));
            bool same = a.spheres.size() == b.spheres.size();
            for (std::size_t i = 0; same && i < a.spheres.size(); ++i) same = same_sphere(a.spheres[i], b.spheres[i]);
            out.require(same, name + " sphere sets equal");
            out.note(name + " " + std::to_string(a.spheres.size()) + " spheres");
        }
    });

    failures += run_criterion(7, "descent walks reach S_inf", [](Outcome& out) {
        for (const std::string name : {"Z_i", "Z_omega", "hurwitz_O3", "O4"}) {
            auto it = g_packings.find(name);
            out.require(it != g_packings.end(), name + " packing available");
            if (it == g_packings.end()) continue;
            const Packing& p = it->second;
            std::size_t stuck = 0, broken = 0, longest = 0;
            for (std::size_t i = 1; i < p.spheres.size(); ++i) {
                try {
                    auto chain = walk_to_infinity(p.order, p.spheres[i]);
                    if (!chain_ok(chain, p.spheres[i])) ++broken;
                    longest = std::max(longest, chain.size());
                } catch (const DescentStuck&) {
                    ++stuck;
                }
            }
            out.require(stuck == 0, name + " no DescentStuck");
            out.require(broken == 0, name + " chains verified");
            out.note(name + " " + std::to_string(p.spheres.size() - 1) + " walks, longest " + std::to_string(longest));
        }
    });

    failures += run_criterion(8, "mediant property", [](Outcome& out) {
        std::size_t total = 0;
        for (const auto& name : euclidean_orders()) {
            Order o = catalog(name);
            std::size_t done = 0, bad = 0;
            std::string why;
            auto it = g_packings.find(name);
            if (it != g_packings.end()) {
                Packing& p = it->second;
                if (!p.component_count) tangency_graph(p);
                const std::size_t step = std::max<std::size_t>(1, p.edges.size() / 25);
                for (std::size_t e = 0; e < p.edges.size() && done < 25; e += step) {
                    const FordSphere& si = p.spheres[p.edges[e].first];
                    const FordSphere& sj = p.spheres[p.edges[e].second];
                    BoundaryPoint w = mobius_apply(*si.witness, sj.tangency);
                    if (w.is_infinity() || !o.vec().contains(w.point())) {
                        ++bad;
                        why = "edge neighbour outside Vec(O)";
                        continue;
                    }
                    VahlenMatrix g = si.witness->inverse() * VahlenMatrix::translation(w.point());
                    try {
                        MediantTriple m = mediant(g);
                        if (!same_sphere(m.first, si) || !same_sphere(m.second, sj)) {
                            ++bad;
                            why = "g does not carry S_inf, S_0 to the edge";
                        }
                        if (!mediant_ok(g, &why)) ++bad;
                        ++done;
                    } catch (const DegenerateMediant&) {
                    }
                }
            }
            for (int tries = 0; done < 50 && tries < 5000; ++tries) {
                auto g = testsupport::random_word(o);
                try {
                    if (!mediant_ok(g, &why)) ++bad;
                    ++done;
                } catch (const DegenerateMediant&) {
                }
            }
            out.require(done >= 50, name + " 50 pairs");
            out.require(bad == 0, name + " mediants tangent" + (why.empty() ? "" : ": " + why));
            total += done;
        }
        out.note(std::to_string(total) + " pairs over " + std::to_string(euclidean_orders().size()) + " orders");
    });

    failures += run_criterion(9, "Dirichlet approximants", [](Outcome& out) {
        std::mt19937_64 rng(7);
        const mpz_class q("999999999989");
        std::size_t total = 0;
        for (const auto& name : euclidean_orders()) {
            Order o = catalog(name);
            auto ctx = o.context();
            std::size_t good = 0, bad = 0;
            for (int sample = 0, tries = 0; sample < 10 && tries < 100; ++tries) {
                std::vector<Rational> c;
                for (int j = 0; j <= ctx->generators(); ++j) {
                    mpz_class k(std::to_string(rng() % 1999999999979ULL));
                    c.push_back(Rational(mpq_class(k - q, q)));
                }
                auto alpha = CliffordNumber::vector(ctx, c);
                try {
                    auto approx = dirichlet_approximants(o, alpha, 5);
                    bool ok = approx.size() >= 5;
                    for (const auto& a : approx) {
                        auto inv = try_inverse(a.mu);
                        if (!inv || !o.contains(a.mu) || !o.contains(a.lambda)) {
                            ok = false;
                            continue;
                        }
                        CliffordNumber t = *inv * a.lambda;
                        Rational kappa = Rational(2) * norm_form(a.mu);
                        ok = ok && t.is_vector() && a.sphere.tangency.point() == t && a.sphere.curvature == kappa &&
                             vector_norm2(alpha - t) * kappa * kappa < Rational(1);
                    }
                    ok ? ++good : ++bad;
                    ++sample;
                } catch (const ExactHit&) {
                }
            }
            out.require(good == 10 && bad == 0, name + " 10 surrogates with 5 verified approximants");
            total += good;
        }
        out.note(std::to_string(total) + " surrogates of height ~1e12");
    });

    failures += run_criterion(10, "equator figures from golden sphere lists", [&tmp](Outcome& out) {
        for (const std::string name : {"Z_i", "Z_omega", "Z_sqrt_m11", "Z_sqrt_m5"}) {
            const std::string path = golden_path(name);
            const std::string text = slurp(path);
            PackingDocument golden = read_document(text);
            out.require(write_document(golden) == text, name + " round-trip identity");

            Order o = catalog(name);
            Packing p = generate_by_pairs(o, golden.window, golden.max_curvature);
            tangency_graph(p);
            PackingDocument fresh = make_document(p, golden.parameters);
            out.require(fresh == golden, name + " regenerated document equals the fixture");

            testsupport::Quadratic quad{o.context()->ds()[0], name == "Z_omega"};
            const auto& w = golden.window.bounds;
            auto oracle = quad.ford_spheres(w[0].first, w[0].second, w[1].first, w[1].second, 60);
            std::map<testsupport::Quadratic::Point, Rational> got;
            for (const auto& s : golden.spheres) {
                if (s.is_plane()) continue;
                auto c = s.tangency.point().vector_coords();
                got.emplace(testsupport::Quadratic::Point{c[0], c[1]}, s.curvature);
            }
            out.require(got == oracle, name + " sphere list equals the unit-ideal oracle");

            const fs::path svg1 = tmp / (name + "_1.svg"), svg2 = tmp / (name + "_2.svg"), log = tmp / "render.log";
            int rc1 = run_cli("render --in \"" + path + "\" --axes 0,1 --out \"" + svg1.string() + "\"", log);
            int rc2 = run_cli("render --in \"" + path + "\" --axes 0,1 --out \"" + svg2.string() + "\"", log);
            const std::string a = slurp(svg1), b = slurp(svg2);
            std::size_t circles = 0;
            for (auto pos = a.find("<circle"); pos != std::string::npos; pos = a.find("<circle", pos + 1)) ++circles;
            out.require(rc1 == 0 && rc2 == 0, name + " render exit 0");
            out.require(!a.empty() && a == b, name + " SVG byte-identical across runs");
            out.require(circles + 1 == golden.spheres.size(), name + " one circle per sphere");
            out.note(name + " " + std::to_string(golden.spheres.size()) + " spheres, " +
                     std::to_string(*golden.component_count) + " components");
        }
        const auto& m5 = read_document(slurp(golden_path("Z_sqrt_m5")));
        out.note("Z_sqrt_m5 truncated graph components " + std::to_string(*m5.component_count) +
                 (*m5.component_count >= 2 ? " (>= 2)" : " (< 2)"));
    });

    failures += run_criterion(11, "verify exits 2 on corrupted documents", [&tmp](Outcome& out) {
        for (const std::string name : {"Z_i", "Z_omega", "Z_sqrt_m11", "Z_sqrt_m5"}) {
            Json j = Json::parse(slurp(golden_path(name)));
            const fs::path clean = tmp / (name + "_clean.json");
            std::ofstream(clean) << j.dump(2);
            const fs::path report = tmp / (name + "_report.json");
            int rc = run_cli("verify --in \"" + clean.string() + "\"", report);
            out.require(rc == 0, name + " clean document verifies");

            const std::size_t k = j["spheres"].size() / 2;
            for (int mode = 0; mode < 2; ++mode) {
                Json bad = j;
                if (mode == 0) {
                    Rational c = Rational::parse(bad["spheres"][k]["curvature"].get<std::string>());
                    bad["spheres"][k]["curvature"] = (c + Rational(1)).to_string();
                } else {
                    Rational x = Rational::parse(bad["spheres"][k]["tangency"][0].get<std::string>());
                    bad["spheres"][k]["tangency"][0] = (x + Rational(1, 997)).to_string();
                }
                const fs::path corrupt = tmp / (name + "_bad" + std::to_string(mode) + ".json");
                std::ofstream(corrupt) << bad.dump(2);
                rc = run_cli("verify --checks integrality,disjointness --in \"" + corrupt.string() + "\"", report);
                Json r = Json::parse(slurp(report));
                bool has_example = false;
                for (const auto& c : r["checks"]) {
                    if (c["status"] == "fail" && !c["counterexample"].is_null()) has_example = true;
                }
                const std::string what = mode == 0 ? " curvature" : " tangency";
                out.require(rc == 2, name + what + " corruption exits 2 (got " + std::to_string(rc) + ")");
                out.require(has_example, name + what + " corruption prints a counterexample");
            }
        }
        const fs::path log = tmp / "usage.log";
        out.require(run_cli("generate --max-curvature 4", log) == 1, "missing --order is a usage error");
    });

    fs::remove_all(tmp);
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
