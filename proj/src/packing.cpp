#include "ford/packing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ford/errors.hpp"

namespace ford {

namespace {

Rational weight(const ContextPtr& ctx, std::size_t j) { return j == 0 ? Rational(1) : Rational(ctx->ds()[j - 1]); }

int compare_coords(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

// Smallest dyadic rational >= v.
Rational rational_above(double v) {
    constexpr double scale = 1 << 20;
    return Rational(static_cast<std::int64_t>(std::ceil(v * scale)) + 1, static_cast<std::int64_t>(scale));
}

CliffordNumber inverse_or_throw(const CliffordNumber& x, const char* what) {
    auto inv = try_inverse(x);
    if (!inv) throw StructureError(std::string(what) + " " + x.to_string() + " is not invertible");
    return *inv;
}

// G(S_inf), with witness G^-1.
FordSphere sphere_of_state(const VahlenMatrix& g) {
    if (g.c.is_zero()) return {BoundaryPoint::infinity(), Rational(0), g.inverse()};
    CliffordNumber t = g.a * inverse_or_throw(g.c, "lower left entry");
    if (!t.is_vector()) throw StructureError("a c^-1 = " + t.to_string() + " is not a vector");
    return {BoundaryPoint(std::move(t)), Rational(2) * norm_form(g.c), g.inverse()};
}

void check_integral(const CliffordNumber& t, const Rational& curvature) {
    if (!curvature.is_integer()) {
        throw StructureError("integrality theorem violated: sphere at " + t.to_string() + " has curvature " +
                             curvature.to_compact_string());
    }
}

void check_window(const Order& order, const Window& window, const Rational& max_curvature) {
    const auto n = static_cast<std::size_t>(order.context()->generators()) + 1;
    if (window.dimension() != n) {
        throw PreconditionError("window has " + std::to_string(window.dimension()) + " coordinates, the order needs " +
                                std::to_string(n));
    }
    if (max_curvature.sign() <= 0) throw PreconditionError("max_curvature must be positive");
}

void finish(Packing& p, std::vector<FordSphere> spheres) {
    spheres.push_back(FordSphere{BoundaryPoint::infinity(), Rational(0), VahlenMatrix::identity(p.order.context())});
    std::sort(spheres.begin(), spheres.end(), sphere_less);
    p.spheres = std::move(spheres);
}

// Left-unit orbit representative: the element with the largest coordinates.
bool unit_canonical(const Order& order, const CliffordNumber& mu, const IntVec& z) {
    for (const auto& u : order.units()) {
        RatVec w = order.coordinates(u * mu);
        for (std::size_t i = 0; i < z.size(); ++i) {
            int c = compare(w[i], Rational(z[i]));
            if (c > 0) return false;
            if (c < 0) break;
        }
    }
    return true;
}

bool in_clifford_monoid(const Order& order, const CliffordNumber& mu) {
    if (order.context()->generators() < 2) return true;
    return reduced_norm(mu).has_value() && clifford_group_test(mu);
}

struct LatticeView {
    std::vector<CliffordNumber> basis;
    std::optional<EllipsoidEnumerator> enumerator;
    RatMatrix inverse;  // basis coordinates -> vector coordinates, inverted

    explicit LatticeView(std::vector<CliffordNumber> b) : basis(std::move(b)) {
        const std::size_t n = basis.size();
        RatMatrix gram(n, RatVec(n));
        RatMatrix coords;
        for (std::size_t i = 0; i < n; ++i) {
            coords.push_back(basis[i].vector_coords());
            for (std::size_t j = i; j < n; ++j) {
                Rational v = (vector_norm2(basis[i] + basis[j]) - vector_norm2(basis[i]) - vector_norm2(basis[j])) /
                             Rational(2);
                gram[i][j] = v;
                gram[j][i] = v;
            }
        }
        enumerator.emplace(std::move(gram));
        inverse = *invert(coords);
    }

    RatVec coordinates(const CliffordNumber& x) const { return row_times(x.vector_coords(), inverse); }

    CliffordNumber combine(const IntVec& z) const {
        CliffordNumber x(basis.front().context());
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] != 0) x += basis[i] * Rational(z[i]);
        }
        return x;
    }
};

}  // namespace

// ---------------------------------------------------------------- Window

Window Window::parse(const std::string& text) {
    Window w;
    std::stringstream all(text);
    std::string part;
    while (std::getline(all, part, ';')) {
        auto comma = part.find(',');
        if (comma == std::string::npos) throw ParseError("window coordinate '" + part + "' is not 'lo,hi'");
        Rational lo = Rational::parse(part.substr(0, comma));
        Rational hi = Rational::parse(part.substr(comma + 1));
        if (hi < lo) throw ParseError("empty window interval '" + part + "'");
        w.bounds.emplace_back(std::move(lo), std::move(hi));
    }
    if (w.bounds.empty()) throw ParseError("empty window");
    return w;
}

Window Window::unit_cube(std::size_t dimension) {
    Window w;
    w.bounds.assign(dimension, {Rational(0), Rational(1)});
    return w;
}

bool Window::contains(const CliffordNumber& x) const {
    auto c = x.vector_coords();
    for (std::size_t j = 0; j < bounds.size(); ++j) {
        if (c[j] < bounds[j].first || c[j] > bounds[j].second) return false;
    }
    return true;
}

Rational Window::distance_sq(const CliffordNumber& x) const {
    auto c = x.vector_coords();
    Rational total;
    for (std::size_t j = 0; j < bounds.size(); ++j) {
        Rational e;
        if (c[j] < bounds[j].first) {
            e = bounds[j].first - c[j];
        } else if (c[j] > bounds[j].second) {
            e = c[j] - bounds[j].second;
        } else {
            continue;
        }
        total += weight(x.context(), j) * e * e;
    }
    return total;
}

double Window::distance(const CliffordNumber& x) const {
    auto c = x.vector_coords();
    double total = 0;
    for (std::size_t j = 0; j < bounds.size(); ++j) {
        double v = c[j].to_double();
        double e = std::max({bounds[j].first.to_double() - v, v - bounds[j].second.to_double(), 0.0});
        total += weight(x.context(), j).to_double() * e * e;
    }
    return std::sqrt(total);
}

CliffordNumber Window::center(const ContextPtr& ctx) const {
    std::vector<Rational> c;
    for (const auto& [lo, hi] : bounds) c.push_back((lo + hi) / Rational(2));
    return CliffordNumber::vector(ctx, c);
}

Rational Window::half_diagonal_sq(const ContextPtr& ctx) const {
    Rational total;
    for (std::size_t j = 0; j < bounds.size(); ++j) {
        Rational h = (bounds[j].second - bounds[j].first) / Rational(2);
        total += weight(ctx, j) * h * h;
    }
    return total;
}

std::string Window::to_string() const {
    std::string out;
    for (std::size_t j = 0; j < bounds.size(); ++j) {
        if (j) out += ';';
        out += bounds[j].first.to_compact_string() + ',' + bounds[j].second.to_compact_string();
    }
    return out;
}

// ---------------------------------------------------------------- spheres

FordSphere FordSphere::of_witness(const VahlenMatrix& g) {
    FordSphere s = sphere_of_state(g.inverse());
    s.witness = g;
    return s;
}

Rational FordSphere::radius() const {
    if (is_plane()) throw PreconditionError("S_inf has no radius");
    return Rational(1) / curvature;
}

CliffordNumber FordSphere::center(const ContextPtr& ambient) const {
    return tangency.point().embed(ambient) + CliffordNumber::generator(ambient, ambient->generators()) * radius();
}

std::string FordSphere::to_string() const {
    if (is_plane()) return "S_inf";
    return "S(" + tangency.to_string() + ", curvature " + curvature.to_compact_string() + ")";
}

bool same_sphere(const FordSphere& s, const FordSphere& t) {
    return s.tangency == t.tangency && s.curvature == t.curvature;
}

bool sphere_less(const FordSphere& s, const FordSphere& t) {
    if (s.is_plane() || t.is_plane()) return s.is_plane() && !t.is_plane();
    int c = compare_coords(s.tangency.point().vector_coords(), t.tangency.point().vector_coords());
    if (c != 0) return c < 0;
    return s.curvature < t.curvature;
}

std::string to_string(Contact c) {
    switch (c) {
        case Contact::disjoint: return "disjoint";
        case Contact::tangent: return "tangent";
        case Contact::overlapping: return "overlapping";
    }
    return "?";
}

Contact tangency_test(const FordSphere& s, const FordSphere& t) {
    if (s.is_plane() && t.is_plane()) return Contact::overlapping;
    if (s.is_plane() || t.is_plane()) {
        const Rational& k = s.is_plane() ? t.curvature : s.curvature;
        int c = compare(k, Rational(2));
        return c == 0 ? Contact::tangent : (c > 0 ? Contact::disjoint : Contact::overlapping);
    }
    Rational d2 = vector_norm2(s.tangency.point() - t.tangency.point());
    int c = compare(d2 * s.curvature * t.curvature, Rational(4));
    return c == 0 ? Contact::tangent : (c > 0 ? Contact::disjoint : Contact::overlapping);
}

CliffordNumber tangency_point(const FordSphere& s, const FordSphere& t) {
    if (tangency_test(s, t) != Contact::tangent) {
        throw NotTangent(s.to_string() + " and " + t.to_string() + " are not tangent");
    }
    const FordSphere& f = s.is_plane() ? t : s;
    auto amb = f.tangency.point().context()->ambient();
    if (s.is_plane() || t.is_plane()) {
        return f.tangency.point().embed(amb) +
               CliffordNumber::generator(amb, amb->generators()) * (Rational(2) * f.radius());
    }
    Rational rs = s.radius(), rt = t.radius();
    CliffordNumber u = s.center(amb), v = t.center(amb);
    CliffordNumber w = (u * rt + v * rs) / (rs + rt);
    if (vector_norm2(w - u) != rs * rs || vector_norm2(w - v) != rt * rt) {
        throw StructureError("interpolated point " + w.to_string() + " is not on both spheres");
    }
    return w;
}

std::optional<std::size_t> Packing::find(const BoundaryPoint& tangency) const {
    if (tangency.is_infinity()) return spheres.empty() ? std::nullopt : std::optional<std::size_t>(0);
    FordSphere probe{tangency, Rational(0), std::nullopt};
    auto it = std::lower_bound(spheres.begin(), spheres.end(), probe, sphere_less);
    if (it != spheres.end() && it->tangency == tangency) return static_cast<std::size_t>(it - spheres.begin());
    return std::nullopt;
}

// ---------------------------------------------------------------- orbit

Rational default_locality(const Order& order) {
    const Rational fallback(8);
    if (!order.flagged_euclidean()) return fallback;
    const std::size_t n = order.vec().rank();
    const int res = n <= 2 ? 12 : (n == 3 ? 6 : 4);
    CoveringReport rep = covering_radius_report(order, res);
    if (rep.lower_sq >= Rational(1)) return fallback;
    double r2 = rep.lower_sq.to_double();
    return rational_above(2.5 * std::sqrt(r2) / (1 - r2));
}

Packing generate_orbit(const Order& order, const Window& window, const Rational& max_curvature,
                       const OrbitOptions& options) {
    check_window(order, window, max_curvature);
    for (const auto& h : options.extra_generators) {
        if (!vahlen_check(h, order)) throw PreconditionError("extra generator " + h.to_string() + " is not in SL_2(O)");
    }
    const auto& ctx = order.context();
    const auto& vec = order.vec();
    const Rational locality = options.locality.is_zero() ? default_locality(order) : options.locality;
    const Rational loc_sq = locality * locality;
    const double loc_d = locality.to_double();
    const Rational limit = max_curvature * options.prune_margin;

    struct Node {
        CliffordNumber tangency;
        Rational curvature;
        VahlenMatrix state;
        int depth;
    };
    std::vector<Node> nodes;
    std::unordered_map<CliffordNumber, std::size_t> index;
    std::deque<std::size_t> queue;

    auto local = [&](const CliffordNumber& t, const Rational& k) { return window.distance_sq(t) * k * k <= loc_sq; };
    auto admit = [&](VahlenMatrix g, CliffordNumber t, Rational k, int depth) {
        check_integral(t, k);
        auto [it, inserted] = index.try_emplace(t, nodes.size());
        if (!inserted) {
            const Rational& old = nodes[it->second].curvature;
            if (old != k) {
                throw DuplicateTangencyMismatch("tangency uniqueness violated at " + t.to_string() + ": curvatures " +
                                                old.to_compact_string() + " and " + k.to_compact_string());
            }
            return;
        }
        if (nodes.size() >= options.state_cap) {
            throw BudgetExceeded("orbit generation exceeded " + std::to_string(options.state_cap) + " states");
        }
        nodes.push_back({std::move(t), std::move(k), std::move(g), depth});
        queue.push_back(nodes.size() - 1);
    };

    const auto root = VahlenMatrix::identity(ctx);
    const auto z_matrix = VahlenMatrix::inversion(ctx);
    auto expand_extra = [&](const VahlenMatrix& g, int depth) {
        for (const auto& h : options.extra_generators) {
            VahlenMatrix hg = h * g;
            if (hg.c.is_zero()) continue;
            Rational k = Rational(2) * norm_form(hg.c);
            if (k > limit) continue;
            CliffordNumber t = hg.a * inverse_or_throw(hg.c, "lower left entry");
            if (!t.is_vector()) throw StructureError("a c^-1 = " + t.to_string() + " is not a vector");
            if (local(t, k)) admit(std::move(hg), std::move(t), std::move(k), depth + 1);
        }
    };

    // Root: the spheres S_w of curvature 2, w in Vec(O).
    if (options.depth_cap > 0) {
        if (Rational(2) <= limit) {
            double reach = std::sqrt(window.half_diagonal_sq(ctx).to_double()) + loc_d / 2;
            Rational bound = rational_above(reach * reach * (1 + 1e-9));
            vec.enumerator().run(vec.coordinates(window.center(ctx)), bound, [&](const IntVec& z, const Rational&) {
                CliffordNumber w = vec.combine(z);
                if (local(w, Rational(2))) {
                    admit(VahlenMatrix::translation(w) * z_matrix, w, Rational(2), 1);
                }
                return true;
            });
        }
        expand_extra(root, 0);
    }

    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        if (nodes[i].depth >= options.depth_cap) continue;
        const VahlenMatrix g = nodes[i].state;
        const int depth = nodes[i].depth;
        const CliffordNumber t = nodes[i].tangency;

        const CliffordNumber ci = inverse_or_throw(g.c, "lower left entry");
        const CliffordNumber q = ci * g.d;
        if (!q.is_vector()) throw StructureError("c^-1 d = " + q.to_string() + " is not a vector");
        const Rational c2 = norm_form(g.c);
        Rational bound = limit / (Rational(2) * c2);

        // A neighbour of radius r' sits within 2 sqrt(r r') of t and must come
        // within locality * r' of the window.
        const double dist = window.distance(t);
        if (dist > 0) {
            const double r = 1 / (2 * c2.to_double());
            const double u = (std::sqrt(r + loc_d * dist) - std::sqrt(r)) / loc_d;
            const double r_min = u * u * (1 - 1e-9);
            if (r_min > 0) {
                double vmax = 1 / (2 * c2.to_double() * r_min);
                if (vmax < bound.to_double()) bound = rational_above(vmax * (1 + 1e-9));
            }
        }

        vec.enumerator().run(vec.coordinates(-q), bound, [&](const IntVec& z, const Rational& value) {
            if (value.is_zero()) return true;
            Rational k = Rational(2) * c2 * value;
            if (k > limit) return true;
            CliffordNumber w = vec.combine(z);
            // Only descent-tree children: from the neighbour, with c'^-1 d' = -y^-1,
            // stepping back to this sphere must be a closest-vector step.
            CliffordNumber y = w + q;
            CliffordNumber back = -conjugation(y) / vector_norm2(y);
            Rational best;
            vec.enumerator().closest(vec.coordinates(back), &best);
            if (best != vector_norm2(back)) return true;
            CliffordNumber top = g.a * w + g.b;
            CliffordNumber bottom = g.c * w + g.d;
            CliffordNumber tn = top * inverse_or_throw(bottom, "c w + d");
            if (!tn.is_vector()) throw StructureError("g(w) = " + tn.to_string() + " is not a vector");
            if (!local(tn, k)) return true;
            admit(VahlenMatrix{-top, g.a, -bottom, g.c}, std::move(tn), std::move(k), depth + 1);
            return true;
        });
        expand_extra(g, depth);
    }

    Packing p;
    p.order = order;
    p.window = window;
    p.max_curvature = max_curvature;
    p.method = "orbit";
    p.states_explored = nodes.size() + 1;
    if (!order.flagged_euclidean()) {
        p.warnings.push_back("order " + order.name() +
                             " is not flagged euclidean: the orbit may miss spheres and whole components");
    }
    std::vector<FordSphere> out;
    for (const auto& nd : nodes) {
        if (nd.curvature <= max_curvature && window.contains(nd.tangency)) {
            out.push_back({BoundaryPoint(nd.tangency), nd.curvature, nd.state.inverse()});
        }
    }
    finish(p, std::move(out));
    return p;
}

// ---------------------------------------------------------------- pairs

std::vector<CliffordNumber> tangency_lattice(const Order& order, const CliffordNumber& mu) {
    auto nrm = reduced_norm(mu);
    if (!nrm || nrm->sign() <= 0) throw PreconditionError(mu.to_string() + " has no positive reduced norm");
    const auto& vb = order.vec().basis();
    const std::size_t n = vb.size();
    const std::size_t r = order.zbasis().size();

    // mu^-1 lambda = conj(mu) lambda / N lies in Vec(O) / (e N), e the denominator of conj(mu).
    mpz_class e = 1;
    for (const auto& c : order.coordinates(conjugation(mu))) e = lcm(e, c.denominator());
    const Rational big_d = Rational(mpq_class(e)) * *nrm;

    RatMatrix rows;
    for (const auto& b : vb) rows.push_back(order.coordinates(mu * b));
    for (std::size_t j = 0; j < r; ++j) {
        RatVec row(r);
        row[j] = big_d;
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> cols(r);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    ZMatrix kernel = integer_kernel(rows, cols);
    RatMatrix zs;
    for (const auto& k : kernel) {
        RatVec z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = Rational(mpq_class(k[i]));
        zs.push_back(std::move(z));
    }
    RatMatrix basis_z = rational_hnf(zs);
    if (basis_z.size() != n) throw StructureError("tangency lattice of " + mu.to_string() + " is not of full rank");
    std::vector<CliffordNumber> out;
    for (const auto& z : basis_z) {
        CliffordNumber x(order.context());
        for (std::size_t i = 0; i < n; ++i) {
            if (!z[i].is_zero()) x += vb[i] * z[i];
        }
        out.push_back(x / big_d);
    }
    return out;
}

Packing generate_by_pairs(const Order& order, const Window& window, const Rational& max_curvature,
                          const PairsOptions& options) {
    check_window(order, window, max_curvature);
    const auto& ctx = order.context();
    const Rational norm_bound = max_curvature / Rational(2);
    const Rational reach = window.half_diagonal_sq(ctx);
    const CliffordNumber middle = window.center(ctx);

    std::vector<FordSphere> found;
    std::unordered_map<CliffordNumber, std::size_t> index;
    std::size_t rows_tried = 0;

    RatVec origin(order.zbasis().size());
    order.norm_enumerator().run(origin, norm_bound, [&](const IntVec& z, const Rational& value) {
        if (value.is_zero()) return true;
        CliffordNumber mu = order.combine(z);
        if (!in_clifford_monoid(order, mu) || !unit_canonical(order, mu, z)) return true;
        const Rational k = Rational(2) * value;
        LatticeView lattice(tangency_lattice(order, mu));
        lattice.enumerator->run(lattice.coordinates(middle), reach, [&](const IntVec& y, const Rational&) {
            CliffordNumber x = lattice.combine(y);
            if (!window.contains(x)) return true;
            auto it = index.find(x);
            if (it != index.end() && !options.verify_duplicates) return true;
            ++rows_tried;
            auto g = try_complete(order, mu, -(mu * x));
            if (!g) return true;
            check_integral(x, k);
            if (it != index.end()) {
                if (found[it->second].curvature != k) {
                    throw DuplicateTangencyMismatch("tangency uniqueness violated at " + x.to_string() +
                                                    ": curvatures " + found[it->second].curvature.to_compact_string() +
                                                    " and " + k.to_compact_string());
                }
                return true;
            }
            FordSphere s = FordSphere::of_witness(*g);
            if (s.is_plane() || s.tangency.point() != x || s.curvature != k) {
                throw StructureError("completion of (" + mu.to_string() + ", " + (-(mu * x)).to_string() +
                                     ") gives " + s.to_string());
            }
            index.emplace(x, found.size());
            found.push_back(std::move(s));
            return true;
        });
        return true;
    });

    Packing p;
    p.order = order;
    p.window = window;
    p.max_curvature = max_curvature;
    p.method = "pairs";
    p.states_explored = rows_tried;
    if (!order.flagged_euclidean() && ctx->generators() >= 2) {
        p.warnings.push_back("order " + order.name() + " is not flagged euclidean: rows without a known completion are skipped");
    }
    finish(p, std::move(found));
    return p;
}

// ---------------------------------------------------------------- graph

namespace {

struct CellHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
        return h;
    }
};

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t root(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(std::size_t a, std::size_t b) { parent[root(a)] = root(b); }
};

}  // namespace

void tangency_graph(Packing& packing) {
    const auto& sp = packing.spheres;
    const std::size_t count = sp.size();
    const auto& ctx = packing.order.context();
    const std::size_t dim = static_cast<std::size_t>(ctx->generators()) + 1;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    auto record = [&](std::size_t i, std::size_t j) {
        Contact c = tangency_test(sp[i], sp[j]);
        if (c == Contact::overlapping) {
            throw OverlapDetected("internal disjointness violated: " + sp[i].to_string() + " and " + sp[j].to_string() +
                                  " overlap");
        }
        if (c == Contact::tangent) edges.emplace_back(std::min(i, j), std::max(i, j));
    };

    std::vector<double> scale(dim);
    for (std::size_t j = 0; j < dim; ++j) scale[j] = std::sqrt(weight(ctx, j).to_double());
    std::vector<std::vector<double>> pos(count);
    std::vector<int> level(count, 0);
    int max_level = 0;
    std::size_t plane = count;
    for (std::size_t i = 0; i < count; ++i) {
        if (sp[i].is_plane()) {
            if (plane != count) record(plane, i);
            plane = i;
            continue;
        }
        auto c = sp[i].tangency.point().vector_coords();
        for (std::size_t j = 0; j < dim; ++j) pos[i].push_back(c[j].to_double() * scale[j]);
        level[i] = std::max(0, std::ilogb(sp[i].curvature.to_double()));
        max_level = std::max(max_level, level[i]);
    }

    auto cell_size = [](int l) { return std::ldexp(2.0, -l) * (1 + 1e-9); };
    std::vector<std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, CellHash>> grids(max_level + 1);
    auto cell_of = [&](std::size_t i, int l) {
        std::vector<std::int64_t> cell(dim);
        const double h = cell_size(l);
        for (std::size_t j = 0; j < dim; ++j) cell[j] = static_cast<std::int64_t>(std::floor(pos[i][j] / h));
        return cell;
    };
    for (std::size_t i = 0; i < count; ++i) {
        if (!sp[i].is_plane()) grids[level[i]][cell_of(i, level[i])].push_back(i);
    }

    std::size_t offsets = 1;
    for (std::size_t j = 0; j < dim; ++j) offsets *= 3;
    for (std::size_t i = 0; i < count; ++i) {
        if (sp[i].is_plane()) continue;
        if (plane != count) record(plane, i);
        for (int l = 0; l <= level[i]; ++l) {
            if (grids[l].empty()) continue;
            const auto base = cell_of(i, l);
            std::vector<std::int64_t> cell(dim);
            for (std::size_t o = 0; o < offsets; ++o) {
                std::size_t rest = o;
                for (std::size_t j = 0; j < dim; ++j) {
                    cell[j] = base[j] + static_cast<std::int64_t>(rest % 3) - 1;
                    rest /= 3;
                }
                auto it = grids[l].find(cell);
                if (it == grids[l].end()) continue;
                for (std::size_t j : it->second) {
                    if (j == i || (l == level[i] && j > i)) continue;
                    record(i, j);
                }
            }
        }
    }

    std::sort(edges.begin(), edges.end());
    UnionFind uf(count);
    for (const auto& [a, b] : edges) uf.join(a, b);
    std::size_t components = 0;
    for (std::size_t i = 0; i < count; ++i) components += uf.root(i) == i ? 1 : 0;
    packing.edges = std::move(edges);
    packing.component_count = components;
}

// ---------------------------------------------------------------- walks

std::vector<FordSphere> walk_to_infinity(const Order& order, const FordSphere& sphere) {
    std::vector<FordSphere> chain{sphere};
    if (sphere.is_plane()) return chain;
    if (!sphere.witness) throw PreconditionError("walk_to_infinity needs a sphere with a witness");
    VahlenMatrix g = sphere.witness->inverse();
    for (int step = 0; step < 4096; ++step) {
        CliffordNumber q = inverse_or_throw(g.c, "lower left entry") * g.d;
        CliffordNumber w = -nearest_vec(order, q);
        CliffordNumber top = g.a * w + g.b;
        CliffordNumber bottom = g.c * w + g.d;
        VahlenMatrix next{-top, g.a, -bottom, g.c};
        FordSphere s = sphere_of_state(next);
        const FordSphere& prev = chain.back();
        if (!s.is_plane() && s.curvature >= prev.curvature) {
            throw DescentStuck("no step decreases the curvature " + prev.curvature.to_compact_string() + " at " +
                               prev.tangency.to_string());
        }
        if (tangency_test(prev, s) != Contact::tangent) {
            throw StructureError("walk step from " + prev.to_string() + " to " + s.to_string() + " is not tangent");
        }
        chain.push_back(std::move(s));
        if (chain.back().is_plane()) return chain;
        g = next;
    }
    throw DescentStuck("walk from " + sphere.to_string() + " did not reach S_inf");
}

MediantTriple mediant(const VahlenMatrix& g) {
    if (!vahlen_check(g)) throw PreconditionError(g.to_string() + " is not a Vahlen matrix");
    const auto& ctx = g.context();
    const CliffordNumber s = g.c + g.d;
    if (!try_inverse(s)) throw DegenerateMediant("c + d = " + s.to_string() + " is not invertible");
    const auto z = VahlenMatrix::inversion(ctx);
    MediantTriple m{sphere_of_state(g), sphere_of_state(g * z),
                    sphere_of_state(g * VahlenMatrix::translation(CliffordNumber(ctx, 1)) * z)};
    for (const FordSphere* parent : {&m.first, &m.second}) {
        if (tangency_test(m.mediant, *parent) != Contact::tangent) {
            throw StructureError("mediant " + m.mediant.to_string() + " is not tangent to " + parent->to_string());
        }
    }
    return m;
}

std::vector<Approximant> dirichlet_approximants(const Order& order, const CliffordNumber& alpha, int count) {
    const auto& ctx = order.context();
    if (alpha.context() != ctx || !alpha.is_vector()) throw PreconditionError("alpha must be a vector of the order's algebra");
    std::vector<Approximant> out;
    VahlenMatrix m = VahlenMatrix::identity(ctx);
    CliffordNumber x = alpha;
    for (int step = 0; static_cast<int>(out.size()) < count; ++step) {
        if (step > 1000) throw DescentStuck("continued fraction did not produce enough approximants");
        CliffordNumber a = nearest_vec(order, x);
        CliffordNumber f = x - a;
        if (f.is_zero()) {
            throw ExactHit("alpha reached a lattice point at step " + std::to_string(step) + " after " +
                           std::to_string(out.size()) + " approximants");
        }
        if (vector_norm2(f) >= Rational(1)) {
            throw DescentStuck("remainder " + f.to_string() + " has norm at least 1 at step " + std::to_string(step));
        }
        CliffordNumber top = m.a * a + m.b;
        CliffordNumber bottom = m.c * a + m.d;
        m = VahlenMatrix{-top, m.a, -bottom, m.c};
        x = -*try_inverse(f);
        FordSphere s = sphere_of_state(m);
        Rational err = vector_norm2(alpha - s.tangency.point());
        Rational bound = Rational(1) / (s.curvature * s.curvature);
        if (err < bound) {
            out.push_back({step, reversal(m.c), reversal(m.a), std::move(s), std::move(err), std::move(bound)});
        }
    }
    return out;
}

bool bubble_check(const Order& order, const CliffordNumber& x, const Rational& max_curvature) {
    const auto& ctx = order.context();
    auto amb = ctx->ambient();
    if (x.context() != amb || !x.is_vector()) throw PreconditionError("x must be a vector of the ambient algebra");
    auto coords = x.vector_coords();
    const Rational h = coords.back();
    if (h.sign() <= 0) throw PreconditionError("x must lie in the upper half space");
    if (h > Rational(1)) return true;
    coords.pop_back();
    const CliffordNumber v = CliffordNumber::vector(ctx, coords);

    Rational norm_bound = Rational(1) / (h * h);
    if (max_curvature / Rational(2) < norm_bound) norm_bound = max_curvature / Rational(2);
    bool ok = true;
    RatVec origin(order.zbasis().size());
    order.norm_enumerator().run(origin, norm_bound, [&](const IntVec& z, const Rational& value) {
        if (value.is_zero()) return true;
        CliffordNumber mu = order.combine(z);
        if (!in_clifford_monoid(order, mu) || !unit_canonical(order, mu, z)) return true;
        const Rational reach = Rational(1) / value - h * h;
        if (reach.sign() <= 0) return true;
        LatticeView lattice(tangency_lattice(order, mu));
        lattice.enumerator->run(lattice.coordinates(v), reach, [&](const IntVec& y, const Rational& d) {
            if (d >= reach) return true;
            CliffordNumber p = lattice.combine(y);
            if (try_complete(order, mu, -(mu * p))) ok = false;
            return ok;
        });
        return ok;
    });
    return ok;
}

SoddyReport soddy_gossett_report(const std::vector<FordSphere>& cluster) {
    if (cluster.size() < 3) throw NotACluster("a cluster needs at least 3 spheres");
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        for (std::size_t j = i + 1; j < cluster.size(); ++j) {
            if (cluster[i].tangency == cluster[j].tangency) {
                throw NotACluster(cluster[i].to_string() + " appears twice");
            }
            if (tangency_test(cluster[i], cluster[j]) != Contact::tangent) {
                throw NotACluster(cluster[i].to_string() + " and " + cluster[j].to_string() + " are not tangent");
            }
        }
    }
    Rational sum, sum_sq;
    for (const auto& s : cluster) {
        sum += s.curvature;
        sum_sq += s.curvature * s.curvature;
    }
    const int dim = static_cast<int>(cluster.size()) - 2;
    SoddyReport rep{sum * sum, Rational(dim) * sum_sq, dim, false};
    rep.equal = rep.lhs == rep.rhs;
    return rep;
}

}  // namespace ford
