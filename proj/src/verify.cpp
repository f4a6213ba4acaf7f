#include "ford/verify.hpp"

#include <algorithm>
#include <random>

#include "ford/errors.hpp"

namespace ford {

namespace {

Json sphere_json(const FordSphere& s, std::optional<std::size_t> index = std::nullopt) {
    Json j;
    if (index) j["index"] = *index;
    j["tangency"] = s.is_plane() ? Json("inf") : Json(s.tangency.point().to_string());
    j["curvature"] = s.curvature.to_string();
    return j;
}

struct Check {
    std::string name;
    std::string theorem;
    std::string status = "pass";
    std::size_t checked = 0;
    Json counterexample = nullptr;
    Json extra = Json::object();

    void fail(Json example) {
        if (status != "fail") counterexample = std::move(example);
        status = "fail";
    }
    Json to_json() const {
        Json j{{"name", name}, {"theorem", theorem}, {"status", status}, {"checked", checked}};
        j["counterexample"] = counterexample;
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
        return j;
    }
};

class Verifier {
public:
    Verifier(const PackingDocument& doc, const VerifyOptions& options)
        : doc_(doc), options_(options), order_(resolve(doc.order)) {}

    std::optional<FordSphere> witnessed(std::size_t i) {
        const FordSphere& s = doc_.spheres[i];
        if (s.is_plane()) {
            FordSphere p = FordSphere::plane();
            p.witness = VahlenMatrix::identity(order_.context());
            return p;
        }
        if (s.witness && vahlen_check(*s.witness, order_)) {
            FordSphere w = FordSphere::of_witness(*s.witness);
            if (same_sphere(w, s)) return w;
        }
        auto found = find_sphere(order_, s.tangency.point(), s.curvature);
        if (found && same_sphere(*found, s)) return found;
        return std::nullopt;
    }

    Check integrality() {
        Check c{"integrality", "integral curvatures"};
        for (std::size_t i = 0; i < doc_.spheres.size(); ++i) {
            const FordSphere& s = doc_.spheres[i];
            ++c.checked;
            if (!s.curvature.is_integer() || s.curvature.sign() < 0) {
                auto e = sphere_json(s, i);
                e["reason"] = "curvature is not a non-negative integer";
                c.fail(e);
                continue;
            }
            if (s.is_plane()) continue;
            if (s.witness) {
                if (!vahlen_check(*s.witness, order_)) {
                    auto e = sphere_json(s, i);
                    e["reason"] = "witness is not a Vahlen matrix over the order";
                    c.fail(e);
                    continue;
                }
                FordSphere w = FordSphere::of_witness(*s.witness);
                if (!same_sphere(w, s)) {
                    auto e = sphere_json(s, i);
                    e["reason"] = "witness maps to tangency " + w.tangency.to_string() + " with curvature " +
                                  w.curvature.to_compact_string();
                    c.fail(e);
                }
                continue;
            }
            auto found = find_sphere(order_, s.tangency.point(), s.curvature);
            if (!found || found->curvature != s.curvature) {
                auto e = sphere_json(s, i);
                e["reason"] = found ? "the sphere at this point has curvature " + found->curvature.to_compact_string()
                                    : std::string("no sphere of the packing is tangent at this point");
                c.fail(e);
            }
        }
        return c;
    }

    Check disjointness() {
        Check c{"disjointness", "internal disjointness"};
        Packing p;
        p.order = order_;
        p.window = doc_.window;
        p.max_curvature = doc_.max_curvature;
        p.spheres = doc_.spheres;
        c.checked = p.spheres.size();
        try {
            tangency_graph(p);
        } catch (const OverlapDetected& e) {
            c.fail(Json{{"reason", e.what()}});
            return c;
        }
        c.extra["edges"] = p.edges.size();
        c.extra["component_count"] = *p.component_count;
        const bool recorded = !doc_.edges.empty() || doc_.component_count.has_value();
        if (recorded && p.edges != doc_.edges) {
            std::vector<std::pair<std::size_t, std::size_t>> diff;
            std::set_symmetric_difference(p.edges.begin(), p.edges.end(), doc_.edges.begin(), doc_.edges.end(),
                                          std::back_inserter(diff));
            auto [i, j] = diff.front();
            c.fail(Json{{"reason", "recorded tangency edges differ from the recomputed graph"},
                        {"edge", {i, j}},
                        {"recorded", std::binary_search(doc_.edges.begin(), doc_.edges.end(), diff.front())}});
        } else if (doc_.component_count && doc_.component_count != p.component_count) {
            c.fail(Json{{"reason", "recorded component count " + std::to_string(*doc_.component_count) +
                                       " differs from " + std::to_string(*p.component_count)}});
        }
        return c;
    }

    Check walk() {
        Check c{"walk", "connectivity"};
        if (!order_.flagged_euclidean()) {
            c.status = "skipped";
            c.extra["reason"] = "order is not flagged Euclidean";
            return c;
        }
        for (std::size_t i = 1; i < doc_.spheres.size(); ++i) {
            const FordSphere& s = doc_.spheres[i];
            ++c.checked;
            auto w = witnessed(i);
            if (!w) {
                auto e = sphere_json(s, i);
                e["reason"] = "no witness for this sphere";
                c.fail(e);
                continue;
            }
            try {
                auto chain = walk_to_infinity(order_, *w);
                std::string bad;
                if (!chain.back().is_plane()) bad = "chain does not end at the plane";
                for (std::size_t k = 1; k < chain.size() && bad.empty(); ++k) {
                    if (tangency_test(chain[k - 1], chain[k]) != Contact::tangent) bad = "consecutive spheres not tangent";
                    if (!chain[k].is_plane() && !(chain[k].curvature < chain[k - 1].curvature)) {
                        bad = "curvature does not decrease";
                    }
                }
                if (!bad.empty()) {
                    auto e = sphere_json(s, i);
                    e["reason"] = bad;
                    c.fail(e);
                }
            } catch (const Error& ex) {
                auto e = sphere_json(s, i);
                e["reason"] = ex.what();
                c.fail(e);
            }
        }
        return c;
    }

    // g = G_i Y(w) with G_i the inverse witness of sphere i and w the image of
    // the tangency of sphere j under the witness; then g(S_inf) = S_i and
    // g(S_0) = S_j.
    std::optional<VahlenMatrix> pair_matrix(const FordSphere& si, const FordSphere& sj) {
        BoundaryPoint w = mobius_apply(*si.witness, sj.tangency);
        if (w.is_infinity() || !w.point().is_vector() || !order_.vec().contains(w.point())) return std::nullopt;
        return si.witness->inverse() * VahlenMatrix::translation(w.point());
    }

    Check mediants() {
        Check c{"mediants", "mediant property"};
        std::size_t degenerate = 0;
        auto edges = doc_.edges;
        if (edges.empty() && !doc_.component_count) {
            Packing p;
            p.order = order_;
            p.spheres = doc_.spheres;
            tangency_graph(p);
            edges = p.edges;
        }
        for (const auto& [i, j] : edges) {
            ++c.checked;
            auto si = witnessed(i);
            auto sj = witnessed(j);
            Json pair{{"edge", {i, j}}};
            if (!si || !sj) {
                pair["reason"] = "missing witness";
                c.fail(pair);
                continue;
            }
            bool done = false;
            for (int flip = 0; flip < 2 && !done; ++flip) {
                const FordSphere& p = flip ? *sj : *si;
                const FordSphere& q = flip ? *si : *sj;
                auto g = pair_matrix(p, q);
                if (!g) {
                    pair["reason"] = "tangent neighbour does not map into Vec(O)";
                    c.fail(pair);
                    done = true;
                    break;
                }
                try {
                    MediantTriple m = mediant(*g);
                    if (!same_sphere(m.first, p) || !same_sphere(m.second, q)) {
                        pair["reason"] = "g does not map S_inf, S_0 to the pair";
                        c.fail(pair);
                    } else if (tangency_test(m.mediant, p) != Contact::tangent ||
                               tangency_test(m.mediant, q) != Contact::tangent) {
                        pair["reason"] = "mediant " + m.mediant.to_string() + " is not tangent to both";
                        c.fail(pair);
                    }
                    done = true;
                } catch (const DegenerateMediant&) {
                } catch (const Error& ex) {
                    pair["reason"] = ex.what();
                    c.fail(pair);
                    done = true;
                }
            }
            if (!done) ++degenerate;
        }
        c.extra["degenerate"] = degenerate;
        return c;
    }

    Check dirichlet() {
        Check c{"dirichlet", "Dirichlet approximation"};
        if (!order_.flagged_euclidean()) {
            c.status = "skipped";
            c.extra["reason"] = "order is not flagged Euclidean";
            return c;
        }
        std::mt19937_64 rng(options_.seed);
        const mpz_class q("999999937");
        const auto& ctx = order_.context();
        int retries = 0;
        for (int sample = 0; sample < options_.dirichlet_samples; ++sample) {
            std::vector<Rational> coords;
            for (const auto& [lo, hi] : doc_.window.bounds) {
                mpq_class width = (hi - lo).to_mpq() * q;
                mpz_class span = mpz_class(width.get_num() / width.get_den()) + 1;
                mpz_class k = mpz_class(std::to_string(rng() % 1000000007ULL)) % span;
                coords.push_back(lo + Rational(mpq_class(k, q)));
            }
            CliffordNumber alpha = CliffordNumber::vector(ctx, coords);
            Json example{{"alpha", alpha.to_string()}};
            ++c.checked;
            try {
                auto approx = dirichlet_approximants(order_, alpha, options_.dirichlet_count);
                if (static_cast<int>(approx.size()) < options_.dirichlet_count) {
                    example["reason"] = "only " + std::to_string(approx.size()) + " approximants";
                    c.fail(example);
                    continue;
                }
                for (const auto& a : approx) {
                    auto inv = try_inverse(a.mu);
                    if (!inv || !order_.contains(a.mu) || !order_.contains(a.lambda)) {
                        example["reason"] = "approximant pair is not in the order";
                        c.fail(example);
                        break;
                    }
                    CliffordNumber t = *inv * a.lambda;
                    Rational kappa = Rational(2) * norm_form(a.mu);
                    Rational err = vector_norm2(alpha - t);
                    if (a.sphere.tangency.point() != t || a.sphere.curvature != kappa ||
                        !(err * kappa * kappa < Rational(1))) {
                        example["reason"] = "approximant at " + t.to_string() + " misses the sphere";
                        c.fail(example);
                        break;
                    }
                }
            } catch (const ExactHit&) {
                --c.checked;
                if (++retries < 100) --sample;
            } catch (const Error& ex) {
                example["reason"] = ex.what();
                c.fail(example);
            }
        }
        return c;
    }

private:
    const PackingDocument& doc_;
    const VerifyOptions& options_;
    Order order_;
};

}  // namespace

std::optional<FordSphere> find_sphere(const Order& order, const CliffordNumber& t, const Rational& max_curvature) {
    Window w;
    for (const auto& x : t.vector_coords()) w.bounds.emplace_back(x, x);
    Rational k(2);
    for (;;) {
        Rational bound = k < max_curvature ? k : max_curvature;
        Packing p = generate_by_pairs(order, w, bound);
        for (const auto& s : p.spheres) {
            if (!s.is_plane()) return s;
        }
        if (bound == max_curvature) return std::nullopt;
        k *= Rational(2);
    }
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"integrality", "disjointness", "walk", "mediants", "dirichlet"};
    return names;
}

Json verify_document(const PackingDocument& doc, const VerifyOptions& options) {
    for (const auto& name : options.checks) {
        if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
            throw PreconditionError("unknown check '" + name + "'");
        }
    }
    Verifier v(doc, options);
    Json checks = Json::array();
    bool ok = true;
    for (const auto& name : check_names()) {
        if (std::find(options.checks.begin(), options.checks.end(), name) == options.checks.end()) continue;
        Check c = name == "integrality"    ? v.integrality()
                  : name == "disjointness" ? v.disjointness()
                  : name == "walk"         ? v.walk()
                  : name == "mediants"     ? v.mediants()
                                           : v.dirichlet();
        ok = ok && c.status != "fail";
        checks.push_back(c.to_json());
    }
    return Json{{"order", doc.order.name}, {"spheres", doc.spheres.size()}, {"checks", checks},
                {"result", ok ? "pass" : "fail"}};
}

}  // namespace ford
