#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ford/order.hpp"
#include "ford/unimodular.hpp"
#include "ford/vahlen.hpp"

namespace ford {

/// Closed axis-aligned box in the coordinates (x_0, ..., x_m) of V_n.
struct Window {
    std::vector<std::pair<Rational, Rational>> bounds;

    /// "a,b;c,d;..." with one "lo,hi" pair per coordinate.
    static Window parse(const std::string& text);
    static Window unit_cube(std::size_t dimension);

    std::size_t dimension() const { return bounds.size(); }
    bool contains(const CliffordNumber& x) const;
    /// Squared |.|-distance from a vector to the box (0 inside).
    Rational distance_sq(const CliffordNumber& x) const;
    double distance(const CliffordNumber& x) const;
    CliffordNumber center(const ContextPtr& ctx) const;
    /// Squared |.|-length of the half diagonal.
    Rational half_diagonal_sq(const ContextPtr& ctx) const;
    std::string to_string() const;

    friend bool operator==(const Window&, const Window&) = default;
};

struct FordSphere {
    BoundaryPoint tangency;
    Rational curvature;
    /// g with g^-1(S_inf) equal to this sphere.
    std::optional<VahlenMatrix> witness;

    static FordSphere plane() { return {}; }
    /// The sphere g^-1(S_inf), with witness g.
    static FordSphere of_witness(const VahlenMatrix& g);

    bool is_plane() const { return tangency.is_infinity(); }
    Rational radius() const;
    /// t + r e_n in the ambient algebra.
    CliffordNumber center(const ContextPtr& ambient) const;
    std::string to_string() const;

    friend bool operator==(const FordSphere&, const FordSphere&) = default;
};

/// Same tangency point and curvature; witnesses are ignored.
bool same_sphere(const FordSphere& s, const FordSphere& t);
/// Canonical order: the plane first, then tangency coordinates, then curvature.
bool sphere_less(const FordSphere& s, const FordSphere& t);

enum class Contact { disjoint, tangent, overlapping };
std::string to_string(Contact c);

/// Exact comparison of |t1 - t2|^2 with 4 r1 r2; against the plane, of the
/// curvature with 2.
Contact tangency_test(const FordSphere& s, const FordSphere& t);

/// The common point of two tangent spheres, as an ambient vector. Throws NotTangent.
CliffordNumber tangency_point(const FordSphere& s, const FordSphere& t);

struct Packing {
    Order order;
    Window window;
    Rational max_curvature;
    std::string method;
    /// Sorted by sphere_less; spheres[0] is S_inf.
    std::vector<FordSphere> spheres;
    /// Tangent pairs (i, j), i < j, sorted; empty until tangency_graph runs.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::optional<std::size_t> component_count;
    std::vector<std::string> warnings;
    std::size_t states_explored = 0;

    /// Index of the sphere with the given tangency point.
    std::optional<std::size_t> find(const BoundaryPoint& tangency) const;
};

struct OrbitOptions {
    int depth_cap = 24;
    /// States up to max_curvature * prune_margin are expanded.
    Rational prune_margin{1};
    /// A state is kept while its tangency point is within locality * radius of
    /// the window. 0 selects a value from the covering radius of Vec(O).
    Rational locality{0};
    std::size_t state_cap = 4'000'000;
    /// Applied on the left of every state.
    std::vector<VahlenMatrix> extra_generators;
};

/// Spheres G(S_inf) for G reachable from the identity by tangency moves
/// G -> G Y(w) Z (w in Vec(O)) and by the extra generators, restricted to the
/// window and max_curvature. Tangency moves follow the descent tree: a
/// neighbour is expanded only from its tangent spheres of largest radius,
/// which include the sphere its walk_to_infinity step leads to.
/// Throws BudgetExceeded, DuplicateTangencyMismatch and StructureError
/// (non-integral curvature).
Packing generate_orbit(const Order& order, const Window& window, const Rational& max_curvature,
                       const OrbitOptions& options = {});

/// The locality factor selected by OrbitOptions{}.locality == 0.
Rational default_locality(const Order& order);

struct PairsOptions {
    /// Complete rows whose tangency was already found, and compare curvatures.
    bool verify_duplicates = false;
};

/// Spheres with tangency mu^-1 lambda in the window and curvature 2|mu|^2 over
/// all completable rows (mu, -lambda) with 2|mu|^2 <= max_curvature.
Packing generate_by_pairs(const Order& order, const Window& window, const Rational& max_curvature,
                          const PairsOptions& options = {});

/// The lattice { x in V_n : mu x in O }, as Clifford vectors.
std::vector<CliffordNumber> tangency_lattice(const Order& order, const CliffordNumber& mu);

/// Fills packing.edges and packing.component_count. Throws OverlapDetected.
void tangency_graph(Packing& packing);

/// Chain of pairwise tangent spheres of strictly decreasing curvature from
/// the given sphere to S_inf. Throws PreconditionError without a witness,
/// DescentStuck when a step does not decrease the curvature.
std::vector<FordSphere> walk_to_infinity(const Order& order, const FordSphere& sphere);

struct MediantTriple {
    FordSphere first;    // g(S_inf), at g(inf)
    FordSphere second;   // g(S_0), at g(0)
    FordSphere mediant;  // at g(1)
};

/// Throws DegenerateMediant when c + d = 0, StructureError when the mediant
/// is not tangent to both parents.
MediantTriple mediant(const VahlenMatrix& g);

struct Approximant {
    int step = 0;
    CliffordNumber mu;
    CliffordNumber lambda;
    FordSphere sphere;  // tangency mu^-1 lambda, curvature 2|mu|^2
    Rational error_sq;  // |alpha - mu^-1 lambda|^2
    Rational bound_sq;  // radius^2 = 1 / (4|mu|^4)
};

/// Nearest-vector continued fraction of alpha; returns the first count
/// convergents with |alpha - mu^-1 lambda| < 1 / (2|mu|^2). Throws ExactHit and
/// DescentStuck.
std::vector<Approximant> dirichlet_approximants(const Order& order, const CliffordNumber& alpha, int count);

/// |x - mu^-1 lambda| >= 1/|mu| for every completable row with 2|mu|^2 <= max_curvature.
/// x is an ambient vector with positive last coordinate.
bool bubble_check(const Order& order, const CliffordNumber& x, const Rational& max_curvature);

struct SoddyReport {
    Rational lhs;   // (sum b)^2
    Rational rhs;   // dimension * sum b^2
    int dimension;  // cluster size - 2
    bool equal;
};

/// Throws NotACluster unless the spheres are distinct and pairwise tangent.
SoddyReport soddy_gossett_report(const std::vector<FordSphere>& cluster);

}  // namespace ford
