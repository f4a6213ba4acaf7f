#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ford/clifford.hpp"
#include "ford/lattice.hpp"

namespace ford {

enum class EuclideanFlag { norm_euclidean, euclidean, unknown, not_euclidean };

std::string to_string(EuclideanFlag flag);
EuclideanFlag parse_euclidean_flag(const std::string& text);

/// The lattice Vec(O) of Clifford vectors in an order. Basis vectors are in
/// lower echelon form: basis[k] has vanishing coordinates above k.
class VecLattice {
public:
    VecLattice() = default;
    VecLattice(ContextPtr ctx, std::vector<CliffordNumber> basis);

    const std::vector<CliffordNumber>& basis() const { return basis_; }
    std::size_t rank() const { return basis_.size(); }
    /// <x, y> from |x|^2, in basis coordinates.
    const RatMatrix& gram() const { return enumerator_->gram(); }
    const EllipsoidEnumerator& enumerator() const { return *enumerator_; }

    /// Coordinates of a Clifford vector in the basis.
    RatVec coordinates(const CliffordNumber& x) const;
    bool contains(const CliffordNumber& x) const;
    CliffordNumber combine(const IntVec& z) const;

    /// Closest lattice vector; ties go to the lexicographically smallest
    /// basis coordinates.
    CliffordNumber nearest(const CliffordNumber& x) const;

private:
    ContextPtr ctx_;
    std::vector<CliffordNumber> basis_;
    RatMatrix inverse_;
    std::shared_ptr<const EllipsoidEnumerator> enumerator_;
};

/// A *-stable order in the rational Clifford algebra: a unital ring that is a
/// full-rank Z-lattice. Cheap to copy; all data is shared and immutable.
class Order {
public:
    Order() = default;

    const std::string& name() const { return data_->name; }
    const ContextPtr& context() const { return data_->ctx; }
    const std::vector<CliffordNumber>& zbasis() const { return data_->zbasis; }
    const std::vector<CliffordNumber>& generators() const { return data_->generators; }
    EuclideanFlag flag() const { return data_->flag; }
    bool flagged_euclidean() const {
        return data_->flag == EuclideanFlag::euclidean || data_->flag == EuclideanFlag::norm_euclidean;
    }
    const VecLattice& vec() const { return data_->vec; }
    const std::vector<CliffordNumber>& units() const { return data_->units; }
    /// Gram matrix of the norm form x -> scalar(x conj(x)) in zbasis coordinates.
    const RatMatrix& norm_gram() const { return data_->enumerator->gram(); }
    const EllipsoidEnumerator& norm_enumerator() const { return *data_->enumerator; }

    RatVec coordinates(const CliffordNumber& x) const;
    bool contains(const CliffordNumber& x) const;
    CliffordNumber combine(const IntVec& z) const;
    bool is_unit(const CliffordNumber& x) const;

    bool same_as(const Order& other) const { return data_ == other.data_; }

private:
    struct Data {
        std::string name;
        ContextPtr ctx;
        std::vector<CliffordNumber> generators;
        std::vector<CliffordNumber> zbasis;
        RatMatrix inverse;
        EuclideanFlag flag = EuclideanFlag::unknown;
        VecLattice vec;
        std::vector<CliffordNumber> units;
        std::shared_ptr<const EllipsoidEnumerator> enumerator;
    };
    std::shared_ptr<const Data> data_;

    friend Order order_from_generators(const ContextPtr&, const std::vector<CliffordNumber>&, const std::string&,
                                       EuclideanFlag);
};

/// Smallest multiplicatively closed Z-module containing 1 and gens.
/// Throws NotAnOrder or NotStarClosed.
Order order_from_generators(const ContextPtr& ctx, const std::vector<CliffordNumber>& gens,
                            const std::string& name = "custom", EuclideanFlag flag = EuclideanFlag::unknown);

const std::vector<std::string>& catalog_names();
/// Throws UnknownOrder.
Order catalog(const std::string& name);

inline const VecLattice& vec_lattice(const Order& order) { return order.vec(); }
inline const std::vector<CliffordNumber>& units(const Order& order) { return order.units(); }

CliffordNumber nearest_vec(const Order& order, const CliffordNumber& x);

struct Division {
    CliffordNumber q;
    CliffordNumber r;
};

/// y = x q + r with q = nearest_vec(x^-1 y) and N(r) < N(x).
/// Throws PreconditionError or DivisionFailed.
Division euclid_divide(const Order& order, const CliffordNumber& x, const CliffordNumber& y);

struct CoveringReport {
    int resolution = 0;
    Rational lower_sq;  // max over the sample grid of squared distance to Vec(O)
    Rational slack_sq;  // squared half-diagonal of a grid cell
    Rational lower;     // rational lower bound on the covering radius
    Rational upper;     // rational upper bound on the covering radius
    bool certifies_euclidean() const { return upper < Rational(1); }
    bool refutes_euclidean() const { return lower_sq >= Rational(1); }
    std::string verdict() const;
};

CoveringReport covering_radius_report(const Order& order, int resolution);

}  // namespace ford
