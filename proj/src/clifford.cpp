#include "ford/clifford.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ford/errors.hpp"

namespace ford {

namespace {

constexpr int kMaxGenerators = 7;

bool square_free(std::int64_t d) {
    for (std::int64_t p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) return false;
    }
    return true;
}

// Number of transpositions needed to merge the ordered words A and B:
// pairs (i in A, j in B) with i > j.
int swap_count(Blade a, Blade b) {
    int count = 0;
    a >>= 1;
    while (a != 0) {
        count += std::popcount(a & b);
        a >>= 1;
    }
    return count;
}

void require_same(const CliffordNumber& a, const CliffordNumber& b) {
    if (a.context() != b.context()) {
        throw ContextError("clifford numbers from different algebras: " + a.context()->describe() +
                           " vs " + b.context()->describe());
    }
}

}  // namespace

int blade_grade(Blade s) { return std::popcount(s); }

std::vector<int> blade_indices(Blade s) {
    std::vector<int> out;
    for (int j = 0; s != 0; ++j, s >>= 1) {
        if (s & 1U) out.push_back(j + 1);
    }
    return out;
}

Blade blade_from_indices(std::span<const int> indices) {
    Blade s = 0;
    for (int j : indices) {
        if (j < 1 || j > kMaxGenerators) throw ContextError("blade index out of range: " + std::to_string(j));
        Blade bit = Blade{1} << (j - 1);
        if (s & bit) throw ContextError("repeated blade index " + std::to_string(j));
        s |= bit;
    }
    return s;
}

AlgebraContext::AlgebraContext(std::vector<std::int64_t> ds) : ds_(std::move(ds)) {
    const std::size_t dim = dimension();
    table_.resize(dim * dim);
    weights_.resize(dim);
    for (Blade a = 0; a < dim; ++a) {
        std::int64_t w = 1;
        for (int j : blade_indices(a)) w *= ds_[j - 1];
        weights_[a] = w;
    }
    for (Blade a = 0; a < dim; ++a) {
        for (Blade b = 0; b < dim; ++b) {
            std::int64_t f = (swap_count(a, b) % 2 == 0) ? 1 : -1;
            for (int j : blade_indices(a & b)) f *= -ds_[j - 1];
            table_[a * dim + b] = {a ^ b, f};
        }
    }
    canonical_.resize(dim);
    std::iota(canonical_.begin(), canonical_.end(), Blade{0});
    std::sort(canonical_.begin(), canonical_.end(),
              [](Blade x, Blade y) { return blade_indices(x) < blade_indices(y); });
}

ContextPtr AlgebraContext::make(std::vector<std::int64_t> ds) {
    if (ds.size() > kMaxGenerators) throw ContextError("too many generators");
    for (std::int64_t d : ds) {
        if (d < 1) throw ContextError("form coefficient must be positive: " + std::to_string(d));
        if (!square_free(d)) throw ContextError("form coefficient must be square-free: " + std::to_string(d));
    }
    if (ds.size() >= 2) {
        std::int64_t g = 0;
        for (std::int64_t d : ds) g = std::gcd(g, d);
        if (g != 1) throw ContextError("form coefficients must be coprime");
    }

    static std::mutex mutex;
    static std::map<std::vector<std::int64_t>, ContextPtr> interned;
    std::lock_guard lock(mutex);
    auto it = interned.find(ds);
    if (it != interned.end()) return it->second;
    auto ctx = std::make_shared<const AlgebraContext>(ds);
    interned.emplace(std::move(ds), ctx);
    return ctx;
}

ContextPtr AlgebraContext::ambient() const {
    auto ds = ds_;
    ds.push_back(1);
    return make(std::move(ds));
}

std::string AlgebraContext::describe() const {
    std::ostringstream os;
    os << "A(";
    for (std::size_t i = 0; i < ds_.size(); ++i) os << (i ? "," : "") << ds_[i];
    os << ")";
    return os.str();
}

CliffordNumber::CliffordNumber(ContextPtr ctx) : ctx_(std::move(ctx)) { coeffs_.resize(ctx_->dimension()); }

CliffordNumber::CliffordNumber(ContextPtr ctx, const Rational& scalar) : CliffordNumber(std::move(ctx)) {
    coeffs_[0] = scalar;
}

CliffordNumber::CliffordNumber(ContextPtr ctx, std::vector<Rational> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != ctx_->dimension()) throw ContextError("coefficient count does not match algebra");
}

CliffordNumber CliffordNumber::blade(ContextPtr ctx, Blade s, const Rational& coeff) {
    if (s >= ctx->dimension()) throw ContextError("blade outside algebra " + ctx->describe());
    CliffordNumber x(std::move(ctx));
    x.coeffs_[s] = coeff;
    return x;
}

CliffordNumber CliffordNumber::generator(ContextPtr ctx, int j) {
    if (j < 1 || j > ctx->generators()) throw ContextError("no generator e" + std::to_string(j));
    return blade(std::move(ctx), Blade{1} << (j - 1));
}

CliffordNumber CliffordNumber::vector(ContextPtr ctx, std::span<const Rational> coords) {
    if (static_cast<int>(coords.size()) != ctx->generators() + 1) {
        throw ContextError("vector needs " + std::to_string(ctx->generators() + 1) + " coordinates");
    }
    CliffordNumber x(std::move(ctx));
    x.coeffs_[0] = coords[0];
    for (std::size_t j = 1; j < coords.size(); ++j) x.coeffs_[Blade{1} << (j - 1)] = coords[j];
    return x;
}

std::vector<std::pair<Blade, Rational>> CliffordNumber::terms() const {
    std::vector<std::pair<Blade, Rational>> out;
    for (Blade s : ctx_->canonical_blades()) {
        if (!coeffs_[s].is_zero()) out.emplace_back(s, coeffs_[s]);
    }
    return out;
}

bool CliffordNumber::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
}

bool CliffordNumber::is_scalar() const {
    for (std::size_t s = 1; s < coeffs_.size(); ++s) {
        if (!coeffs_[s].is_zero()) return false;
    }
    return true;
}

bool CliffordNumber::is_vector() const {
    for (std::size_t s = 1; s < coeffs_.size(); ++s) {
        if (std::popcount(s) >= 2 && !coeffs_[s].is_zero()) return false;
    }
    return true;
}

int CliffordNumber::max_grade() const {
    int g = -1;
    for (std::size_t s = 0; s < coeffs_.size(); ++s) {
        if (!coeffs_[s].is_zero()) g = std::max(g, std::popcount(s));
    }
    return g;
}

std::vector<Rational> CliffordNumber::vector_coords() const {
    std::vector<Rational> out;
    out.reserve(ctx_->generators() + 1);
    out.push_back(coeffs_[0]);
    for (int j = 0; j < ctx_->generators(); ++j) out.push_back(coeffs_[Blade{1} << j]);
    return out;
}

CliffordNumber CliffordNumber::embed(const ContextPtr& larger) const {
    const auto& small = ctx_->ds();
    const auto& big = larger->ds();
    if (big.size() < small.size() || !std::equal(small.begin(), small.end(), big.begin())) {
        throw ContextError(larger->describe() + " does not extend " + ctx_->describe());
    }
    CliffordNumber out(larger);
    std::copy(coeffs_.begin(), coeffs_.end(), out.coeffs_.begin());
    return out;
}

CliffordNumber CliffordNumber::restrict_to(const ContextPtr& smaller) const {
    const auto& small = smaller->ds();
    const auto& big = ctx_->ds();
    if (big.size() < small.size() || !std::equal(small.begin(), small.end(), big.begin())) {
        throw ContextError(ctx_->describe() + " does not extend " + smaller->describe());
    }
    for (std::size_t s = smaller->dimension(); s < coeffs_.size(); ++s) {
        if (!coeffs_[s].is_zero()) throw ContextError("element uses generators outside " + smaller->describe());
    }
    return CliffordNumber(smaller, std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + smaller->dimension()));
}

CliffordNumber CliffordNumber::operator-() const {
    CliffordNumber out(*this);
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

CliffordNumber& CliffordNumber::operator+=(const CliffordNumber& rhs) {
    require_same(*this, rhs);
    for (std::size_t s = 0; s < coeffs_.size(); ++s) {
        if (!rhs.coeffs_[s].is_zero()) coeffs_[s] += rhs.coeffs_[s];
    }
    return *this;
}

CliffordNumber& CliffordNumber::operator-=(const CliffordNumber& rhs) {
    require_same(*this, rhs);
    for (std::size_t s = 0; s < coeffs_.size(); ++s) {
        if (!rhs.coeffs_[s].is_zero()) coeffs_[s] -= rhs.coeffs_[s];
    }
    return *this;
}

CliffordNumber& CliffordNumber::operator*=(const Rational& s) {
    for (auto& c : coeffs_) {
        if (!c.is_zero()) c *= s;
    }
    return *this;
}

CliffordNumber& CliffordNumber::operator/=(const Rational& s) {
    if (s.is_zero()) throw PreconditionError("division of a clifford number by zero");
    for (auto& c : coeffs_) {
        if (!c.is_zero()) c /= s;
    }
    return *this;
}

CliffordNumber operator*(const CliffordNumber& a, const CliffordNumber& b) {
    require_same(a, b);
    const auto& ctx = *a.ctx_;
    const std::size_t dim = ctx.dimension();
    CliffordNumber out(a.ctx_);
    for (Blade x = 0; x < dim; ++x) {
        const Rational& ax = a.coeffs_[x];
        if (ax.is_zero()) continue;
        for (Blade y = 0; y < dim; ++y) {
            const Rational& by = b.coeffs_[y];
            if (by.is_zero()) continue;
            auto p = ctx.product(x, y);
            out.coeffs_[p.blade] += ax * by * Rational(p.factor);
        }
    }
    return out;
}

bool operator==(const CliffordNumber& a, const CliffordNumber& b) {
    return a.ctx_ == b.ctx_ && a.coeffs_ == b.coeffs_;
}

std::string CliffordNumber::to_string() const {
    auto t = terms();
    if (t.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : t) {
        if (!first) os << (c.sign() < 0 ? " - " : " + ");
        else if (c.sign() < 0) os << "-";
        first = false;
        Rational mag = abs(c);
        if (s == 0) {
            os << mag.to_compact_string();
            continue;
        }
        if (mag != Rational(1)) os << mag.to_compact_string() << "*";
        os << "e";
        for (int j : blade_indices(s)) os << j;
    }
    return os.str();
}

std::size_t CliffordNumber::hash() const {
    std::size_t h = std::hash<const void*>{}(ctx_.get());
    for (const auto& c : coeffs_) h = h * 1000003U ^ c.hash();
    return h;
}

CliffordNumber multiply(const CliffordNumber& a, const CliffordNumber& b) { return a * b; }

CliffordNumber involution(const CliffordNumber& x, Involution kind) {
    std::vector<Rational> out(x.coeffs());
    for (std::size_t s = 0; s < out.size(); ++s) {
        if (out[s].is_zero()) continue;
        int k = std::popcount(s);
        bool flip = false;
        if (kind != Involution::reversal) flip ^= (k % 2 == 1);
        if (kind != Involution::parity) flip ^= ((k * (k - 1) / 2) % 2 == 1);
        if (flip) out[s] = -out[s];
    }
    return CliffordNumber(x.context(), std::move(out));
}

std::optional<Rational> reduced_norm(const CliffordNumber& x) {
    CliffordNumber n = x * conjugation(x);
    if (!n.is_scalar()) return std::nullopt;
    return n.scalar_part();
}

std::optional<CliffordNumber> try_inverse(const CliffordNumber& x) {
    auto n = reduced_norm(x);
    if (!n || n->is_zero()) return std::nullopt;
    return conjugation(x) / *n;
}

bool clifford_group_test(const CliffordNumber& x) {
    auto inv = try_inverse(x);
    if (!inv) return false;
    CliffordNumber xp = parity(x);
    const auto& ctx = x.context();
    if (!(xp * *inv).is_vector()) return false;
    for (int j = 1; j <= ctx->generators(); ++j) {
        if (!(xp * CliffordNumber::generator(ctx, j) * *inv).is_vector()) return false;
    }
    return true;
}

Rational vector_norm2(const CliffordNumber& x) {
    Rational out = x.coeff(0) * x.coeff(0);
    const auto& ds = x.context()->ds();
    for (std::size_t j = 0; j < ds.size(); ++j) {
        const Rational& c = x.coeff(Blade{1} << j);
        if (!c.is_zero()) out += Rational(ds[j]) * c * c;
    }
    return out;
}

Rational norm_form(const CliffordNumber& x) {
    Rational out;
    const auto& ctx = *x.context();
    for (std::size_t s = 0; s < x.coeffs().size(); ++s) {
        const Rational& c = x.coeff(static_cast<Blade>(s));
        if (!c.is_zero()) out += Rational(ctx.blade_weight(static_cast<Blade>(s))) * c * c;
    }
    return out;
}

}  // namespace ford
