#include "ford/rational.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ford/errors.hpp"

namespace ford {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool fits(i128 v) { return v > static_cast<i128>(kMin) && v <= static_cast<i128>(kMax); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

mpz_class to_mpz(std::int64_t v) {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), v);
    return z;
}

bool mpz_fits_i64(const mpz_class& z) {
    // INT64_MIN is excluded so that negation never overflows on the small path.
    return mpz_sizeinbase(z.get_mpz_t(), 2) <= 63;
}

std::int64_t mpz_to_i64(const mpz_class& z) {
    std::int64_t out = 0;
    std::size_t count = 0;
    std::uint64_t mag = 0;
    mpz_export(&mag, &count, -1, sizeof(mag), 0, 0, z.get_mpz_t());
    out = static_cast<std::int64_t>(mag);
    return sgn(z) < 0 ? -out : out;
}

}  // namespace

Rational::Rational(std::int64_t value) {
    if (value == std::numeric_limits<std::int64_t>::min()) {
        assign_big(mpq_class(to_mpz(value)));
    } else {
        num_ = value;
    }
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw PreconditionError("zero denominator");
    i128 n = num;
    i128 d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    u128 g = gcd128(uabs(n), static_cast<u128>(d));
    if (g > 1) {
        n /= static_cast<i128>(g);
        d /= static_cast<i128>(g);
    }
    if (fits(n) && fits(d)) {
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    } else {
        mpq_class q(to_mpz(num), to_mpz(den));
        q.canonicalize();
        assign_big(std::move(q));
    }
}

Rational::Rational(const mpq_class& value) {
    mpq_class q = value;
    q.canonicalize();
    assign_big(std::move(q));
}

Rational::Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
    if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
}

Rational& Rational::operator=(const Rational& other) {
    if (this == &other) return *this;
    num_ = other.num_;
    den_ = other.den_;
    if (other.big_) {
        big_ = std::make_unique<mpq_class>(*other.big_);
    } else {
        big_.reset();
    }
    return *this;
}

void Rational::assign_big(mpq_class value) {
    const mpz_class& n = value.get_num();
    const mpz_class& d = value.get_den();
    if (mpz_fits_i64(n) && mpz_fits_i64(d)) {
        num_ = mpz_to_i64(n);
        den_ = mpz_to_i64(d);
        big_.reset();
    } else {
        num_ = 0;
        den_ = 1;
        big_ = std::make_unique<mpq_class>(std::move(value));
    }
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    auto start = s.find_first_not_of(" \t");
    auto stop = s.find_last_not_of(" \t");
    if (start == std::string::npos) throw ParseError("empty rational");
    s = s.substr(start, stop - start + 1);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9') return false;
        }
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den)) {
        throw ParseError("cannot parse rational '" + std::string(text) + "'");
    }
    mpz_class n(num, 10);
    mpz_class d(den, 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    mpq_class q(n, d);
    q.canonicalize();
    Rational r;
    r.assign_big(std::move(q));
    return r;
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const noexcept {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    return mpq_class(to_mpz(num_), to_mpz(den_));
}

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : to_mpz(num_); }
mpz_class Rational::denominator() const { return big_ ? mpz_class(big_->get_den()) : to_mpz(den_); }

double Rational::to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

mpz_class Rational::floor() const {
    if (!big_) {
        std::int64_t q = num_ / den_;
        if ((num_ % den_ != 0) && (num_ < 0)) --q;
        return to_mpz(q);
    }
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return out;
}

mpz_class Rational::round_half_down() const {
    // ceil(x - 1/2)
    Rational shifted = *this - Rational(1, 2);
    mpz_class f = shifted.floor();
    if (!shifted.is_integer()) f += 1;
    return f;
}

std::string Rational::to_string() const {
    if (big_) {
        return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_compact_string() const {
    if (is_integer()) return numerator().get_str();
    return to_string();
}

Rational Rational::operator-() const {
    if (big_) return Rational(mpq_class(-*big_));
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (den_ == rhs.den_) {
            i128 n = static_cast<i128>(num_) + rhs.num_;
            if (den_ == 1 && fits(n)) {
                num_ = static_cast<std::int64_t>(n);
                return *this;
            }
            u128 g = gcd128(uabs(n), static_cast<u128>(den_));
            i128 d = den_;
            if (g > 1) {
                n /= static_cast<i128>(g);
                d /= static_cast<i128>(g);
            }
            if (fits(n)) {
                num_ = static_cast<std::int64_t>(n);
                den_ = static_cast<std::int64_t>(d);
                return *this;
            }
        } else {
            std::uint64_t g = gcd64(static_cast<std::uint64_t>(den_), static_cast<std::uint64_t>(rhs.den_));
            i128 a = den_ / static_cast<std::int64_t>(g);
            i128 b = rhs.den_ / static_cast<std::int64_t>(g);
            i128 n = static_cast<i128>(num_) * b + static_cast<i128>(rhs.num_) * a;
            i128 d = a * rhs.den_;
            u128 h = gcd128(uabs(n), static_cast<u128>(d));
            if (h > 1) {
                n /= static_cast<i128>(h);
                d /= static_cast<i128>(h);
            }
            if (fits(n) && fits(d)) {
                num_ = static_cast<std::int64_t>(n);
                den_ = static_cast<std::int64_t>(d);
                return *this;
            }
        }
    }
    assign_big(to_mpq() + rhs.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (num_ == 0 || rhs.num_ == 0) {
            num_ = 0;
            den_ = 1;
            return *this;
        }
        std::uint64_t g1 = gcd64(static_cast<std::uint64_t>(num_ < 0 ? -num_ : num_),
                                 static_cast<std::uint64_t>(rhs.den_));
        std::uint64_t g2 = gcd64(static_cast<std::uint64_t>(rhs.num_ < 0 ? -rhs.num_ : rhs.num_),
                                 static_cast<std::uint64_t>(den_));
        i128 n = static_cast<i128>(num_ / static_cast<std::int64_t>(g1)) *
                 (rhs.num_ / static_cast<std::int64_t>(g2));
        i128 d = static_cast<i128>(den_ / static_cast<std::int64_t>(g2)) *
                 (rhs.den_ / static_cast<std::int64_t>(g1));
        if (fits(n) && fits(d)) {
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
            return *this;
        }
    }
    assign_big(to_mpq() * rhs.to_mpq());
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) throw PreconditionError("division by zero");
    if (!rhs.big_) {
        Rational inv;
        inv.num_ = rhs.num_ < 0 ? -rhs.den_ : rhs.den_;
        inv.den_ = rhs.num_ < 0 ? -rhs.num_ : rhs.num_;
        return *this *= inv;
    }
    assign_big(to_mpq() / rhs.to_mpq());
    return *this;
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical: a value is small iff it fits
}

int compare(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        i128 l = static_cast<i128>(a.num_) * b.den_;
        i128 r = static_cast<i128>(b.num_) * a.den_;
        return (l > r) - (l < r);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return (c > 0) - (c < 0);
}

std::size_t Rational::hash() const noexcept {
    if (!big_) {
        std::size_t h = std::hash<std::int64_t>{}(num_);
        return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
    std::size_t h = mpz_get_ui(big_->get_num_mpz_t()) ^ (mpz_sizeinbase(big_->get_num_mpz_t(), 2) << 1);
    return h ^ (mpz_get_ui(big_->get_den_mpz_t()) * 0x9e3779b97f4a7c15ULL);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_compact_string(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

bool exact_sqrt(const Rational& r, Rational& out) {
    if (r.sign() < 0) return false;
    mpz_class n = r.numerator();
    mpz_class d = r.denominator();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    out = Rational(mpq_class(sn, sd));
    return true;
}

void sqrt_bounds(const Rational& r, Rational& lo, Rational& hi, unsigned precision_bits) {
    if (r.sign() < 0) throw PreconditionError("square root of a negative rational");
    // floor(sqrt(r * 4^k)) / 2^k brackets sqrt(r) within 2^-k.
    mpz_class scale = mpz_class(1) << (2 * precision_bits);
    mpz_class scaled;
    mpz_class num = r.numerator() * scale;
    mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), r.denominator().get_mpz_t());
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    mpz_class denom = mpz_class(1) << precision_bits;
    lo = Rational(mpq_class(root, denom));
    hi = Rational(mpq_class(root + 1, denom));
}

}  // namespace ford
