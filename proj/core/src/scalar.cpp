#include "vbg/scalar.hpp"

#include <limits>
#include <stdexcept>

#include "vbg/errors.hpp"

namespace vbg {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(i128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

mpz_class to_mpz(i128 v) {
    bool neg = v < 0;
    u128 mag = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::int64_t mod_pow(std::int64_t b, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1, x = static_cast<std::uint64_t>(b) % p;
    while (e) {
        if (e & 1) r = r * x % p;
        x = x * x % p;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

}  // namespace

Field Field::prime(std::uint32_t p) {
    if (!is_prime(p)) throw Error("BadField", "modulus " + std::to_string(p) + " is not prime");
    return Field{p};
}

Field Field::parse(const std::string& text) {
    if (text == "q" || text == "Q") return rationals();
    if (text.rfind("fp:", 0) == 0) {
        try {
            unsigned long p = std::stoul(text.substr(3));
            if (p > std::numeric_limits<std::uint32_t>::max()) throw std::out_of_range("p");
            return prime(static_cast<std::uint32_t>(p));
        } catch (const std::logic_error&) {
        }
    }
    throw Error("BadField", "unrecognised field '" + text + "'");
}

std::string Field::to_string() const { return p == 0 ? "q" : "fp:" + std::to_string(p); }

Scalar Scalar::rational(long num, long den) {
    if (den == 0) throw Error("DivisionByZero", "zero denominator");
    i128 n = num, d = den;
    if (d < 0) n = -n, d = -d;
    u128 g = gcd128(static_cast<u128>(n < 0 ? -n : n), static_cast<u128>(d));
    if (g > 1) n /= static_cast<i128>(g), d /= static_cast<i128>(g);
    if (fits64(n) && fits64(d)) {
        Scalar s;
        s.n_ = static_cast<std::int64_t>(n);
        s.d_ = static_cast<std::int64_t>(d);
        return s;
    }
    return from_big(mpq_class(to_mpz(n), to_mpz(d)));
}

Scalar Scalar::rational(const mpq_class& q) {
    mpq_class c(q);
    c.canonicalize();
    return from_big(std::move(c));
}

Scalar Scalar::from_big(mpq_class q) {
    Scalar s;
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        s.n_ = q.get_num().get_si();
        s.d_ = q.get_den().get_si();
        return s;
    }
    s.big_ = std::make_shared<const mpq_class>(std::move(q));
    return s;
}

Scalar Scalar::residue(long v, std::uint32_t p) {
    if (p == 0) return Scalar(v);
    Scalar s;
    s.p_ = p;
    long r = v % static_cast<long>(p);
    if (r < 0) r += p;
    s.n_ = r;
    return s;
}

Scalar Scalar::parse(const std::string& text, Field f) {
    mpq_class q;
    try {
        q = mpq_class(text, 10);
    } catch (const std::invalid_argument&) {
        throw Error("BadScalar", "cannot parse field element '" + text + "'");
    }
    if (q.get_den() == 0) throw Error("DivisionByZero", "zero denominator in '" + text + "'");
    return rational(q).in(f);
}

mpq_class Scalar::to_mpq() const {
    if (p_ != 0) throw Error("FieldMismatch", "residue has no rational value");
    if (big_) return *big_;
    return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

bool Scalar::is_zero() const { return !big_ && n_ == 0; }

bool Scalar::is_one() const { return !big_ && n_ == 1 && d_ == 1; }

std::string Scalar::to_string() const {
    if (big_) return big_->get_str();
    if (p_ != 0 || d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

Scalar Scalar::in(Field f) const {
    if (f.p == p_) return *this;
    if (p_ != 0) throw Error("FieldMismatch", "cannot move an F_" + std::to_string(p_) + " element into " + f.to_string());
    unsigned long num, den;
    bool neg;
    if (big_) {
        neg = sgn(big_->get_num()) < 0;
        mpz_class a = abs(big_->get_num());
        num = mpz_fdiv_ui(a.get_mpz_t(), f.p);
        den = mpz_fdiv_ui(big_->get_den().get_mpz_t(), f.p);
    } else {
        neg = n_ < 0;
        u128 a = neg ? static_cast<u128>(-(static_cast<i128>(n_))) : static_cast<u128>(n_);
        num = static_cast<unsigned long>(a % f.p);
        den = static_cast<unsigned long>(static_cast<std::uint64_t>(d_) % f.p);
    }
    if (den == 0) throw Error("DivisionByZero", "denominator vanishes in " + f.to_string());
    long r = static_cast<long>(num * static_cast<std::uint64_t>(mod_pow(static_cast<std::int64_t>(den), f.p - 2, f.p)) % f.p);
    return residue(neg ? -r : r, f.p);
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error("DivisionByZero", "inverse of zero");
    if (p_ != 0) return residue(mod_pow(n_, p_ - 2, p_), p_);
    if (big_) return from_big(1 / *big_);
    return rational(d_ * (n_ < 0 ? -1 : 1), n_ < 0 ? -n_ : n_);
}

void Scalar::align(Scalar& a, Scalar& b) {
    if (a.p_ == b.p_) return;
    if (a.p_ == 0)
        a = a.in(Field{b.p_});
    else if (b.p_ == 0)
        b = b.in(Field{a.p_});
    else
        throw Error("FieldMismatch", "mixing F_" + std::to_string(a.p_) + " and F_" + std::to_string(b.p_));
}

Scalar Scalar::operator-() const {
    if (p_ != 0) return residue(-n_, p_);
    if (big_) return from_big(-*big_);
    return rational(-n_, d_);
}

Scalar operator+(const Scalar& x, const Scalar& y) {
    Scalar a = x, b = y;
    Scalar::align(a, b);
    if (a.p_ != 0) return Scalar::residue(static_cast<long>((a.n_ + b.n_) % a.p_), a.p_);
    if (a.big_ || b.big_) return Scalar::from_big(a.to_mpq() + b.to_mpq());
    if (b.n_ == 0) return a;
    if (a.n_ == 0) return b;
    if (a.d_ == 1 && b.d_ == 1) {
        i128 s = static_cast<i128>(a.n_) + b.n_;
        if (fits64(s)) return Scalar(static_cast<long>(s));
    }
    i128 num = static_cast<i128>(a.n_) * b.d_ + static_cast<i128>(b.n_) * a.d_;
    i128 den = static_cast<i128>(a.d_) * b.d_;
    u128 g = gcd128(static_cast<u128>(num < 0 ? -num : num), static_cast<u128>(den));
    if (g > 1) num /= static_cast<i128>(g), den /= static_cast<i128>(g);
    if (fits64(num) && fits64(den)) {
        Scalar s;
        s.n_ = static_cast<std::int64_t>(num);
        s.d_ = static_cast<std::int64_t>(den);
        return s;
    }
    return Scalar::from_big(mpq_class(to_mpz(num), to_mpz(den)));
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& x, const Scalar& y) {
    Scalar a = x, b = y;
    Scalar::align(a, b);
    if (a.p_ != 0)
        return Scalar::residue(static_cast<long>(static_cast<std::uint64_t>(a.n_) * static_cast<std::uint64_t>(b.n_) % a.p_), a.p_);
    if (a.is_zero() || b.is_zero()) return Scalar(0);
    if (a.big_ || b.big_) return Scalar::from_big(a.to_mpq() * b.to_mpq());
    if (a.d_ == 1 && b.d_ == 1) {
        i128 s = static_cast<i128>(a.n_) * b.n_;
        if (fits64(s)) return Scalar(static_cast<long>(s));
    }
    i128 num = static_cast<i128>(a.n_) * b.n_;
    i128 den = static_cast<i128>(a.d_) * b.d_;
    u128 g = gcd128(static_cast<u128>(num < 0 ? -num : num), static_cast<u128>(den));
    if (g > 1) num /= static_cast<i128>(g), den /= static_cast<i128>(g);
    if (fits64(num) && fits64(den)) {
        Scalar s;
        s.n_ = static_cast<std::int64_t>(num);
        s.d_ = static_cast<std::int64_t>(den);
        return s;
    }
    return Scalar::from_big(mpq_class(to_mpz(num), to_mpz(den)));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    Scalar x = a, y = b;
    Scalar::align(x, y);
    return x * y.inverse();
}

bool operator==(const Scalar& x, const Scalar& y) {
    if (x.p_ == y.p_ && !x.big_ && !y.big_) return x.n_ == y.n_ && x.d_ == y.d_;
    Scalar a = x, b = y;
    Scalar::align(a, b);
    if (a.p_ != 0) return a.n_ == b.n_;
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    return a.to_mpq() == b.to_mpq();
}

}  // namespace vbg
