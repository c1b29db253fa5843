#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace vbg {

// Coefficient field: the rationals (modulus 0) or a prime field.
struct Field {
    std::uint32_t p = 0;

    static Field rationals() { return {}; }
    static Field prime(std::uint32_t p);
    static Field parse(const std::string& text);  // "q" or "fp:P"

    bool is_rational() const { return p == 0; }
    std::string to_string() const;

    friend bool operator==(Field a, Field b) { return a.p == b.p; }
};

// Exact field element. Rationals keep a 64-bit fast path and spill into
// GMP when a result no longer fits; residues are stored reduced.
//
// A rational scalar combined with a residue is first mapped into F_p, so
// integer literals such as Scalar(-1) mix freely with either kind.
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : n_(v) {}  // NOLINT: literals are intentional
    static Scalar rational(const mpq_class& q);
    static Scalar rational(long num, long den);
    static Scalar residue(long v, std::uint32_t p);
    static Scalar parse(const std::string& text, Field f);

    Field field() const { return Field{p_}; }
    bool is_zero() const;
    bool is_one() const;
    std::string to_string() const;
    mpq_class to_mpq() const;  // rationals only
    long residue_value() const { return static_cast<long>(n_); }

    Scalar in(Field f) const;  // coerce into f
    Scalar inverse() const;

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    static Scalar from_big(mpq_class q);
    static void align(Scalar& a, Scalar& b);

    std::uint32_t p_ = 0;
    std::int64_t n_ = 0;
    std::int64_t d_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

}  // namespace vbg
