#ifndef POLYGRID_RATIONAL_HPP
#define POLYGRID_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "polygrid/error.hpp"

namespace polygrid {

using Int = mpz_class;

// Exact rational, always in lowest terms with positive denominator; zero is
// 0/1. mpq_class does not canonicalize on construction, so every constructor
// that can receive a non-canonical fraction goes through canonicalize().
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(const Int& n) : v_(n) {}
    Rat(const Int& num, const Int& den) : v_(num, den) {
        require(den != 0, errc::bad_argument, "rational with zero denominator");
        v_.canonicalize();
    }
    Rat(long num, long den) : Rat(Int(num), Int(den)) {}

    static Rat from_mpq(const mpq_class& q) {
        Rat r;
        r.v_ = q;
        return r;
    }

    const Int num() const { return v_.get_num(); }
    const Int den() const { return v_.get_den(); }
    const mpq_class& mpq() const { return v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    Rat operator-() const { return from_mpq(-v_); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        require(!o.is_zero(), errc::bad_argument, "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    Rat abs() const { return from_mpq(::abs(v_)); }

    // "num" or "num/den"; exact, no floating point anywhere.
    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

private:
    mpq_class v_;
};

// Parses "num" or "num/den" with optional leading sign.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        fail(errc::syntax, "malformed rational literal: '" + s + "'");
    }
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    return Rat(pow_int(base.num(), e), pow_int(base.den(), e));
}

} // namespace polygrid

#endif
