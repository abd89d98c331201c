#ifndef POLYGRID_RATIONAL_POW_HPP
#define POLYGRID_RATIONAL_POW_HPP

#include "polygrid/rational.hpp"

namespace polygrid {

// Dyadic bounds on x^(p/q) for rational x >= 0 and rational exponent >= 0,
// exact to 2^-precision_bits: the bound expressions of the combinatorial
// theorems carry fractional powers, and reports must never round through
// floating point. round_up=true gives the least N/2^F with (N/2^F)^q >= x^p;
// round_up=false the greatest with <=.
inline Rat rat_pow_bound(const Rat& x, const Rat& exponent, bool round_up,
                         unsigned precision_bits = 32) {
    require(x >= Rat(0), errc::bad_argument, "fractional power of a negative value");
    require(exponent >= Rat(0), errc::bad_argument, "negative exponent not supported");
    if (x.is_zero()) return Rat(0);
    unsigned long p = 0, q = 1;
    require(mpz_fits_ulong_p(exponent.num().get_mpz_t()) &&
                mpz_fits_ulong_p(exponent.den().get_mpz_t()),
            errc::budget_exceeded, "exponent too large");
    p = exponent.num().get_ui();
    q = exponent.den().get_ui();
    if (p == 0) return Rat(1);

    // Smallest/largest N with N^q * b^p (<=|>=) a^p * 2^(F*q).
    Int a = x.num(), b = x.den();
    Int lhs_target = pow_int(a, p) * pow_int(Int(2), static_cast<unsigned long>(precision_bits) * q);
    Int bp = pow_int(b, p);
    // Integer q-th root of floor(lhs_target / bp) as the starting guess.
    Int t = lhs_target / bp;
    Int n;
    mpz_root(n.get_mpz_t(), t.get_mpz_t(), q);
    auto cmp = [&](const Int& candidate) {
        // sign of candidate^q * bp - lhs_target
        Int lhs = pow_int(candidate, q) * bp;
        return ::cmp(lhs, lhs_target);
    };
    if (round_up) {
        while (cmp(n) < 0) n += 1;
        while (n > 0 && cmp(n - 1) >= 0) n -= 1;
    } else {
        while (cmp(n) > 0) n -= 1;
        while (cmp(n + 1) <= 0) n += 1;
    }
    return Rat(n, pow_int(Int(2), precision_bits));
}

inline Rat rat_pow_upper(const Rat& x, const Rat& e, unsigned bits = 32) {
    return rat_pow_bound(x, e, true, bits);
}
inline Rat rat_pow_lower(const Rat& x, const Rat& e, unsigned bits = 32) {
    return rat_pow_bound(x, e, false, bits);
}

} // namespace polygrid

#endif
