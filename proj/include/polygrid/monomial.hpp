#ifndef POLYGRID_MONOMIAL_HPP
#define POLYGRID_MONOMIAL_HPP

#include <cstdint>
#include <numeric>
#include <vector>

#include "polygrid/error.hpp"

namespace polygrid {

// Exponent vector; length always equals the arena's variable count.
using Monomial = std::vector<std::uint32_t>;

inline long mono_degree(const Monomial& m) {
    long d = 0;
    for (auto e : m) d += e;
    return d;
}

// Graded lexicographic: higher total degree first, ties broken by the first
// differing exponent (earlier variables weigh more).
inline bool grlex_less(const Monomial& a, const Monomial& b) {
    long da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

inline bool grlex_greater(const Monomial& a, const Monomial& b) { return grlex_less(b, a); }

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// a / b when b divides a componentwise.
inline bool mono_divides(const Monomial& b, const Monomial& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] > a[i]) return false;
    return true;
}

inline Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Monomial mono_gcd(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
    return r;
}

// Enumerates all exponent vectors in `nvars` variables with total degree
// <= max_deg, in ascending grlex order. Used by Vandermonde-style matrices;
// the ordering must be stable because matrix columns are identified by it.
inline std::vector<Monomial> monomials_up_to(std::size_t nvars, long max_deg) {
    require(max_deg >= 0, errc::bad_argument, "negative degree bound");
    std::vector<Monomial> out;
    Monomial cur(nvars, 0);
    // Recursive lex enumeration per total degree.
    for (long d = 0; d <= max_deg; ++d) {
        // All compositions of d into nvars parts, lexicographically descending
        // on the exponent vector to match grlex within the degree layer.
        std::vector<Monomial> layer;
        Monomial m(nvars, 0);
        auto rec = [&](auto&& self, std::size_t pos, long rem) -> void {
            if (pos + 1 == nvars) {
                m[pos] = static_cast<std::uint32_t>(rem);
                layer.push_back(m);
                return;
            }
            for (long e = rem; e >= 0; --e) {
                m[pos] = static_cast<std::uint32_t>(e);
                self(self, pos + 1, rem - e);
            }
            m[pos] = 0;
        };
        if (nvars == 0) {
            if (d == 0) out.push_back(Monomial{});
            continue;
        }
        rec(rec, 0, d);
        // descending lex within the layer == ascending grlex overall reversed;
        // we want ascending grlex: smaller-first within degree layer.
        for (auto it = layer.rbegin(); it != layer.rend(); ++it) out.push_back(*it);
    }
    return out;
}

} // namespace polygrid

#endif
