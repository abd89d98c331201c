#ifndef POLYGRID_GCD_HPP
#define POLYGRID_GCD_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "polygrid/factor_univariate.hpp"
#include "polygrid/polynomial.hpp"
#include "polygrid/rng.hpp"

namespace polygrid {

// Pseudo-remainder of f by g with respect to var:
//   prem(f,g) = rem(lc_g^(deg f - deg g + 1) * f, g)  in (R[others])[var].
inline MultiPoly pseudo_rem(const MultiPoly& f, const MultiPoly& g, std::size_t var) {
    long dg = g.degree_in_or(var, -1);
    require(dg >= 0, errc::bad_argument, "pseudo-division by polynomial without the variable");
    MultiPoly lc_g = g.leading_coeff_in(var);
    MultiPoly r = f;
    long e = f.degree_in_or(var, -1) - dg + 1;
    while (!r.is_zero() && r.degree_in_or(var) >= dg) {
        long dr = *r.degree_in(var);
        MultiPoly lead = r.leading_coeff_in(var);
        Monomial shift(f.arena()->count(), 0);
        shift[var] = static_cast<std::uint32_t>(dr - dg);
        r = lc_g * r - g.times_term(shift, Rat(1)) * lead;
        e -= 1;
    }
    // Match the prem normalization exactly; subresultant bookkeeping needs it.
    for (; e > 0; --e) r = r * lc_g;
    return r;
}

namespace detail {

constexpr std::uint64_t kProbePrime = 2305843009213693951ULL; // 2^61 - 1

// Image of f in Z_p[var] under var_i -> point[i] (all variables except
// `var`). nullopt when a coefficient denominator is divisible by p.
inline std::optional<uzx::PX> eval_mod_p(const MultiPoly& f, std::size_t var,
                                         const std::vector<std::uint64_t>& point,
                                         std::uint64_t p) {
    uzx::PX out(static_cast<std::size_t>(f.degree_in_or(var, 0)) + 1, 0);
    Int tmp;
    for (const auto& [m, c] : f.terms()) {
        mpz_mod_ui(tmp.get_mpz_t(), c.den().get_mpz_t(), p);
        std::uint64_t den = tmp.get_ui();
        if (den == 0) return std::nullopt;
        mpz_mod_ui(tmp.get_mpz_t(), c.num().get_mpz_t(), p);
        std::uint64_t val = uzx::mulmod(tmp.get_ui(), uzx::invmod(den, p), p);
        for (std::size_t v = 0; v < m.size(); ++v) {
            if (v == var || m[v] == 0) continue;
            val = uzx::mulmod(val, uzx::powmod_u(point[v], m[v], p), p);
        }
        out[m[var]] = (out[m[var]] + val) % p;
    }
    uzx::ptrim(out);
    return out;
}

// One-sided certificate that gcd(a, b) has var-degree zero: specialize the
// other variables at random residues, run Euclid in Z_p[var]. If the image
// gcd is a nonzero constant and neither image dropped var-degree, the true
// gcd is var-free (a specialization can only enlarge the gcd). Exact and
// cheap; a nontrivial image is merely inconclusive.
inline bool coprime_probe(const MultiPoly& a, const MultiPoly& b, std::size_t var) {
    const std::uint64_t p = kProbePrime;
    SplitMix64 rng(0x706f6c7967726964ULL); // fixed stream; probe is deterministic
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<std::uint64_t> point(a.arena()->count(), 0);
        for (auto& x : point) x = rng.below(p);
        auto ia = eval_mod_p(a, var, point, p);
        auto ib = eval_mod_p(b, var, point, p);
        if (!ia || !ib) continue;
        if (uzx::pdeg(*ia) != a.degree_in_or(var, 0)) continue; // lc collapsed
        if (uzx::pdeg(*ib) != b.degree_in_or(var, 0)) continue;
        uzx::PX g = uzx::pgcd(*ia, *ib, p);
        return uzx::pdeg(g) == 0;
    }
    return false;
}

// Monte-Carlo rejection for b | a: a ring morphism maps divisible pairs to
// divisible pairs, so a non-divisible univariate image is a certain "no".
inline bool divides_probe(const MultiPoly& b, const MultiPoly& a) {
    if (a.is_zero() || b.is_constant()) return true;
    const std::uint64_t p = kProbePrime;
    std::size_t var = 0;
    long best = 0;
    for (std::size_t v = 0; v < b.arena()->count(); ++v)
        if (b.degree_in_or(v, 0) > best) {
            best = b.degree_in_or(v, 0);
            var = v;
        }
    if (best == 0) return true;
    SplitMix64 rng(0x6469766964657321ULL);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<std::uint64_t> point(a.arena()->count(), 0);
        for (auto& x : point) x = rng.below(p);
        auto ia = eval_mod_p(a, var, point, p);
        auto ib = eval_mod_p(b, var, point, p);
        if (!ia || !ib || ib->empty()) continue;
        uzx::PX r = uzx::prem(*ia, *ib, p);
        return r.empty();
    }
    return true; // inconclusive: let the exact division decide
}

} // namespace detail

inline MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

// Content of `a` with respect to var: gcd of the var-coefficients, with the
// rational content folded in so that content * primitive part == a exactly.
inline MultiPoly content_in(const MultiPoly& a, std::size_t var) {
    if (a.is_zero()) return a;
    MultiPoly c(a.arena());
    Int unum = 0, uden = 1;
    for (const auto& coeff : a.coeffs_in(var)) {
        if (coeff.is_zero()) continue;
        if (!c.is_constant() || c.is_zero()) c = poly_gcd(c, coeff);
        Rat u = coeff.unit_part().abs();
        unum = polygrid::gcd(unum, u.num());
        uden = polygrid::lcm(uden, u.den());
    }
    return c.scaled(Rat(unum, uden));
}

inline MultiPoly primitive_part_in(const MultiPoly& a, std::size_t var) {
    if (a.is_zero()) return a;
    return MultiPoly::div_exact(a, content_in(a, var)).normalized();
}

// Multivariate gcd over Q via primitive subresultant-style PRS, recursing on
// the variable of lowest degree. Canonical output: integer-primitive with
// positive leading (grlex) coefficient; poly_gcd(a, 0) = normalized(a).
inline MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    if (a.is_constant() || b.is_constant())
        return MultiPoly::constant(a.arena(), Rat(1));
    if (a == b) return a.normalized();

    // Main variable: lowest positive max-degree across the two operands.
    std::size_t var = 0;
    long best = -1;
    for (std::size_t v = 0; v < a.arena()->count(); ++v) {
        long d = std::max(a.degree_in_or(v, 0), b.degree_in_or(v, 0));
        if (d >= 1 && (best < 0 || d < best)) {
            best = d;
            var = v;
        }
    }
    require(best >= 1, errc::internal, "nonconstant polynomials without variables");

    // If the variable is missing from one side, only contents can be shared.
    if (a.degree_in_or(var, 0) == 0) return poly_gcd(a, content_in(b, var));
    if (b.degree_in_or(var, 0) == 0) return poly_gcd(content_in(a, var), b);

    if (detail::coprime_probe(a, b, var))
        return poly_gcd(content_in(a, var), content_in(b, var));

    MultiPoly ca = content_in(a, var), cb = content_in(b, var);
    MultiPoly cont = poly_gcd(ca, cb);
    MultiPoly f = MultiPoly::div_exact(a, ca).normalized();
    MultiPoly g = MultiPoly::div_exact(b, cb).normalized();
    if (f.degree_in_or(var) < g.degree_in_or(var)) std::swap(f, g);

    while (true) {
        if (detail::divides_probe(g, f) && MultiPoly::divides(g, f)) {
            return (cont * g).normalized();
        }
        MultiPoly r = pseudo_rem(f, g, var);
        if (r.is_zero()) return (cont * g).normalized();
        if (r.degree_in_or(var, 0) == 0) return cont.normalized();
        f = g;
        g = primitive_part_in(r, var);
    }
}

// Squarefree part (radical): same zero set, every irreducible factor once.
inline MultiPoly squarefree_part(const MultiPoly& p) {
    if (p.is_zero()) return p;
    if (p.is_constant()) return MultiPoly::constant(p.arena(), Rat(1));
    MultiPoly q = p.normalized();
    // Peel monomial content down to exponent one.
    Monomial mc = q.terms()[0].first;
    for (const auto& [m, c] : q.terms()) mc = mono_gcd(mc, m);
    if (mono_degree(mc) > 0) {
        q = MultiPoly::div_exact(q, MultiPoly::from_terms(q.arena(), {{mc, Rat(1)}}));
        Monomial once = mc;
        for (auto& e : once) e = e ? 1 : 0;
        MultiPoly rest = squarefree_part(q);
        return (rest.times_term(once, Rat(1))).normalized();
    }
    std::size_t var = 0;
    long best = -1;
    for (std::size_t v = 0; v < q.arena()->count(); ++v) {
        long d = q.degree_in_or(v, 0);
        if (d >= 1 && (best < 0 || d < best)) {
            best = d;
            var = v;
        }
    }
    if (best < 0) return MultiPoly::constant(p.arena(), Rat(1));
    MultiPoly c = content_in(q, var);
    MultiPoly pp = MultiPoly::div_exact(q, c).normalized();
    MultiPoly g = poly_gcd(pp, pp.derivative(var));
    MultiPoly sf = MultiPoly::div_exact(pp, g).normalized();
    return (squarefree_part(c) * sf).normalized();
}

struct SquarefreeFactor {
    MultiPoly base;
    unsigned multiplicity;
};

namespace detail {

// Yun's algorithm on a var-primitive polynomial.
inline void yun_in(const MultiPoly& f0, std::size_t var, std::vector<SquarefreeFactor>& out) {
    MultiPoly f = f0;
    MultiPoly df = f.derivative(var);
    MultiPoly g = poly_gcd(f, df);
    MultiPoly c = MultiPoly::div_exact(f, g);
    MultiPoly d = MultiPoly::div_exact(df, g) - c.derivative(var);
    unsigned i = 1;
    while (!(c.is_constant())) {
        MultiPoly a = poly_gcd(c, d);
        if (!a.is_constant()) out.push_back({a.normalized(), i});
        c = MultiPoly::div_exact(c, a);
        d = MultiPoly::div_exact(d, a) - c.derivative(var);
        ++i;
    }
}

} // namespace detail

// Squarefree decomposition: p = unit * prod base^multiplicity, the bases
// pairwise coprime and squarefree. A constant entry carries the unit when
// it is not 1, so the product always reconstructs p exactly.
inline std::vector<SquarefreeFactor> squarefree_decompose(const MultiPoly& p) {
    require(!p.is_zero(), errc::bad_argument, "squarefree decomposition of zero");
    std::vector<SquarefreeFactor> parts;
    MultiPoly work = p;
    // Recurse content-by-content until constant.
    while (!work.is_constant()) {
        std::size_t var = 0;
        long best = -1;
        for (std::size_t v = 0; v < work.arena()->count(); ++v) {
            long d = work.degree_in_or(v, 0);
            if (d >= 1 && (best < 0 || d < best)) {
                best = d;
                var = v;
            }
        }
        MultiPoly c = content_in(work, var);
        MultiPoly pp = MultiPoly::div_exact(work, c).normalized();
        detail::yun_in(pp, var, parts);
        work = c;
    }
    // Unit = p / product of recovered powers.
    MultiPoly prod = MultiPoly::constant(p.arena(), Rat(1));
    for (const auto& f : parts) prod = prod * f.base.pow(f.multiplicity);
    MultiPoly unit = MultiPoly::div_exact(p, prod);
    require(unit.is_constant(), errc::internal, "squarefree unit is not constant");
    std::sort(parts.begin(), parts.end(), [](const SquarefreeFactor& x, const SquarefreeFactor& y) {
        if (x.multiplicity != y.multiplicity) return x.multiplicity < y.multiplicity;
        return grlex_less(x.base.leading_term().first, y.base.leading_term().first);
    });
    if (!unit.constant_value().is_one())
        parts.insert(parts.begin(), {unit, 1});
    return parts;
}

} // namespace polygrid

#endif
