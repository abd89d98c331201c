#ifndef POLYGRID_RESULTANT_HPP
#define POLYGRID_RESULTANT_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "polygrid/gcd.hpp"
#include "polygrid/linalg.hpp"
#include "polygrid/polynomial.hpp"
#include "polygrid/rng.hpp"

namespace polygrid {

// Fraction-free Bareiss determinant over the polynomial ring; every division
// is exact by the Bareiss identity. Pivot rows are chosen by sparsity among
// the admissible ones, which only flips the tracked sign.
inline MultiPoly det_poly_bareiss(PolyMatrix m, const ArenaPtr& arena) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        require(row.size() == n, errc::dimension_mismatch, "determinant of non-square matrix");
    if (n == 0) return MultiPoly::constant(arena, Rat(1));
    int sign = 1;
    MultiPoly prev = MultiPoly::constant(arena, Rat(1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t pivot = n;
        for (std::size_t r = k; r < n; ++r) {
            if (m[r][k].is_zero()) continue;
            if (pivot == n || m[r][k].term_count() < m[pivot][k].term_count()) pivot = r;
        }
        if (pivot == n) return MultiPoly(arena); // zero column: singular
        if (pivot != k) {
            std::swap(m[pivot], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = MultiPoly::div_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
            m[i][k] = MultiPoly(arena);
        }
        prev = m[k][k];
    }
    return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Sylvester matrix of f and g with respect to var: (deg f + deg g) square,
// f-rows first. Entries live in the same arena with the var cleared.
inline PolyMatrix sylvester_matrix(const MultiPoly& f, const MultiPoly& g, std::size_t var) {
    long m = f.degree_in_or(var, -1), n = g.degree_in_or(var, -1);
    require(m >= 1 && n >= 1, errc::bad_argument, "sylvester matrix needs positive degrees");
    auto fc = f.coeffs_in(var), gc = g.coeffs_in(var);
    std::size_t size = static_cast<std::size_t>(m + n);
    PolyMatrix s(size, std::vector<MultiPoly>(size, MultiPoly(f.arena())));
    for (long r = 0; r < n; ++r)
        for (long j = 0; j <= m; ++j) s[r][r + j] = fc[static_cast<std::size_t>(m - j)];
    for (long r = 0; r < m; ++r)
        for (long j = 0; j <= n; ++j) s[n + r][r + j] = gc[static_cast<std::size_t>(n - j)];
    return s;
}

// Resultant of f and g with respect to var, as the determinant of the
// Sylvester matrix (f-rows first). Vanishes identically iff f and g share a
// factor of positive var-degree over the fraction field of the other
// variables. When one operand has var-degree zero the determinant degenerates
// to a pure power.
inline MultiPoly sylvester_resultant(const MultiPoly& f, const MultiPoly& g, std::size_t var) {
    require(!f.is_zero() && !g.is_zero(), errc::bad_argument, "resultant of the zero polynomial");
    long m = f.degree_in_or(var, 0), n = g.degree_in_or(var, 0);
    require(m >= 1 || n >= 1, errc::bad_argument,
            "resultant: both inputs constant in the variable");
    if (m == 0) return f.pow(static_cast<unsigned long>(n));
    if (n == 0) return g.pow(static_cast<unsigned long>(m));
    return det_poly_bareiss(sylvester_matrix(f, g, var), f.arena());
}

// ---------------------------------------------------------------------------
// Macaulay resultant
// ---------------------------------------------------------------------------

namespace detail {

inline bool homogeneous_in(const MultiPoly& p, const std::vector<std::size_t>& vars, long deg) {
    for (const auto& [mono, c] : p.terms()) {
        long d = 0;
        for (auto v : vars) d += mono[v];
        if (d != deg) return false;
    }
    return true;
}

// Monomials of exact total degree D in the given variables (others zero).
inline std::vector<Monomial> monomials_of_degree(std::size_t nvars_total,
                                                 const std::vector<std::size_t>& vars, long D) {
    std::vector<Monomial> out;
    Monomial m(nvars_total, 0);
    auto rec = [&](auto&& self, std::size_t pos, long rem) -> void {
        if (pos + 1 == vars.size()) {
            m[vars[pos]] = static_cast<std::uint32_t>(rem);
            out.push_back(m);
            m[vars[pos]] = 0;
            return;
        }
        for (long e = rem; e >= 0; --e) {
            m[vars[pos]] = static_cast<std::uint32_t>(e);
            self(self, pos + 1, rem - e);
        }
        m[vars[pos]] = 0;
    };
    rec(rec, 0, D);
    return out;
}

} // namespace detail

struct MacaulayMatrices {
    PolyMatrix numerator;
    PolyMatrix denominator;
};

// Classical Macaulay construction for k homogeneous polynomials in the k
// given variables (coefficients may involve further parameter variables).
// Row of monomial x^a (deg D = sum(d_i-1)+1): (x^a / x_i^{d_i}) * f_i where i
// is the first index with a_i >= d_i. The denominator minor is indexed by the
// monomials that are non-reduced for at least two indices.
inline MacaulayMatrices macaulay_matrices(const std::vector<MultiPoly>& system,
                                          const std::vector<std::size_t>& vars) {
    const std::size_t k = system.size();
    require(k >= 2, errc::bad_argument, "macaulay needs at least two polynomials");
    require(vars.size() == k, errc::dimension_mismatch,
            "macaulay: variable count must equal polynomial count");
    const ArenaPtr& arena = system[0].arena();
    std::vector<long> degs(k);
    long D = 1;
    for (std::size_t i = 0; i < k; ++i) {
        require(!system[i].is_zero(), errc::bad_argument, "macaulay: zero polynomial in system");
        long d = 0;
        for (const auto& [mono, c] : system[i].terms()) {
            long t = 0;
            for (auto v : vars) t += mono[v];
            d = std::max(d, t);
        }
        require(d >= 1, errc::bad_argument, "macaulay: polynomial of degree zero");
        require(detail::homogeneous_in(system[i], vars, d), errc::bad_argument,
                "macaulay: system is not homogeneous in the given variables");
        degs[i] = d;
        D += d - 1;
    }
    auto monos = detail::monomials_of_degree(arena->count(), vars, D);
    std::size_t n = monos.size();
    std::map<Monomial, std::size_t, GrlexLess> col_index;
    for (std::size_t j = 0; j < n; ++j) col_index.emplace(monos[j], j);

    PolyMatrix num(n, std::vector<MultiPoly>(n, MultiPoly(arena)));
    std::vector<bool> in_minor(n, false);
    for (std::size_t r = 0; r < n; ++r) {
        int big = 0;
        std::size_t owner = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (monos[r][vars[i]] >= static_cast<std::uint32_t>(degs[i])) {
                ++big;
                if (owner == k) owner = i;
            }
        }
        in_minor[r] = big >= 2;
        Monomial shift = monos[r];
        shift[vars[owner]] -= static_cast<std::uint32_t>(degs[owner]);
        MultiPoly row_poly = system[owner].times_term(shift, Rat(1));
        for (const auto& [mono, c] : row_poly.terms()) {
            Monomial key(arena->count(), 0);
            Monomial param(arena->count(), 0);
            bool split_ok = true;
            for (std::size_t v = 0; v < mono.size(); ++v) param[v] = mono[v];
            for (auto v : vars) {
                key[v] = mono[v];
                param[v] = 0;
            }
            (void)split_ok;
            auto it = col_index.find(key);
            require(it != col_index.end(), errc::internal, "macaulay column lookup failed");
            num[r][it->second] =
                num[r][it->second] + MultiPoly::from_terms(arena, {{param, c}});
        }
    }
    MacaulayMatrices out;
    out.numerator = std::move(num);
    std::vector<std::size_t> minor_rows;
    for (std::size_t r = 0; r < n; ++r)
        if (in_minor[r]) minor_rows.push_back(r);
    out.denominator.assign(minor_rows.size(), std::vector<MultiPoly>(minor_rows.size(), MultiPoly(arena)));
    for (std::size_t a = 0; a < minor_rows.size(); ++a)
        for (std::size_t b = 0; b < minor_rows.size(); ++b)
            out.denominator[a][b] = out.numerator[minor_rows[a]][minor_rows[b]];
    return out;
}

namespace detail {

inline std::optional<Rat> det_at(const PolyMatrix& m, const std::map<std::size_t, Rat>& bind) {
    RatMatrix num(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            num.at(i, j) = m[i][j].partial_evaluate(bind).constant_value();
    Rat d = determinant(num);
    if (d.is_zero()) return std::nullopt;
    return d;
}

// Tensor Newton interpolation of det(num)/det(den) over the parameter
// variables; bails out (nullopt) when a denominator evaluation vanishes so
// the caller can retry with a fresh node offset.
inline std::optional<MultiPoly> ratio_interp(const MacaulayMatrices& mm, const ArenaPtr& arena,
                                             const std::vector<std::size_t>& pvars,
                                             const std::vector<long>& bounds, std::size_t vi,
                                             std::map<std::size_t, Rat>& bind, long offset) {
    if (vi == pvars.size()) {
        auto den = det_at(mm.denominator, bind);
        if (!den) return std::nullopt;
        RatMatrix num(mm.numerator.size(), mm.numerator.size());
        for (std::size_t i = 0; i < mm.numerator.size(); ++i)
            for (std::size_t j = 0; j < mm.numerator.size(); ++j)
                num.at(i, j) = mm.numerator[i][j].partial_evaluate(bind).constant_value();
        return MultiPoly::constant(arena, determinant(num) / *den);
    }
    std::size_t v = pvars[vi];
    std::vector<Rat> nodes;
    std::vector<MultiPoly> values;
    for (long t = 0; t <= bounds[vi]; ++t) {
        Rat node(offset + t);
        bind[v] = node;
        auto val = ratio_interp(mm, arena, pvars, bounds, vi + 1, bind, offset);
        bind.erase(v);
        if (!val) return std::nullopt;
        nodes.push_back(node);
        values.push_back(std::move(*val));
    }
    std::vector<MultiPoly> dd = values;
    for (std::size_t k = 1; k < dd.size(); ++k)
        for (std::size_t i = dd.size() - 1; i >= k; --i)
            dd[i] = (dd[i] - dd[i - 1]).scaled(Rat(1) / (nodes[i] - nodes[i - k]));
    MultiPoly x = MultiPoly::var(arena, v);
    MultiPoly result = dd.back();
    for (std::size_t i = dd.size() - 1; i-- > 0;)
        result = result * (x - MultiPoly::constant(arena, nodes[i])) + dd[i];
    return result;
}

} // namespace detail

// Macaulay resultant of k (<= 4) polynomials, homogeneous in the k given
// variables, with coefficients in the remaining (parameter) variables:
// det(numerator) / det(denominator minor), division exact. When the
// denominator vanishes identically the ratio is reconstructed by evaluating
// the parameters at integers and interpolating, retrying with up to 8 fresh
// evaluation sets.
inline MultiPoly macaulay_resultant(const std::vector<MultiPoly>& system,
                                    const std::vector<std::size_t>& vars, std::uint64_t seed = 0,
                                    long interp_budget = 1 << 14) {
    require(system.size() <= 4, errc::budget_exceeded, "macaulay size guard: k <= 4");
    const ArenaPtr& arena = system[0].arena();
    auto mm = macaulay_matrices(system, vars);
    MultiPoly den = det_poly_bareiss(mm.denominator, arena);
    if (!den.is_zero()) {
        MultiPoly num = det_poly_bareiss(mm.numerator, arena);
        if (den.is_constant()) return num.scaled(Rat(1) / den.constant_value());
        auto q = MultiPoly::try_divide(num, den);
        if (q) return *q;
    }
    // Degenerate denominator: interpolated ratio.
    std::vector<std::size_t> pvars;
    std::vector<long> bounds;
    long grid = 1;
    for (std::size_t v = 0; v < arena->count(); ++v) {
        long bound = 0;
        for (const auto& row : mm.numerator) {
            long rb = 0;
            for (const auto& e : row) rb = std::max(rb, e.degree_in_or(v, 0));
            bound += rb;
        }
        if (bound > 0) {
            pvars.push_back(v);
            bounds.push_back(bound);
            grid *= bound + 1;
            require(grid <= interp_budget, errc::budget_exceeded,
                    "macaulay interpolation grid exceeds budget");
        }
    }
    SplitMix64 rng(substream(seed, 0x6d61636175ULL));
    for (int attempt = 0; attempt < 8; ++attempt) {
        long offset = attempt == 0 ? 0 : static_cast<long>(rng.below(1 << 20));
        std::map<std::size_t, Rat> bind;
        auto r = detail::ratio_interp(mm, arena, pvars, bounds, 0, bind, offset);
        if (r) return *r;
    }
    fail(errc::degenerate, "macaulay: denominator vanished on all evaluation sets");
}

// Affine entry point used by elimination: homogenizes the system in the
// variables to eliminate (fresh homogenizing variable) and projects onto the
// remaining variables.
inline MultiPoly macaulay_resultant_affine(const std::vector<MultiPoly>& system,
                                           const std::vector<std::size_t>& elim,
                                           std::uint64_t seed = 0, long interp_budget = 1 << 14) {
    require(!system.empty(), errc::bad_argument, "macaulay: empty system");
    require(elim.size() + 1 == system.size(), errc::dimension_mismatch,
            "macaulay: need one more polynomial than eliminated variables");
    const ArenaPtr& arena = system[0].arena();
    std::vector<std::string> names = arena->names();
    std::string hname = "h~";
    while (std::find(names.begin(), names.end(), hname) != names.end()) hname += "~";
    names.push_back(hname);
    ArenaPtr ext = make_arena(std::move(names));
    std::size_t h = arena->count();
    std::vector<std::size_t> embed(arena->count());
    for (std::size_t i = 0; i < embed.size(); ++i) embed[i] = i;

    std::vector<MultiPoly> homog;
    for (const auto& f : system) {
        long d = 0;
        for (const auto& [mono, c] : f.terms()) {
            long t = 0;
            for (auto v : elim) t += mono[v];
            d = std::max(d, t);
        }
        require(d >= 1, errc::bad_argument,
                "macaulay: system polynomial has degree zero in the eliminated variables");
        std::vector<MultiPoly::Term> terms;
        for (const auto& [mono, c] : f.terms()) {
            long t = 0;
            for (auto v : elim) t += mono[v];
            Monomial m(ext->count(), 0);
            for (std::size_t v = 0; v < mono.size(); ++v) m[v] = mono[v];
            m[h] = static_cast<std::uint32_t>(d - t);
            terms.emplace_back(std::move(m), c);
        }
        homog.push_back(MultiPoly::from_terms(ext, std::move(terms)));
    }
    std::vector<std::size_t> hvars = elim;
    hvars.push_back(h);
    MultiPoly res = macaulay_resultant(homog, hvars, seed, interp_budget);
    require(!res.uses_var(h), errc::internal, "macaulay: projection uses homogenizing variable");
    std::vector<std::size_t> back(ext->count(), 0);
    for (std::size_t i = 0; i < arena->count(); ++i) back[i] = i;
    return res.remap(arena, back);
}

} // namespace polygrid

#endif
