#ifndef POLYGRID_FACTOR_HPP
#define POLYGRID_FACTOR_HPP

#include <algorithm>
#include <vector>

#include "polygrid/factor_bivariate.hpp"
#include "polygrid/factor_univariate.hpp"
#include "polygrid/gcd.hpp"

namespace polygrid {

struct FactorEntry {
    MultiPoly base; // normalized, irreducible over Q, degree >= 1
    unsigned multiplicity;
};

// unit * prod(base^multiplicity) == input, exactly.
struct Factorization {
    Rat unit{1};
    std::vector<FactorEntry> factors;
};

struct FactorOptions {
    std::size_t max_vars = 8;
    long max_degree = 32;
    long kronecker_budget = 1 << 15; // cap on the substituted univariate degree
};

namespace detail {

// Deterministic ordering for factor lists.
inline bool poly_less(const MultiPoly& a, const MultiPoly& b) {
    long da = a.degree_or(-1), db = b.degree_or(-1);
    if (da != db) return da < db;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    if (ta.size() != tb.size()) return ta.size() < tb.size();
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].first != tb[i].first) return grlex_less(ta[i].first, tb[i].first);
        if (ta[i].second != tb[i].second) return ta[i].second < tb[i].second;
    }
    return false;
}

inline uzx::ZX to_dense(const MultiPoly& p, std::size_t var) {
    uzx::ZX out(static_cast<std::size_t>(p.degree_in_or(var, -1) + 1), Int(0));
    for (const auto& [m, c] : p.terms()) {
        require(c.den() == 1, errc::internal, "expected integer coefficients");
        out[m[var]] = c.num();
    }
    return out;
}

inline MultiPoly from_dense(const uzx::ZX& f, const ArenaPtr& arena, std::size_t var) {
    std::vector<MultiPoly::Term> terms;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        Monomial m(arena->count(), 0);
        m[var] = static_cast<std::uint32_t>(i);
        terms.emplace_back(std::move(m), Rat(f[i]));
    }
    return MultiPoly::from_terms(arena, std::move(terms));
}

// Irreducible factors of a squarefree primitive univariate-in-var polynomial.
inline std::vector<MultiPoly> factor_squarefree_univar(const MultiPoly& p, std::size_t var) {
    uzx::ZX f = to_dense(p.normalized(), var);
    if (uzx::deg(f) == 1) return {p.normalized()};
    auto gs = uzx::factor_squarefree_zx(f);
    std::vector<MultiPoly> out;
    for (const auto& g : gs) out.push_back(from_dense(g, p.arena(), var));
    std::sort(out.begin(), out.end(), poly_less);
    return out;
}

inline std::vector<MultiPoly> factor_squarefree_multi(const MultiPoly& p,
                                                      const std::vector<std::size_t>& used,
                                                      const FactorOptions& opt);

// Irreducible factors of a squarefree bivariate polynomial via t-adic Hensel
// lifting: specialize vy at a good integer point, factor the small univariate
// image over Z, lift the monic factors to power-series precision 2*deg_y + 1,
// and recombine the handful of true-factor images. Far fewer recombination
// pieces than the Kronecker route on structured inputs.
inline std::vector<MultiPoly> factor_squarefree_bivar(const MultiPoly& p0, std::size_t va,
                                                      std::size_t vb, const FactorOptions& opt) {
    std::vector<MultiPoly> out;
    MultiPoly cont = content_in(p0, va); // uses vb only
    MultiPoly pp = MultiPoly::div_exact(p0, cont).normalized();
    if (!cont.is_constant())
        for (auto& f : factor_squarefree_univar(cont.normalized(), vb)) out.push_back(f);
    if (pp.is_constant()) return out;
    if (!pp.uses_var(vb)) {
        for (auto& f : factor_squarefree_univar(pp, va)) out.push_back(f);
        std::sort(out.begin(), out.end(), poly_less);
        return out;
    }
    // Main variable: the lower degree bounds the recombination pool.
    std::size_t vx = va, vy = vb;
    if (pp.degree_in_or(vb, 0) < pp.degree_in_or(va, 0)) std::swap(vx, vy);
    long dx = pp.degree_in_or(vx, 0), dy = pp.degree_in_or(vy, 0);
    std::size_t K = static_cast<std::size_t>(2 * dy + 1);

    // Good specialization point: full x-degree and squarefree image.
    long point = 0;
    bool have_point = false;
    MultiPoly image(pp.arena());
    for (long trial = 0; trial <= 120 && !have_point; ++trial) {
        long a = trial % 2 == 0 ? trial / 2 : -(trial / 2 + 1);
        MultiPoly u = pp.partial_evaluate({{vy, Rat(a)}});
        if (u.degree_in_or(vx, 0) != dx) continue;
        if (!poly_gcd(u, u.derivative(vx)).is_constant()) continue;
        point = a;
        have_point = true;
        image = u;
    }
    if (!have_point) {
        // Degenerate in every tried direction; the substitution route still works.
        auto ks = factor_squarefree_multi(pp, {va, vb}, opt);
        out.insert(out.end(), ks.begin(), ks.end());
        std::sort(out.begin(), out.end(), poly_less);
        return out;
    }

    std::vector<MultiPoly> ufactors = factor_squarefree_univar(image.normalized(), vx);
    if (ufactors.size() == 1) {
        out.push_back(pp);
        std::sort(out.begin(), out.end(), poly_less);
        return out;
    }

    // Shift vy by the point and build the series form.
    MultiPoly shifted = pp.substitute(
        {{vy, MultiPoly::var(pp.arena(), vy) + MultiPoly::constant(pp.arena(), Rat(point))}});
    bvx::BQ fbq = bvx::make_bq(static_cast<std::size_t>(dx) + 1, K);
    for (const auto& [m, c] : shifted.terms()) {
        require(m[vy] < K, errc::internal, "series precision bookkeeping");
        fbq[m[vx]][m[vy]] += c;
    }
    bvx::Series lc = fbq[static_cast<std::size_t>(dx)];
    bvx::BQ monic = bvx::scale_series(fbq, bvx::series_inv(lc, K), K);

    std::vector<bvx::BQ> leaves;
    for (const auto& u : ufactors) {
        auto cs = u.coeffs_in(vx);
        bvx::BQ leaf = bvx::make_bq(cs.size(), K);
        Rat l = cs.back().constant_value();
        for (std::size_t i = 0; i < cs.size(); ++i) leaf[i][0] = cs[i].constant_value() / l;
        leaves.push_back(std::move(leaf));
    }
    auto tree = bvx::build_tree(leaves, 0, leaves.size(), K);
    for (std::size_t m = 1; m < K; m = std::min(2 * m, K)) bvx::lift_pass(*tree, monic, m, K);
    std::vector<bvx::BQ> lifted;
    bvx::collect_leaves(*tree, lifted);

    auto to_poly = [&](const bvx::BQ& cand) {
        std::vector<MultiPoly::Term> terms;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            for (std::size_t k = 0; k < cand[i].size(); ++k) {
                if (cand[i][k].is_zero()) continue;
                Monomial m(pp.arena()->count(), 0);
                m[vx] = static_cast<std::uint32_t>(i);
                m[vy] = static_cast<std::uint32_t>(k);
                terms.emplace_back(std::move(m), cand[i][k]);
            }
        }
        MultiPoly q = MultiPoly::from_terms(pp.arena(), std::move(terms));
        return q
            .substitute({{vy, MultiPoly::var(pp.arena(), vy) -
                                  MultiPoly::constant(pp.arena(), Rat(point))}})
            .normalized();
    };

    MultiPoly remaining = pp;
    std::vector<bvx::BQ> pool = lifted;
    std::size_t s = 1;
    while (2 * s <= pool.size()) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            bvx::BQ prod = bvx::make_bq(1, K);
            prod[0][0] = Rat(1);
            for (auto i : idx) prod = bvx::mul(prod, pool[i], K);
            MultiPoly cand = to_poly(bvx::scale_series(prod, lc, K));
            auto q = MultiPoly::try_divide(remaining, cand);
            if (q && cand.degree_or(0) >= 1) {
                out.push_back(cand);
                remaining = q->normalized();
                std::vector<bvx::BQ> next_pool;
                for (std::size_t i = 0, j = 0; i < pool.size(); ++i) {
                    if (j < idx.size() && idx[j] == i) {
                        ++j;
                        continue;
                    }
                    next_pool.push_back(pool[i]);
                }
                pool = std::move(next_pool);
                found = true;
                break;
            }
            long pos = static_cast<long>(s) - 1;
            while (pos >= 0 &&
                   idx[static_cast<std::size_t>(pos)] == pool.size() - s + static_cast<std::size_t>(pos))
                --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < s; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (!found) ++s;
    }
    if (!remaining.is_constant()) out.push_back(remaining.normalized());
    std::sort(out.begin(), out.end(), poly_less);
    return out;
}

// Irreducible factors of a squarefree, normalized, monomial-content-free
// multivariate polynomial via Kronecker substitution.
inline std::vector<MultiPoly> factor_squarefree_multi(const MultiPoly& p,
                                                      const std::vector<std::size_t>& used,
                                                      const FactorOptions& opt) {
    const long D = *p.degree();
    // Substitution weights (D+1)^j; injective on every factor's support.
    std::vector<long> weights(used.size());
    long w = 1;
    for (std::size_t j = 0; j < used.size(); ++j) {
        weights[j] = w;
        if (j + 1 < used.size()) {
            require(w <= opt.kronecker_budget / (D + 1), errc::budget_exceeded,
                    "kronecker substitution degree exceeds budget");
            w *= D + 1;
        }
    }
    require(D * weights.back() <= opt.kronecker_budget, errc::budget_exceeded,
            "kronecker substitution degree exceeds budget");

    ArenaPtr tarena = make_arena({"t~"});
    std::vector<MultiPoly::Term> image_terms;
    for (const auto& [m, c] : p.terms()) {
        long e = 0;
        for (std::size_t j = 0; j < used.size(); ++j) e += static_cast<long>(m[used[j]]) * weights[j];
        Monomial tm(1, static_cast<std::uint32_t>(e));
        image_terms.emplace_back(std::move(tm), c);
    }
    MultiPoly image = MultiPoly::from_terms(tarena, std::move(image_terms));

    // The image of a squarefree polynomial need not be squarefree; factor it
    // completely and recombine over the multiset.
    std::vector<MultiPoly> pool;
    for (const auto& sf : squarefree_decompose(image.normalized())) {
        if (sf.base.is_constant()) continue;
        auto fs = factor_squarefree_univar(sf.base, 0);
        for (unsigned k = 0; k < sf.multiplicity; ++k)
            pool.insert(pool.end(), fs.begin(), fs.end());
    }
    std::sort(pool.begin(), pool.end(), poly_less);

    auto inverse_kronecker = [&](const MultiPoly& u) {
        std::vector<MultiPoly::Term> terms;
        for (const auto& [tm, c] : u.terms()) {
            long e = tm[0];
            Monomial m(p.arena()->count(), 0);
            for (std::size_t j = 0; j < used.size(); ++j) {
                m[used[j]] = static_cast<std::uint32_t>(e % (D + 1));
                e /= (D + 1);
            }
            terms.emplace_back(std::move(m), c);
        }
        return MultiPoly::from_terms(p.arena(), std::move(terms));
    };

    std::vector<MultiPoly> result;
    MultiPoly remaining = p.normalized();
    std::size_t s = 1;
    while (2 * s <= pool.size()) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            MultiPoly cand_uni = MultiPoly::constant(tarena, Rat(1));
            for (auto i : idx) cand_uni = cand_uni * pool[i];
            MultiPoly cand = inverse_kronecker(cand_uni).normalized();
            auto q = MultiPoly::try_divide(remaining, cand);
            if (q && !cand.is_constant()) {
                result.push_back(cand);
                remaining = q->normalized();
                std::vector<MultiPoly> next_pool;
                for (std::size_t i = 0, j = 0; i < pool.size(); ++i) {
                    if (j < idx.size() && idx[j] == i) {
                        ++j;
                        continue;
                    }
                    next_pool.push_back(pool[i]);
                }
                pool = std::move(next_pool);
                found = true;
                break;
            }
            long pos = static_cast<long>(s) - 1;
            while (pos >= 0 &&
                   idx[static_cast<std::size_t>(pos)] == pool.size() - s + static_cast<std::size_t>(pos))
                --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < s; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (!found) ++s;
    }
    if (!remaining.is_constant()) result.push_back(remaining.normalized());
    std::sort(result.begin(), result.end(), poly_less);
    return result;
}

} // namespace detail

// Complete factorization over Q. Desk-scale guards: at most `max_vars` used
// variables and total degree `max_degree`.
inline Factorization factor_multivariate(const MultiPoly& p, const FactorOptions& opt = {}) {
    require(!p.is_zero(), errc::bad_argument, "factorization of the zero polynomial");
    Factorization out;
    if (p.is_constant()) {
        out.unit = p.constant_value();
        return out;
    }
    std::vector<std::size_t> used;
    for (std::size_t v = 0; v < p.arena()->count(); ++v)
        if (p.uses_var(v)) used.push_back(v);
    require(used.size() <= opt.max_vars, errc::budget_exceeded,
            "factorization guard: too many variables");
    require(*p.degree() <= opt.max_degree, errc::budget_exceeded,
            "factorization guard: degree too large");

    std::map<std::vector<MultiPoly::Term>, unsigned> merged; // canonical term list -> multiplicity
    std::vector<MultiPoly> order;
    auto push = [&](const MultiPoly& f, unsigned mult) {
        auto key = f.terms();
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(std::move(key), mult);
            order.push_back(f);
        } else {
            it->second += mult;
        }
    };

    MultiPoly work = p.normalized();
    // Monomial content first.
    Monomial mc = work.terms()[0].first;
    for (const auto& [m, c] : work.terms()) mc = mono_gcd(mc, m);
    if (mono_degree(mc) > 0) {
        work = MultiPoly::div_exact(work, MultiPoly::from_terms(work.arena(), {{mc, Rat(1)}}));
        for (std::size_t v = 0; v < mc.size(); ++v)
            if (mc[v] > 0) push(MultiPoly::var(work.arena(), v), mc[v]);
    }
    for (const auto& sf : squarefree_decompose(work)) {
        if (sf.base.is_constant()) continue;
        std::vector<std::size_t> bused;
        for (std::size_t v = 0; v < sf.base.arena()->count(); ++v)
            if (sf.base.uses_var(v)) bused.push_back(v);
        std::vector<MultiPoly> irr;
        if (bused.size() == 1)
            irr = detail::factor_squarefree_univar(sf.base, bused[0]);
        else if (bused.size() == 2)
            irr = detail::factor_squarefree_bivar(sf.base.normalized(), bused[0], bused[1], opt);
        else
            irr = detail::factor_squarefree_multi(sf.base.normalized(), bused, opt);
        for (const auto& f : irr) push(f, sf.multiplicity);
    }
    std::sort(order.begin(), order.end(), detail::poly_less);
    MultiPoly check = MultiPoly::constant(p.arena(), Rat(1));
    for (const auto& f : order) {
        unsigned mult = merged.at(f.terms());
        out.factors.push_back({f, mult});
        check = check * f.pow(mult);
    }
    MultiPoly unit_poly = MultiPoly::div_exact(p, check);
    require(unit_poly.is_constant(), errc::internal, "factorization unit is not constant");
    out.unit = unit_poly.constant_value();
    return out;
}

// Univariate entry point (at most one variable may occur).
inline Factorization factor_univariate(const MultiPoly& p, const FactorOptions& opt = {}) {
    std::size_t used = 0;
    for (std::size_t v = 0; v < p.arena()->count(); ++v)
        if (p.uses_var(v)) ++used;
    require(used <= 1, errc::bad_argument, "factor_univariate: more than one variable");
    FactorOptions o = opt;
    o.max_degree = std::max(o.max_degree, p.degree_or(0)); // degree guard is for the multivariate path
    return factor_multivariate(p, o);
}

inline bool is_irreducible(const MultiPoly& p, const FactorOptions& opt = {}) {
    if (p.is_zero() || p.is_constant()) return false; // degree >= 1 required
    Factorization f = factor_multivariate(p, opt);
    return f.factors.size() == 1 && f.factors[0].multiplicity == 1;
}

} // namespace polygrid

#endif
