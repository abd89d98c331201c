#ifndef POLYGRID_ELIMINATION_HPP
#define POLYGRID_ELIMINATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "polygrid/resultant.hpp"
#include "polygrid/rng.hpp"

namespace polygrid {

// Appends a fresh variable to an arena; '~' cannot appear in parsed
// identifiers, so generated names never collide with user variables.
inline ArenaPtr extend_arena(const ArenaPtr& arena, const std::string& base, std::size_t& index) {
    std::vector<std::string> names = arena->names();
    std::string name = base;
    int k = 0;
    while (std::find(names.begin(), names.end(), name) != names.end())
        name = base + "~" + std::to_string(++k);
    index = names.size();
    names.push_back(name);
    return make_arena(std::move(names));
}

inline std::vector<std::size_t> identity_map(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return m;
}

enum class ElimMethod { iterated_sylvester, macaulay };

struct ElimOptions {
    long degree_budget = 512;  // total-degree cap on intermediate resultants
    long s_degree_budget = 64; // cap on the s-degree of the perturbed resultant
    bool radical_reduction = true;
    long interp_budget = 1 << 18;
    // Sylvester matrices are formed only when the two variable-degrees sum to
    // at most this; larger pairs are first shrunk by pseudo-remainder descent
    // (zero-set sound: every common zero kills each pseudo-remainder).
    long max_sylvester_span = 10;
    bool trace = false; // step timings on stderr
};

struct ElimRequest {
    std::vector<MultiPoly> system;
    std::vector<std::size_t> eliminate; // ordered variable indices
    ElimMethod method = ElimMethod::iterated_sylvester;
    bool gcp = true;
    std::uint64_t seed = 0;
    ElimOptions options;
};

struct ElimStep {
    std::string op;
    std::string var;
    long degree;       // total degree of the produced polynomial
    std::size_t terms; // its term count
};

struct ElimResult {
    MultiPoly projection;
    long s_valuation = 0;
    std::vector<ElimStep> transcript;
};

struct PerturbedSystem {
    std::vector<MultiPoly> system; // over the extended arena
    ArenaPtr arena;
    std::size_t s_index;
};

// Canny-style symbolic perturbation: polynomial i (1-based, i <= k-1) gains
// s * e_i^{deg f_i} on the i-th eliminated variable; the last polynomial
// gains the constant perturbation s. Deterministic, consumes no randomness.
inline PerturbedSystem gcp_perturb(const std::vector<MultiPoly>& system,
                                   const std::vector<std::size_t>& eliminate) {
    require(!system.empty(), errc::bad_argument, "empty system");
    require(eliminate.size() + 1 == system.size(), errc::dimension_mismatch,
            "gcp: need exactly one more polynomial than eliminated variables");
    const ArenaPtr& arena = system[0].arena();
    for (const auto& f : system) {
        require_compatible(arena, f.arena());
        require(!f.is_zero(), errc::bad_argument, "gcp: zero polynomial in system");
    }
    for (auto v : eliminate)
        require(v < arena->count(), errc::bad_argument, "gcp: eliminated variable out of range");

    PerturbedSystem out;
    out.arena = extend_arena(arena, "s", out.s_index);
    auto embed = identity_map(arena->count());
    for (std::size_t i = 0; i < system.size(); ++i) {
        MultiPoly f = system[i].remap(out.arena, embed);
        MultiPoly s = MultiPoly::var(out.arena, out.s_index);
        if (i + 1 < system.size()) {
            unsigned long d = static_cast<unsigned long>(*system[i].degree());
            out.system.push_back(f + s * MultiPoly::var(out.arena, eliminate[i]).pow(d));
        } else {
            out.system.push_back(f + s);
        }
    }
    return out;
}

namespace detail {

// Zero-set-preserving cleanup between cascade steps: unit normalization plus
// (optionally) the squarefree part. Multiplicity trimming keeps the iterated
// resultants from exploding in degree and never moves a zero.
inline MultiPoly elim_reduce(const MultiPoly& p, const ElimOptions& opt) {
    if (p.is_zero()) return p;
    MultiPoly q = p.normalized();
    if (opt.radical_reduction && !q.is_constant()) q = squarefree_part(q);
    return q;
}

inline void record(std::vector<ElimStep>& transcript, const std::string& op,
                   const std::string& var, const MultiPoly& p) {
    transcript.push_back({op, var, p.degree_or(-1), p.term_count()});
}

} // namespace detail

// Cascade elimination: removes one variable at a time. Small pairs go
// through the Sylvester determinant; larger sets are first shrunk by
// pseudo-remainder descent against the lowest-degree pivot. Both moves are
// sound projections: every common zero of the system kills each Sylvester
// determinant and each pseudo-remainder, so nothing is lost — extraneous
// factors may appear and are filtered downstream. Each variable consumes
// exactly one polynomial, so k polynomials end as a single projection.
// `degenerate_zero` reports an identically vanishing intermediate.
inline MultiPoly elim_cascade(std::vector<MultiPoly> polys,
                              const std::vector<std::size_t>& order, const ElimOptions& opt,
                              std::vector<ElimStep>& transcript, bool& degenerate_zero) {
    degenerate_zero = false;
    const ArenaPtr arena = polys.front().arena();
    auto check_budget = [&](const MultiPoly& r) {
        require(r.degree_or(0) <= opt.degree_budget, errc::budget_exceeded,
                "intermediate degree " + std::to_string(r.degree_or(0)) + " exceeds budget " +
                    std::to_string(opt.degree_budget));
    };
    for (std::size_t vi = 0; vi < order.size(); ++vi) {
        std::size_t v = order[vi];
        std::vector<MultiPoly> with, without;
        for (auto& p : polys) {
            if (p.degree_in_or(v, 0) >= 1)
                with.push_back(std::move(p));
            else
                without.push_back(std::move(p));
        }
        require(!with.empty(), errc::degenerate,
                "elimination variable '" + arena->name(v) + "' occurs in no polynomial");
        auto by_vdeg = [&](std::size_t i, std::size_t j) {
            long a = with[i].degree_in_or(v, 0), b = with[j].degree_in_or(v, 0);
            if (a != b) return a < b;
            return with[i].term_count() < with[j].term_count();
        };
        while (with.size() >= 2) {
            // Lowest v-degree (sparser on ties) as pivot, next-lowest as mate.
            std::size_t p0 = 0;
            for (std::size_t i = 1; i < with.size(); ++i)
                if (by_vdeg(i, p0)) p0 = i;
            std::size_t p1 = p0 == 0 ? 1 : 0;
            for (std::size_t i = 0; i < with.size(); ++i)
                if (i != p0 && by_vdeg(i, p1)) p1 = i;
            long span = with[p0].degree_in_or(v, 0) + with[p1].degree_in_or(v, 0);
            MultiPoly r(arena);
            bool final_pair = with.size() == 2;
            if (final_pair && span <= opt.max_sylvester_span) {
                if (opt.trace)
                    std::fprintf(stderr, "[elim] res_%s span=%ld degs=(%ld,%ld)\n",
                                 arena->name(v).c_str(), span, with[p0].degree_or(-1),
                                 with[p1].degree_or(-1));
                r = detail::elim_reduce(sylvester_resultant(with[p0], with[p1], v), opt);
                detail::record(transcript, "resultant", arena->name(v), r);
                if (r.is_zero()) {
                    degenerate_zero = true;
                    return MultiPoly(arena);
                }
                check_budget(r);
                without.push_back(std::move(r));
                with.clear();
                break;
            }
            // Descent: replace the mate by its pseudo-remainder by the pivot.
            if (opt.trace)
                std::fprintf(stderr, "[elim] prem_%s degs=(%ld:%ld, %ld:%ld)\n",
                             arena->name(v).c_str(), with[p0].degree_or(-1),
                             with[p0].degree_in_or(v, 0), with[p1].degree_or(-1),
                             with[p1].degree_in_or(v, 0));
            r = detail::elim_reduce(pseudo_rem(with[p1], with[p0], v), opt);
            detail::record(transcript, "prem", arena->name(v), r);
            if (r.is_zero()) {
                degenerate_zero = true; // pivot divides the mate: shared component
                return MultiPoly(arena);
            }
            check_budget(r);
            if (r.degree_in_or(v, 0) >= 1) {
                with[p1] = std::move(r);
            } else {
                without.push_back(std::move(r));
                with.erase(with.begin() + static_cast<std::ptrdiff_t>(p1));
            }
        }
        if (with.size() == 1) {
            // A variable constrained by one polynomial alone: generically
            // solvable, so projection simply consumes that polynomial.
            require(!without.empty(), errc::degenerate,
                    "elimination consumed the whole system at variable '" + arena->name(v) + "'");
            detail::record(transcript, "drop", arena->name(v), with[0]);
        }
        polys = std::move(without);
    }
    require(polys.size() == 1, errc::internal, "cascade did not reduce to one polynomial");
    return polys.front();
}

// The paper's Elim projection operator. With gcp=true the system is
// symbolically perturbed, the perturbed resultant is computed (iterated
// Sylvester or Macaulay), and the trailing coefficient in s is returned;
// the result is never the zero polynomial. Plain mode (gcp=false) returns
// the classical cascade, which may legitimately vanish on excess components.
inline ElimResult elim(const ElimRequest& req) {
    require(!req.system.empty(), errc::bad_argument, "elim: empty system");
    require(req.eliminate.size() + 1 == req.system.size(), errc::dimension_mismatch,
            "elim: need exactly one more polynomial than eliminated variables");
    const ArenaPtr& arena = req.system[0].arena();
    for (const auto& f : req.system) {
        require_compatible(arena, f.arena());
        require(!f.is_zero(), errc::bad_argument, "elim: zero polynomial in system");
    }
    ElimResult out;
    out.projection = MultiPoly(arena);

    if (!req.gcp) {
        std::vector<MultiPoly> polys = req.system;
        for (auto& p : polys) p = detail::elim_reduce(p, req.options);
        bool zero = false;
        if (req.method == ElimMethod::macaulay) {
            out.projection =
                macaulay_resultant_affine(polys, req.eliminate, req.seed, req.options.interp_budget)
                    .normalized();
        } else {
            MultiPoly r = elim_cascade(polys, req.eliminate, req.options, out.transcript, zero);
            out.projection = zero ? r : detail::elim_reduce(r, req.options);
        }
        return out;
    }

    // The perturbation machinery exists to defeat identically vanishing
    // resultants caused by excess components; when nothing vanishes, the
    // classical projection and the s-trailing coefficient coincide. So try
    // the plain cascade first and run the symbolic perturbation only when a
    // resultant does vanish identically.
    if (req.method == ElimMethod::iterated_sylvester) {
        std::vector<MultiPoly> plain = req.system;
        for (auto& p : plain) p = detail::elim_reduce(p, req.options);
        std::vector<ElimStep> plain_transcript;
        bool zero = false;
        MultiPoly r(arena);
        try {
            r = elim_cascade(plain, req.eliminate, req.options, plain_transcript, zero);
        } catch (const error& e) {
            if (e.kind() != errc::degenerate) throw;
            zero = true;
        }
        if (!zero && !r.is_zero()) {
            out.transcript = std::move(plain_transcript);
            out.projection = detail::elim_reduce(r, req.options);
            out.s_valuation = 0;
            return out;
        }
        detail::record(out.transcript, "plain-vanished", "", MultiPoly(arena));
    }

    PerturbedSystem pert = gcp_perturb(req.system, req.eliminate);
    std::vector<MultiPoly> polys = pert.system;
    for (auto& p : polys) p = detail::elim_reduce(p, req.options);
    MultiPoly rhat(pert.arena);
    bool zero = false;
    if (req.method == ElimMethod::macaulay) {
        rhat = macaulay_resultant_affine(polys, req.eliminate, req.seed, req.options.interp_budget);
    } else {
        rhat = elim_cascade(polys, req.eliminate, req.options, out.transcript, zero);
    }
    require(!zero && !rhat.is_zero(), errc::degenerate,
            "gcp: perturbed resultant is identically zero");
    require(rhat.degree_in_or(pert.s_index, 0) <= req.options.s_degree_budget,
            errc::budget_exceeded, "gcp: s-degree exceeds budget");
    out.s_valuation = rhat.uses_var(pert.s_index) ? rhat.valuation_in(pert.s_index) : 0;
    MultiPoly trailing = rhat.trailing_coeff_in(pert.s_index);
    detail::record(out.transcript, "tcoeff", pert.arena->name(pert.s_index), trailing);
    // Back into the caller's arena: s and the eliminated variables are gone.
    std::vector<std::size_t> back(pert.arena->count(), 0);
    for (std::size_t i = 0; i < arena->count(); ++i) back[i] = i;
    back[pert.s_index] = 0; // never used: trailing has s-exponent zero
    require(!trailing.uses_var(pert.s_index), errc::internal, "tcoeff still uses s");
    out.projection = detail::elim_reduce(trailing.remap(arena, back), req.options);
    require(!out.projection.is_zero(), errc::internal, "gcp: projection vanished after reduction");
    return out;
}

} // namespace polygrid

#endif
