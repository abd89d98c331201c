#ifndef POLYGRID_POLYNOMIAL_HPP
#define POLYGRID_POLYNOMIAL_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "polygrid/arena.hpp"
#include "polygrid/monomial.hpp"
#include "polygrid/rational.hpp"

namespace polygrid {

struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(a, b); }
};

// Sparse multivariate polynomial with exact rational coefficients.
// Canonical form: terms sorted grlex-descending, no zero coefficients.
// Values are immutable after construction; all operations are pure.
class MultiPoly {
public:
    using Term = std::pair<Monomial, Rat>;

    MultiPoly() : arena_(make_arena({})) {}
    explicit MultiPoly(ArenaPtr arena) : arena_(std::move(arena)) {}

    static MultiPoly constant(ArenaPtr arena, const Rat& c) {
        MultiPoly p(std::move(arena));
        if (!c.is_zero()) p.terms_.emplace_back(Monomial(p.arena_->count(), 0), c);
        return p;
    }

    static MultiPoly var(const ArenaPtr& arena, std::size_t index, std::uint32_t exp = 1) {
        require(index < arena->count(), errc::bad_argument, "variable index out of range");
        MultiPoly p(arena);
        Monomial m(arena->count(), 0);
        m[index] = exp;
        p.terms_.emplace_back(std::move(m), Rat(1));
        return p;
    }

    static MultiPoly from_terms(ArenaPtr arena, std::vector<Term> raw) {
        std::map<Monomial, Rat, GrlexLess> acc;
        for (auto& [m, c] : raw) {
            require(m.size() == arena->count(), errc::dimension_mismatch,
                    "monomial length does not match arena");
            if (c.is_zero()) continue;
            auto [it, fresh] = acc.emplace(std::move(m), c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) acc.erase(it);
            }
        }
        return from_map(std::move(arena), acc);
    }

    const ArenaPtr& arena() const { return arena_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    std::size_t nvars() const { return arena_->count(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || mono_degree(terms_[0].first) == 0; }

    // Value of a constant polynomial (0 for the zero polynomial).
    Rat constant_value() const {
        require(is_constant(), errc::bad_argument, "polynomial is not constant");
        return terms_.empty() ? Rat(0) : terms_[0].second;
    }

    // Leading term in grlex order; only valid on nonzero polynomials.
    const Term& leading_term() const {
        require(!terms_.empty(), errc::bad_argument, "zero polynomial has no leading term");
        return terms_[0];
    }

    // Total degree; nullopt is the distinguished "minus infinity" of the zero
    // polynomial (never an integer sentinel).
    std::optional<long> degree() const {
        if (terms_.empty()) return std::nullopt;
        return mono_degree(terms_[0].first);
    }

    std::optional<long> degree_in(std::size_t var) const {
        if (terms_.empty()) return std::nullopt;
        long d = 0;
        for (const auto& [m, c] : terms_) d = std::max<long>(d, m[var]);
        return d;
    }

    long degree_or(long dflt = -1) const { return degree().value_or(dflt); }
    long degree_in_or(std::size_t var, long dflt = -1) const {
        return degree_in(var).value_or(dflt);
    }

    // Degree restricted to the variables of block i of the partition.
    std::optional<long> block_degree(const BlockPartition& part, std::size_t i) const {
        part.bind_check(*arena_);
        require(i < part.blocks(), errc::bad_argument, "block index out of range");
        if (terms_.empty()) return std::nullopt;
        long best = 0;
        for (const auto& [m, c] : terms_) {
            long d = 0;
            for (std::size_t k = part.offset(i); k < part.offset(i) + part.lambda(i); ++k)
                d += m[k];
            best = std::max(best, d);
        }
        return best;
    }

    bool uses_var(std::size_t var) const {
        for (const auto& [m, c] : terms_)
            if (m[var] != 0) return true;
        return false;
    }

    MultiPoly operator-() const {
        MultiPoly r(arena_);
        r.terms_.reserve(terms_.size());
        for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, -c);
        return r;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        require_compatible(a.arena_, b.arena_);
        // Merge of two grlex-descending term lists.
        MultiPoly r(a.arena_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            const auto& ta = a.terms_[i];
            const auto& tb = b.terms_[j];
            if (ta.first == tb.first) {
                Rat c = ta.second + tb.second;
                if (!c.is_zero()) r.terms_.emplace_back(ta.first, c);
                ++i, ++j;
            } else if (grlex_greater(ta.first, tb.first)) {
                r.terms_.push_back(ta);
                ++i;
            } else {
                r.terms_.push_back(tb);
                ++j;
            }
        }
        for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
        for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
        return r;
    }

    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        require_compatible(a.arena_, b.arena_);
        if (a.is_zero() || b.is_zero()) return MultiPoly(a.arena_);
        const MultiPoly& small = a.terms_.size() <= b.terms_.size() ? a : b;
        const MultiPoly& big = a.terms_.size() <= b.terms_.size() ? b : a;
        std::map<Monomial, Rat, GrlexLess> acc;
        for (const auto& [ms, cs] : small.terms_) {
            for (const auto& [mb, cb] : big.terms_) {
                Monomial m = mono_mul(ms, mb);
                auto [it, fresh] = acc.emplace(std::move(m), cs * cb);
                if (!fresh) {
                    it->second += cs * cb;
                    if (it->second.is_zero()) acc.erase(it);
                }
            }
        }
        return from_map(a.arena_, acc);
    }

    MultiPoly scaled(const Rat& c) const {
        if (c.is_zero()) return MultiPoly(arena_);
        MultiPoly r(arena_);
        r.terms_.reserve(terms_.size());
        for (const auto& [m, k] : terms_) r.terms_.emplace_back(m, k * c);
        return r;
    }

    // this * (c * x^mono)
    MultiPoly times_term(const Monomial& mono, const Rat& c) const {
        if (c.is_zero()) return MultiPoly(arena_);
        MultiPoly r(arena_);
        r.terms_.reserve(terms_.size());
        for (const auto& [m, k] : terms_) r.terms_.emplace_back(mono_mul(m, mono), k * c);
        return r;
    }

    MultiPoly pow(unsigned long e) const {
        MultiPoly result = constant(arena_, Rat(1));
        MultiPoly base = *this;
        while (e > 0) {
            if (e & 1) result = result * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return result;
    }

    Rat evaluate(const std::vector<Rat>& point) const {
        require(point.size() == arena_->count(), errc::dimension_mismatch,
                "evaluation point has wrong dimension");
        // Per-variable power cache.
        std::vector<std::vector<Rat>> pows(point.size());
        for (std::size_t v = 0; v < point.size(); ++v) pows[v].push_back(Rat(1));
        Rat total(0);
        for (const auto& [m, c] : terms_) {
            Rat t = c;
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                auto& pv = pows[v];
                while (pv.size() <= m[v]) pv.push_back(pv.back() * point[v]);
                t *= pv[m[v]];
            }
            total += t;
        }
        return total;
    }

    MultiPoly partial_evaluate(const std::map<std::size_t, Rat>& bindings) const {
        for (const auto& [v, val] : bindings)
            require(v < arena_->count(), errc::bad_argument, "binding for unknown variable");
        std::vector<Term> out;
        out.reserve(terms_.size());
        std::vector<std::vector<Rat>> pows(arena_->count());
        for (const auto& [m, c] : terms_) {
            Rat coeff = c;
            Monomial rest(m.size(), 0);
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                auto it = bindings.find(v);
                if (it == bindings.end()) {
                    rest[v] = m[v];
                } else {
                    auto& pv = pows[v];
                    if (pv.empty()) pv.push_back(Rat(1));
                    while (pv.size() <= m[v]) pv.push_back(pv.back() * it->second);
                    coeff *= pv[m[v]];
                }
            }
            out.emplace_back(std::move(rest), coeff);
        }
        return from_terms(arena_, std::move(out));
    }

    // Simultaneous substitution var -> image polynomial (images over this
    // arena); variables without an image stay themselves. Covers affine
    // changes of coordinates and Kronecker-style monomial substitutions.
    MultiPoly substitute(const std::map<std::size_t, MultiPoly>& images) const {
        for (const auto& [v, img] : images) {
            require(v < arena_->count(), errc::bad_argument, "substitution for unknown variable");
            require_compatible(arena_, img.arena());
        }
        MultiPoly total(arena_);
        std::map<std::size_t, std::vector<MultiPoly>> pows; // image powers
        for (const auto& [m, c] : terms_) {
            MultiPoly t = constant(arena_, c);
            Monomial rest(m.size(), 0);
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                auto it = images.find(v);
                if (it == images.end()) {
                    rest[v] = m[v];
                    continue;
                }
                auto& pv = pows[v];
                if (pv.empty()) pv.push_back(constant(arena_, Rat(1)));
                while (pv.size() <= m[v]) pv.push_back(pv.back() * it->second);
                t = t * pv[m[v]];
            }
            total = total + t.times_term(rest, Rat(1));
        }
        return total;
    }

    MultiPoly derivative(std::size_t var) const {
        require(var < arena_->count(), errc::bad_argument, "variable index out of range");
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            Monomial d = m;
            d[var] -= 1;
            out.emplace_back(std::move(d), c * Rat(static_cast<long>(m[var])));
        }
        return from_terms(arena_, std::move(out));
    }

    // Dense coefficient list with respect to one variable: result[k] is the
    // coefficient of var^k, a polynomial with var exponent zero.
    std::vector<MultiPoly> coeffs_in(std::size_t var) const {
        long d = degree_in_or(var, -1);
        std::vector<MultiPoly> out(static_cast<std::size_t>(d + 1), MultiPoly(arena_));
        if (d < 0) return out; // zero polynomial: empty list
        std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(d + 1));
        for (const auto& [m, c] : terms_) {
            Monomial rest = m;
            std::uint32_t k = rest[var];
            rest[var] = 0;
            buckets[k].emplace_back(std::move(rest), c);
        }
        for (std::size_t k = 0; k <= static_cast<std::size_t>(d); ++k)
            out[k] = from_terms(arena_, std::move(buckets[k]));
        return out;
    }

    static MultiPoly from_coeffs_in(std::size_t var, const std::vector<MultiPoly>& coeffs,
                                    const ArenaPtr& arena) {
        std::vector<Term> out;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            for (const auto& [m, c] : coeffs[k].terms()) {
                Monomial mm = m;
                mm[var] += static_cast<std::uint32_t>(k);
                out.emplace_back(std::move(mm), c);
            }
        }
        return from_terms(arena, std::move(out));
    }

    MultiPoly leading_coeff_in(std::size_t var) const {
        long d = degree_in_or(var, -1);
        if (d < 0) return MultiPoly(arena_);
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            if (m[var] == static_cast<std::uint32_t>(d)) {
                Monomial rest = m;
                rest[var] = 0;
                out.emplace_back(std::move(rest), c);
            }
        }
        return from_terms(arena_, std::move(out));
    }

    MultiPoly trailing_coeff_in(std::size_t var) const {
        if (is_zero()) return MultiPoly(arena_);
        std::uint32_t lo = terms_[0].first[var];
        for (const auto& [m, c] : terms_) lo = std::min(lo, m[var]);
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            if (m[var] == lo) {
                Monomial rest = m;
                rest[var] = 0;
                out.emplace_back(std::move(rest), c);
            }
        }
        return from_terms(arena_, std::move(out));
    }

    // Lowest power of var appearing in any term (the var-valuation).
    long valuation_in(std::size_t var) const {
        require(!is_zero(), errc::bad_argument, "valuation of the zero polynomial");
        std::uint32_t lo = terms_[0].first[var];
        for (const auto& [m, c] : terms_) lo = std::min(lo, m[var]);
        return lo;
    }

    // Exact multivariate division: a / b when the remainder is zero.
    static std::optional<MultiPoly> try_divide(const MultiPoly& a, const MultiPoly& b) {
        require_compatible(a.arena_, b.arena_);
        require(!b.is_zero(), errc::bad_argument, "division by the zero polynomial");
        std::map<Monomial, Rat, GrlexLess> rem;
        for (const auto& [m, c] : a.terms_) rem.emplace(m, c);
        const auto& [lb, cb] = b.leading_term();
        std::vector<Term> quotient;
        while (!rem.empty()) {
            auto lead = std::prev(rem.end()); // grlex-largest
            if (!mono_divides(lb, lead->first)) return std::nullopt;
            Monomial qm = mono_div(lead->first, lb);
            Rat qc = lead->second / cb;
            quotient.emplace_back(qm, qc);
            for (const auto& [m, c] : b.terms_) {
                Monomial t = mono_mul(qm, m);
                Rat delta = qc * c;
                auto [it, fresh] = rem.emplace(std::move(t), -delta);
                if (!fresh) {
                    it->second -= delta;
                    if (it->second.is_zero()) rem.erase(it);
                }
            }
        }
        return from_terms(a.arena_, std::move(quotient));
    }

    static MultiPoly div_exact(const MultiPoly& a, const MultiPoly& b) {
        auto q = try_divide(a, b);
        require(q.has_value(), errc::internal, "inexact polynomial division");
        return *q;
    }

    static bool divides(const MultiPoly& b, const MultiPoly& a) {
        if (a.is_zero()) return true;
        if (b.is_zero()) return false;
        return try_divide(a, b).has_value();
    }

    // Unit factor u with p = u * normalized(p): normalized polynomials have
    // coprime integer coefficients and positive grlex-leading coefficient.
    Rat unit_part() const {
        if (is_zero()) return Rat(1);
        Int g = 0, l = 1;
        for (const auto& [m, c] : terms_) {
            g = polygrid::gcd(g, c.num());
            l = polygrid::lcm(l, c.den());
        }
        Rat u(g, l);
        if (terms_[0].second.sign() < 0) u = -u;
        return u;
    }

    MultiPoly normalized() const {
        if (is_zero()) return *this;
        return scaled(Rat(1) / unit_part());
    }

    // Renames this polynomial into `target`: variable i becomes
    // target variable image[i]. Exponents are carried over unchanged.
    MultiPoly remap(const ArenaPtr& target, const std::vector<std::size_t>& image) const {
        require(image.size() == arena_->count(), errc::dimension_mismatch,
                "remap image has wrong length");
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            Monomial mm(target->count(), 0);
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                require(image[v] < target->count(), errc::bad_argument, "remap image out of range");
                mm[image[v]] += m[v];
            }
            out.emplace_back(std::move(mm), c);
        }
        return from_terms(target, std::move(out));
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return compatible(a.arena_, b.arena_) && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

private:
    static MultiPoly from_map(ArenaPtr arena, const std::map<Monomial, Rat, GrlexLess>& acc) {
        MultiPoly p(std::move(arena));
        p.terms_.reserve(acc.size());
        for (auto it = acc.rbegin(); it != acc.rend(); ++it) p.terms_.emplace_back(it->first, it->second);
        return p;
    }

    ArenaPtr arena_;
    std::vector<Term> terms_;
};

} // namespace polygrid

#endif
