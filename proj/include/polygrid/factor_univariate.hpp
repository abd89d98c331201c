#ifndef POLYGRID_FACTOR_UNIVARIATE_HPP
#define POLYGRID_FACTOR_UNIVARIATE_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <vector>

#include "polygrid/rational.hpp"
#include "polygrid/rng.hpp"

namespace polygrid {
namespace uzx {

// Dense univariate integer polynomials, ascending coefficients.
using ZX = std::vector<Int>;

inline void trim(ZX& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline long deg(const ZX& f) { return static_cast<long>(f.size()) - 1; }

inline ZX mul(const ZX& a, const ZX& b) {
    if (a.empty() || b.empty()) return {};
    ZX r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline ZX sub(const ZX& a, const ZX& b) {
    ZX r(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

inline ZX reduced(ZX f, const Int& m) {
    for (auto& c : f) {
        mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t()); // into [0, m)
    }
    trim(f);
    return f;
}

// Symmetric representative in (-m/2, m/2].
inline ZX balanced(ZX f, const Int& m) {
    Int half = m / 2;
    for (auto& c : f) {
        mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
        if (c > half) c -= m;
    }
    trim(f);
    return f;
}

// Division by a monic divisor over Z/m (or over Z when m == 0).
inline void divmod_monic(const ZX& a, const ZX& b, const Int& m, ZX& q, ZX& r) {
    require(!b.empty() && b.back() == 1, errc::internal, "divisor must be monic");
    r = a;
    long db = deg(b);
    q.assign(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Int(0));
    while (deg(r) >= db) {
        long k = deg(r) - db;
        Int c = r.back();
        q[static_cast<std::size_t>(k)] = c;
        for (long i = 0; i <= db; ++i) r[static_cast<std::size_t>(k + i)] -= c * b[static_cast<std::size_t>(i)];
        trim(r);
    }
    if (m != 0) {
        q = reduced(std::move(q), m);
        r = reduced(std::move(r), m);
    }
    trim(q);
}

// Exact division over Z; nullopt when it does not divide.
inline bool try_div_exact(const ZX& a, const ZX& b, ZX& q) {
    if (a.empty()) {
        q.clear();
        return true;
    }
    if (b.empty()) return false;
    ZX r = a;
    long db = deg(b);
    const Int& lb = b.back();
    q.assign(a.size() - b.size() + 1, Int(0));
    if (deg(a) < db) return false;
    while (deg(r) >= db) {
        Int c;
        if (!mpz_divisible_p(r.back().get_mpz_t(), lb.get_mpz_t())) return false;
        c = r.back() / lb;
        long k = deg(r) - db;
        q[static_cast<std::size_t>(k)] = c;
        for (long i = 0; i <= db; ++i) r[static_cast<std::size_t>(k + i)] -= c * b[static_cast<std::size_t>(i)];
        trim(r);
    }
    return r.empty();
}

inline Int content(const ZX& f) {
    Int g = 0;
    for (const auto& c : f) g = polygrid::gcd(g, c);
    return g;
}

// ---------------------------------------------------------------------------
// Arithmetic mod a word prime
// ---------------------------------------------------------------------------

using PX = std::vector<std::uint64_t>; // ascending, entries in [0, p)

inline void ptrim(PX& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline long pdeg(const PX& f) { return static_cast<long>(f.size()) - 1; }

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod_u(a, p - 2, p); }

inline PX pmul(const PX& a, const PX& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    PX r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
    }
    ptrim(r);
    return r;
}

inline PX psub(const PX& a, const PX& b, std::uint64_t p) {
    PX r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
    ptrim(r);
    return r;
}

inline PX prem(PX a, const PX& b, std::uint64_t p) {
    long db = pdeg(b);
    require(db >= 0, errc::internal, "mod-p remainder by zero");
    std::uint64_t inv_lb = invmod(b.back(), p);
    while (pdeg(a) >= db) {
        std::uint64_t c = mulmod(a.back(), inv_lb, p);
        long k = pdeg(a) - db;
        for (long i = 0; i <= db; ++i) {
            auto& t = a[static_cast<std::size_t>(k + i)];
            t = (t + p - mulmod(c, b[static_cast<std::size_t>(i)], p)) % p;
        }
        ptrim(a);
    }
    return a;
}

inline PX pmonic(PX f, std::uint64_t p) {
    if (f.empty()) return f;
    std::uint64_t inv = invmod(f.back(), p);
    for (auto& c : f) c = mulmod(c, inv, p);
    return f;
}

inline PX pgcd(PX a, PX b, std::uint64_t p) {
    while (!b.empty()) {
        PX r = prem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return pmonic(a, p);
}

// Extended Euclid mod p: s*a + t*b == g (g monic).
inline void pextgcd(const PX& a, const PX& b, std::uint64_t p, PX& g, PX& s, PX& t) {
    PX r0 = a, r1 = b;
    PX s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        // quotient of r0 by r1
        PX q;
        PX rem = r0;
        std::uint64_t inv_lb = invmod(r1.back(), p);
        long db = pdeg(r1);
        q.assign(std::max<long>(pdeg(rem) - db + 1, 0), 0);
        while (pdeg(rem) >= db) {
            std::uint64_t c = mulmod(rem.back(), inv_lb, p);
            long k = pdeg(rem) - db;
            q[static_cast<std::size_t>(k)] = c;
            for (long i = 0; i <= db; ++i) {
                auto& x = rem[static_cast<std::size_t>(k + i)];
                x = (x + p - mulmod(c, r1[static_cast<std::size_t>(i)], p)) % p;
            }
            ptrim(rem);
        }
        ptrim(q);
        r0 = std::move(r1);
        r1 = std::move(rem);
        PX s2 = psub(s0, pmul(q, s1, p), p);
        PX t2 = psub(t0, pmul(q, t1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    std::uint64_t inv = invmod(r0.back(), p);
    auto scale = [&](PX& f) {
        for (auto& c : f) c = mulmod(c, inv, p);
    };
    scale(r0);
    scale(s0);
    scale(t0);
    g = std::move(r0);
    s = std::move(s0);
    t = std::move(t0);
}

inline PX ppowmod(PX base, const Int& e, const PX& f, std::uint64_t p) {
    PX r = {1};
    base = prem(std::move(base), f, p);
    for (long bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
        r = prem(pmul(r, r, p), f, p);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)))
            r = prem(pmul(r, base, p), f, p);
    }
    return r;
}

inline PX pderiv(const PX& f, std::uint64_t p) {
    PX d;
    for (std::size_t i = 1; i < f.size(); ++i)
        d.push_back(static_cast<std::uint64_t>((static_cast<unsigned __int128>(f[i]) * (i % p)) % p));
    ptrim(d);
    return d;
}

// ---------------------------------------------------------------------------
// Distinct-degree + equal-degree splitting (Cantor-Zassenhaus)
// ---------------------------------------------------------------------------

inline void edf(const PX& f, long d, std::uint64_t p, SplitMix64& rng, std::vector<PX>& out) {
    if (pdeg(f) == d) {
        out.push_back(pmonic(f, p));
        return;
    }
    // r^((p^d - 1)/2) - 1 splits f with probability about 1/2.
    Int exponent = (pow_int(Int(static_cast<unsigned long>(p)), static_cast<unsigned long>(d)) - 1) / 2;
    while (true) {
        PX r(static_cast<std::size_t>(pdeg(f)), 0);
        for (auto& c : r) c = rng.below(p);
        ptrim(r);
        if (pdeg(r) < 1) continue;
        PX u = ppowmod(r, exponent, f, p);
        if (!u.empty()) u[0] = (u[0] + p - 1) % p;
        ptrim(u);
        PX g = pgcd(f, u, p);
        if (pdeg(g) > 0 && pdeg(g) < pdeg(f)) {
            PX q;
            // f / g via monic division mod p
            PX rem = f;
            long db = pdeg(g);
            q.assign(f.size() - g.size() + 1, 0);
            while (pdeg(rem) >= db) {
                std::uint64_t c = rem.back(); // g monic
                long k = pdeg(rem) - db;
                q[static_cast<std::size_t>(k)] = c;
                for (long i = 0; i <= db; ++i) {
                    auto& x = rem[static_cast<std::size_t>(k + i)];
                    x = (x + p - mulmod(c, g[static_cast<std::size_t>(i)], p)) % p;
                }
                ptrim(rem);
            }
            ptrim(q);
            edf(g, d, p, rng, out);
            edf(q, d, p, rng, out);
            return;
        }
    }
}

// Factors a squarefree monic polynomial mod p into monic irreducibles.
inline std::vector<PX> factor_mod_p(PX f, std::uint64_t p) {
    std::vector<PX> out;
    f = pmonic(std::move(f), p);
    SplitMix64 rng(0x65646673706c6974ULL); // fixed internal stream: runs are reproducible
    PX h = {0, 1};                          // x
    long d = 0;
    while (pdeg(f) >= 1) {
        ++d;
        if (2 * d > pdeg(f)) {
            out.push_back(f); // what remains is irreducible
            break;
        }
        h = ppowmod(std::move(h), Int(static_cast<unsigned long>(p)), f, p);
        PX hx = h;
        // h - x
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = (hx[1] + p - 1) % p;
        ptrim(hx);
        PX g = pgcd(f, hx, p);
        if (pdeg(g) > 0) {
            edf(g, d, p, rng, out);
            // f /= g
            PX q, rem = f;
            long db = pdeg(g);
            q.assign(f.size() - g.size() + 1, 0);
            while (pdeg(rem) >= db) {
                std::uint64_t c = rem.back();
                long k = pdeg(rem) - db;
                q[static_cast<std::size_t>(k)] = c;
                for (long i = 0; i <= db; ++i) {
                    auto& x = rem[static_cast<std::size_t>(k + i)];
                    x = (x + p - mulmod(c, g[static_cast<std::size_t>(i)], p)) % p;
                }
                ptrim(rem);
            }
            ptrim(q);
            f = std::move(q);
            h = prem(std::move(h), f, p);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Quadratic multifactor Hensel lifting (subproduct tree)
// ---------------------------------------------------------------------------

struct LiftNode {
    ZX prod;   // product of the leaf factors, mod the current modulus
    ZX s, t;   // Bezout pair of the children: s*L + t*R == 1 (mod modulus)
    std::unique_ptr<LiftNode> left, right;
    bool leaf() const { return !left; }
};

inline ZX from_px(const PX& f) {
    ZX r;
    r.reserve(f.size());
    for (auto c : f) r.emplace_back(static_cast<unsigned long>(c));
    return r;
}

inline PX to_px(const ZX& f, std::uint64_t p) {
    PX r;
    r.reserve(f.size());
    for (const auto& c : f) {
        Int t;
        mpz_mod_ui(t.get_mpz_t(), c.get_mpz_t(), p);
        r.push_back(t.get_ui());
    }
    ptrim(r);
    return r;
}

inline std::unique_ptr<LiftNode> build_tree(const std::vector<PX>& leaves, std::size_t lo,
                                            std::size_t hi, std::uint64_t p) {
    auto node = std::make_unique<LiftNode>();
    if (hi - lo == 1) {
        node->prod = from_px(leaves[lo]);
        return node;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    node->left = build_tree(leaves, lo, mid, p);
    node->right = build_tree(leaves, mid, hi, p);
    PX g, s, t;
    PX lp = to_px(node->left->prod, p), rp = to_px(node->right->prod, p);
    pextgcd(lp, rp, p, g, s, t);
    require(pdeg(g) == 0, errc::internal, "hensel: factors not coprime mod p");
    node->prod = from_px(pmul(lp, rp, p));
    node->s = from_px(s);
    node->t = from_px(t);
    return node;
}

// One Hensel step: from f == g*h (mod m), s*g + t*h == 1 (mod m), h monic,
// to the same data mod m^2 (g, h, s, t updated in place).
inline void hensel_step(const Int& m, const ZX& f, ZX& g, ZX& h, ZX& s, ZX& t) {
    Int m2 = m * m;
    ZX e = reduced(sub(f, mul(g, h)), m2);
    ZX q, r;
    divmod_monic(mul(s, e), h, m2, q, r);
    ZX te = mul(t, e);
    ZX qg = mul(q, g);
    ZX gnew(std::max({g.size(), te.size(), qg.size()}), Int(0));
    for (std::size_t i = 0; i < g.size(); ++i) gnew[i] += g[i];
    for (std::size_t i = 0; i < te.size(); ++i) gnew[i] += te[i];
    for (std::size_t i = 0; i < qg.size(); ++i) gnew[i] += qg[i];
    gnew = reduced(std::move(gnew), m2);
    ZX hnew(std::max(h.size(), r.size()), Int(0));
    for (std::size_t i = 0; i < h.size(); ++i) hnew[i] += h[i];
    for (std::size_t i = 0; i < r.size(); ++i) hnew[i] += r[i];
    hnew = reduced(std::move(hnew), m2);

    ZX b = mul(s, gnew);
    {
        ZX th = mul(t, hnew);
        ZX acc(std::max(b.size(), th.size()), Int(0));
        for (std::size_t i = 0; i < b.size(); ++i) acc[i] += b[i];
        for (std::size_t i = 0; i < th.size(); ++i) acc[i] += th[i];
        if (acc.empty()) acc.push_back(Int(-1));
        else acc[0] -= 1;
        b = reduced(std::move(acc), m2);
    }
    ZX c, d;
    divmod_monic(mul(s, b), hnew, m2, c, d);
    ZX snew = reduced(sub(s, d), m2);
    ZX tb = mul(t, b);
    ZX cg = mul(c, gnew);
    ZX tnew(std::max({t.size(), tb.size(), cg.size()}), Int(0));
    for (std::size_t i = 0; i < t.size(); ++i) tnew[i] += t[i];
    for (std::size_t i = 0; i < tb.size(); ++i) tnew[i] -= tb[i];
    for (std::size_t i = 0; i < cg.size(); ++i) tnew[i] -= cg[i];
    tnew = reduced(std::move(tnew), m2);

    g = std::move(gnew);
    h = std::move(hnew);
    s = std::move(snew);
    t = std::move(tnew);
}

inline void lift_pass(LiftNode& node, const ZX& f_target, const Int& m) {
    node.prod = f_target;
    if (node.leaf()) return;
    ZX g = node.left->prod, h = node.right->prod, s = node.s, t = node.t;
    hensel_step(m, f_target, g, h, s, t);
    node.s = std::move(s);
    node.t = std::move(t);
    lift_pass(*node.left, g, m);
    lift_pass(*node.right, h, m);
}

inline void collect_leaves(const LiftNode& node, std::vector<ZX>& out) {
    if (node.leaf()) {
        out.push_back(node.prod);
        return;
    }
    collect_leaves(*node.left, out);
    collect_leaves(*node.right, out);
}

// ---------------------------------------------------------------------------
// Zassenhaus driver for a primitive squarefree polynomial over Z
// ---------------------------------------------------------------------------

// Mignotte-style bound on the coefficients of any factor of f (including the
// leading-coefficient multiplier used during recombination).
inline Int factor_bound(const ZX& f) {
    Int norm2 = 0;
    for (const auto& c : f) norm2 += c * c;
    Int s;
    mpz_sqrt(s.get_mpz_t(), norm2.get_mpz_t());
    s += 1;
    Int l = f.back();
    if (l < 0) l = -l;
    return (Int(1) << static_cast<unsigned long>(deg(f) + 1)) * s * l;
}

inline ZX primitive_positive(ZX f) {
    if (f.empty()) return f;
    Int c = content(f);
    if (f.back() < 0) c = -c;
    for (auto& x : f) x /= c;
    return f;
}

// Factors a primitive squarefree polynomial with positive leading
// coefficient into its irreducible factors over Z. The leading coefficient
// is imposed on the first lifted factor (f == lc * g_1 * ... * g_r mod p^k)
// and recombination forms pp(balanced(lc_remaining * prod_T g_i)).
inline std::vector<ZX> factor_squarefree_zx(const ZX& f) {
    long n = deg(f);
    require(n >= 1 && f.back() > 0, errc::internal,
            "expected primitive polynomial with positive leading coefficient");
    if (n == 1) return {f};
    const Int l = f.back();

    // Prime search: must keep full degree and squarefreeness mod p.
    std::uint64_t p = 0;
    Int candidate = 1000003;
    for (int tries = 0; tries < 200; ++tries) {
        std::uint64_t pc = candidate.get_ui();
        PX fp = to_px(f, pc);
        if (pdeg(fp) == n) {
            PX g = pgcd(fp, pderiv(fp, pc), pc);
            if (pdeg(g) == 0) {
                p = pc;
                break;
            }
        }
        mpz_nextprime(candidate.get_mpz_t(), candidate.get_mpz_t());
    }
    require(p != 0, errc::internal, "no good prime found for factorization");

    std::vector<PX> modular = factor_mod_p(to_px(f, p), p);
    if (modular.size() == 1) return {f};
#ifdef POLYGRID_FACTOR_TRACE
    std::fprintf(stderr, "[zx] deg=%ld modular_factors=%zu prime=%llu\n", n, modular.size(),
                 static_cast<unsigned long long>(p));
#endif

    // Impose the leading coefficient on the first leaf: f == u_1 * g_2 ... g_r.
    {
        Int lm;
        mpz_mod_ui(lm.get_mpz_t(), l.get_mpz_t(), p);
        std::uint64_t lmu = lm.get_ui();
        for (auto& c : modular[0]) c = mulmod(c, lmu, p);
    }
    Int bound = 2 * factor_bound(f);
    auto tree = build_tree(modular, 0, modular.size(), p);
    Int m(static_cast<unsigned long>(p));
    while (m <= bound) {
        lift_pass(*tree, reduced(f, m * m), m);
        m = m * m;
    }
    std::vector<ZX> lifted;
    collect_leaves(*tree, lifted);
    // Monic representatives mod m (leading coefficients are units mod p^k).
    for (auto& g : lifted) {
        Int inv;
        int ok = mpz_invert(inv.get_mpz_t(), g.back().get_mpz_t(), m.get_mpz_t());
        require(ok != 0, errc::internal, "lifted factor has non-invertible leading coefficient");
        for (auto& c : g) {
            c *= inv;
            mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
        }
    }

    // Subset recombination with trial division over Z.
    std::vector<ZX> result;
    ZX remaining = f;
    std::vector<ZX> pool = lifted;
    std::size_t s = 1;
    while (2 * s <= pool.size()) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            ZX cand = {remaining.back()};
            for (auto i : idx) cand = reduced(mul(cand, pool[i]), m);
            cand = primitive_positive(balanced(std::move(cand), m));
            ZX q;
            if (deg(cand) >= 1 && try_div_exact(remaining, cand, q)) {
                result.push_back(cand);
                remaining = q;
                std::vector<ZX> next_pool;
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
            // next s-subset in lex order
            long pos = static_cast<long>(s) - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] ==
                                   pool.size() - s + static_cast<std::size_t>(pos))
                --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < s; ++i)
                idx[i] = idx[i - 1] + 1;
        }
        if (!found) ++s;
    }
    if (deg(remaining) >= 1) result.push_back(remaining);
    std::sort(result.begin(), result.end(), [](const ZX& a, const ZX& b) {
        if (deg(a) != deg(b)) return deg(a) < deg(b);
        return a < b;
    });
    return result;
}

} // namespace uzx
} // namespace polygrid

#endif
