#ifndef POLYGRID_FACTOR_BIVARIATE_HPP
#define POLYGRID_FACTOR_BIVARIATE_HPP

#include <memory>
#include <vector>

#include "polygrid/factor_univariate.hpp"
#include "polygrid/gcd.hpp"

namespace polygrid {
namespace bvx {

// Dense bivariate polynomial over Q, c[i][j] * x^i * t^j, always truncated
// mod t^K. Sizes here are tiny (x-degree and K both <= a few dozen), so the
// representation favours clarity over sparsity.
using Series = std::vector<Rat>; // coefficients in t
using BQ = std::vector<Series>;  // indexed by x-power

inline long xdeg(const BQ& f) {
    for (long i = static_cast<long>(f.size()) - 1; i >= 0; --i)
        for (const auto& c : f[static_cast<std::size_t>(i)])
            if (!c.is_zero()) return i;
    return -1;
}

inline bool is_zero(const BQ& f) { return xdeg(f) < 0; }

inline BQ make_bq(std::size_t xsize, std::size_t K) { return BQ(xsize, Series(K, Rat(0))); }

inline Series series_mul(const Series& a, const Series& b, std::size_t K) {
    Series r(K, Rat(0));
    for (std::size_t i = 0; i < a.size() && i < K; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j + i < K && j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

inline Series series_inv(const Series& l, std::size_t K) {
    require(!l.empty() && !l[0].is_zero(), errc::internal, "series not invertible");
    Series v(K, Rat(0));
    v[0] = Rat(1) / l[0];
    for (std::size_t k = 1; k < K; ++k) {
        Rat acc(0);
        for (std::size_t i = 1; i <= k && i < l.size(); ++i) acc += l[i] * v[k - i];
        v[k] = -acc / l[0];
    }
    return v;
}

inline BQ mul(const BQ& a, const BQ& b, std::size_t K) {
    long da = xdeg(a), db = xdeg(b);
    if (da < 0 || db < 0) return make_bq(1, K);
    BQ r = make_bq(static_cast<std::size_t>(da + db) + 1, K);
    for (long i = 0; i <= da; ++i) {
        for (long j = 0; j <= db; ++j) {
            Series prod = series_mul(a[static_cast<std::size_t>(i)],
                                     b[static_cast<std::size_t>(j)], K);
            auto& dst = r[static_cast<std::size_t>(i + j)];
            for (std::size_t k = 0; k < K; ++k) dst[k] += prod[k];
        }
    }
    return r;
}

inline BQ sub(const BQ& a, const BQ& b, std::size_t K) {
    BQ r = make_bq(std::max(a.size(), b.size()), K);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t k = 0; k < K; ++k) {
            Rat v(0);
            if (i < a.size() && k < a[i].size()) v += a[i][k];
            if (i < b.size() && k < b[i].size()) v -= b[i][k];
            r[i][k] = v;
        }
    return r;
}

inline BQ scale_series(const BQ& a, const Series& s, std::size_t K) {
    BQ r = make_bq(a.size(), K);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = series_mul(a[i], s, K);
    return r;
}

// Division by b monic in x (lc series == 1): a = q*b + r with xdeg r < xdeg b.
inline void divmod_monic(const BQ& a, const BQ& b, std::size_t K, BQ& q, BQ& r) {
    long db = xdeg(b);
    require(db >= 0, errc::internal, "bivariate division by zero");
    r = a;
    r.resize(std::max<std::size_t>(a.size(), 1), Series(K, Rat(0)));
    long dr = xdeg(r);
    q = make_bq(static_cast<std::size_t>(std::max<long>(dr - db + 1, 1)), K);
    while (dr >= db) {
        Series c = r[static_cast<std::size_t>(dr)];
        auto& qdst = q[static_cast<std::size_t>(dr - db)];
        for (std::size_t k = 0; k < K; ++k) qdst[k] += c[k];
        for (long i = 0; i <= db; ++i) {
            Series prod = series_mul(c, b[static_cast<std::size_t>(i)], K);
            auto& dst = r[static_cast<std::size_t>(dr - db + i)];
            for (std::size_t k = 0; k < K; ++k) dst[k] -= prod[k];
        }
        dr = xdeg(r);
    }
}

// Hensel step mod t^m -> t^(2m): f == g*h, s*g + t_*h == 1, h monic in x.
inline void hensel_step(std::size_t m, std::size_t K, const BQ& f, BQ& g, BQ& h, BQ& s, BQ& t_) {
    std::size_t m2 = std::min(2 * m, K);
    auto trunc = [&](BQ& p) {
        for (auto& row : p)
            for (std::size_t k = m2; k < row.size(); ++k) row[k] = Rat(0);
    };
    BQ e = sub(f, mul(g, h, m2), m2);
    BQ q, r;
    divmod_monic(mul(s, e, m2), h, m2, q, r);
    BQ gnew = g;
    {
        BQ te = mul(t_, e, m2), qg = mul(q, g, m2);
        gnew.resize(std::max({gnew.size(), te.size(), qg.size()}), Series(m2, Rat(0)));
        for (auto& row : gnew) row.resize(std::max<std::size_t>(row.size(), m2), Rat(0));
        for (std::size_t i = 0; i < te.size(); ++i)
            for (std::size_t k = 0; k < m2; ++k) gnew[i][k] += te[i][k];
        for (std::size_t i = 0; i < qg.size(); ++i)
            for (std::size_t k = 0; k < m2; ++k) gnew[i][k] += qg[i][k];
    }
    BQ hnew = h;
    {
        hnew.resize(std::max(hnew.size(), r.size()), Series(m2, Rat(0)));
        for (auto& row : hnew) row.resize(std::max<std::size_t>(row.size(), m2), Rat(0));
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t k = 0; k < m2; ++k) hnew[i][k] += r[i][k];
    }
    trunc(gnew);
    trunc(hnew);
    BQ one = make_bq(1, m2);
    one[0][0] = Rat(1);
    BQ b = sub(mul(s, gnew, m2), one, m2);
    {
        BQ th = mul(t_, hnew, m2);
        b.resize(std::max(b.size(), th.size()), Series(m2, Rat(0)));
        for (auto& row : b) row.resize(std::max<std::size_t>(row.size(), m2), Rat(0));
        for (std::size_t i = 0; i < th.size(); ++i)
            for (std::size_t k = 0; k < m2; ++k) b[i][k] += th[i][k];
        // b = s*g' + t*h' - 1
    }
    BQ c, d;
    divmod_monic(mul(s, b, m2), hnew, m2, c, d);
    BQ snew = sub(s, d, m2);
    BQ tnew = sub(sub(t_, mul(t_, b, m2), m2), mul(c, gnew, m2), m2);
    g = std::move(gnew);
    h = std::move(hnew);
    s = std::move(snew);
    t_ = std::move(tnew);
}

struct Node {
    BQ prod, s, t;
    std::unique_ptr<Node> left, right;
    bool leaf() const { return !left; }
};

// Univariate extended Euclid over Q on BQ values taken mod t (t = 0 slice).
inline void extgcd_mod_t(const BQ& a, const BQ& b, std::size_t K, BQ& s, BQ& t_) {
    auto slice = [&](const BQ& p) {
        std::vector<Rat> u(p.size(), Rat(0));
        for (std::size_t i = 0; i < p.size(); ++i) u[i] = p[i].empty() ? Rat(0) : p[i][0];
        while (!u.empty() && u.back().is_zero()) u.pop_back();
        return u;
    };
    auto deg = [](const std::vector<Rat>& p) { return static_cast<long>(p.size()) - 1; };
    std::vector<Rat> r0 = slice(a), r1 = slice(b);
    std::vector<Rat> s0 = {Rat(1)}, s1 = {}, t0 = {}, t1 = {Rat(1)};
    auto step_mul_sub = [&](const std::vector<Rat>& u, const std::vector<Rat>& q,
                            const std::vector<Rat>& v) {
        // u - q*v
        std::vector<Rat> r(std::max(u.size(), q.size() + v.size()), Rat(0));
        for (std::size_t i = 0; i < u.size(); ++i) r[i] += u[i];
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) r[i + j] -= q[i] * v[j];
        while (!r.empty() && r.back().is_zero()) r.pop_back();
        return r;
    };
    while (!r1.empty()) {
        // quotient r0 / r1
        std::vector<Rat> q(std::max<long>(deg(r0) - deg(r1) + 1, 0), Rat(0));
        std::vector<Rat> rem = r0;
        while (deg(rem) >= deg(r1) && !rem.empty()) {
            long k = deg(rem) - deg(r1);
            Rat c = rem.back() / r1.back();
            q[static_cast<std::size_t>(k)] = c;
            for (std::size_t i = 0; i < r1.size(); ++i)
                rem[static_cast<std::size_t>(k) + i] -= c * r1[i];
            while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
        }
        r0 = std::move(r1);
        r1 = std::move(rem);
        auto s2 = step_mul_sub(s0, q, s1);
        auto t2 = step_mul_sub(t0, q, t1);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    require(deg(r0) == 0 && !r0.empty(), errc::internal, "hensel leaves are not coprime");
    Rat inv = Rat(1) / r0[0];
    auto to_bq = [&](const std::vector<Rat>& u) {
        BQ p = make_bq(std::max<std::size_t>(u.size(), 1), K);
        for (std::size_t i = 0; i < u.size(); ++i) p[i][0] = u[i] * inv;
        return p;
    };
    s = to_bq(s0);
    t_ = to_bq(t0);
}

inline std::unique_ptr<Node> build_tree(const std::vector<BQ>& leaves, std::size_t lo,
                                        std::size_t hi, std::size_t K) {
    auto node = std::make_unique<Node>();
    if (hi - lo == 1) {
        node->prod = leaves[lo];
        return node;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    node->left = build_tree(leaves, lo, mid, K);
    node->right = build_tree(leaves, mid, hi, K);
    node->prod = mul(node->left->prod, node->right->prod, K);
    extgcd_mod_t(node->left->prod, node->right->prod, K, node->s, node->t);
    return node;
}

inline void lift_pass(Node& node, const BQ& f_target, std::size_t m, std::size_t K) {
    node.prod = f_target;
    if (node.leaf()) return;
    BQ g = node.left->prod, h = node.right->prod, s = node.s, t_ = node.t;
    hensel_step(m, K, f_target, g, h, s, t_);
    node.s = std::move(s);
    node.t = std::move(t_);
    lift_pass(*node.left, g, m, K);
    lift_pass(*node.right, h, m, K);
}

inline void collect_leaves(const Node& node, std::vector<BQ>& out) {
    if (node.leaf()) {
        out.push_back(node.prod);
        return;
    }
    collect_leaves(*node.left, out);
    collect_leaves(*node.right, out);
}

} // namespace bvx
} // namespace polygrid

#endif
