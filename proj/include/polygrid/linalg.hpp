#ifndef POLYGRID_LINALG_HPP
#define POLYGRID_LINALG_HPP

#include <optional>
#include <vector>

#include "polygrid/polynomial.hpp"

namespace polygrid {

// Dense exact rational matrix.
class RatMatrix {
public:
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rat(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatMatrix transposed() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rat> data_;
};

namespace detail {

// Clears denominators row by row; scaling rows changes neither rank nor
// nullspace, and the determinant bookkeeping recovers the scale.
inline std::vector<std::vector<Int>> cleared(const RatMatrix& a, Rat& det_scale) {
    det_scale = Rat(1);
    std::vector<std::vector<Int>> m(a.rows(), std::vector<Int>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Int l = 1;
        for (std::size_t j = 0; j < a.cols(); ++j) l = lcm(l, a.at(i, j).den());
        det_scale *= Rat(Int(1), l);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rat v = a.at(i, j) * Rat(l);
            m[i][j] = v.num();
        }
    }
    return m;
}

} // namespace detail

// Exact rank via fraction-free Bareiss elimination over the integers.
inline std::size_t rank(const RatMatrix& a) {
    Rat scale;
    auto m = detail::cleared(a, scale);
    const std::size_t R = a.rows(), C = a.cols();
    std::size_t rk = 0;
    Int prev = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < C && row < R; ++col) {
        std::size_t piv = R;
        for (std::size_t r = row; r < R; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv == R) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t i = row + 1; i < R; ++i) {
            for (std::size_t j = col + 1; j < C; ++j) {
                Int t = m[i][j] * m[row][col] - m[i][col] * m[row][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = t;
            }
            m[i][col] = 0;
        }
        prev = m[row][col];
        ++row;
        ++rk;
    }
    return rk;
}

// Exact determinant (Bareiss over integers after clearing denominators).
inline Rat determinant(const RatMatrix& a) {
    require(a.rows() == a.cols(), errc::dimension_mismatch, "determinant of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return Rat(1);
    Rat scale;
    auto m = detail::cleared(a, scale);
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = n;
        for (std::size_t r = k; r < n; ++r)
            if (m[r][k] != 0) {
                piv = r;
                break;
            }
        if (piv == n) return Rat(0);
        if (piv != k) {
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = t;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Rat det(m[n - 1][n - 1]);
    if (sign < 0) det = -det;
    return det * scale;
}

namespace detail {

// Reduced row echelon form over Q; returns pivot column per row.
inline std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = m.rows();
        for (std::size_t r = row; r < m.rows(); ++r)
            if (!m.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv == m.rows()) continue;
        if (piv != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        Rat inv = Rat(1) / m.at(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col).is_zero()) continue;
            Rat f = m.at(r, col);
            for (std::size_t j = col; j < m.cols(); ++j) m.at(r, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace detail

// One exact solution of A x = b, or nullopt when inconsistent.
// Under-determined systems pin the free variables to zero.
inline std::optional<std::vector<Rat>> solve(const RatMatrix& a, const std::vector<Rat>& b) {
    require(b.size() == a.rows(), errc::dimension_mismatch, "solve: rhs dimension mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    auto pivots = detail::rref(aug);
    // Inconsistent iff a pivot lands in the rhs column.
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<Rat> x(a.cols(), Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, a.cols());
    return x;
}

// Exact basis of the right kernel; empty iff rank == cols.
inline std::vector<std::vector<Rat>> nullspace(const RatMatrix& a) {
    RatMatrix m = a;
    auto pivots = detail::rref(m);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (std::size_t free_col = 0; free_col < a.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rat> v(a.cols(), Rat(0));
        v[free_col] = Rat(1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m.at(r, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Determinant of a matrix of polynomials
// ---------------------------------------------------------------------------

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

namespace detail {

inline MultiPoly det_cofactor(const PolyMatrix& m, const ArenaPtr& arena) {
    const std::size_t n = m.size();
    if (n == 0) return MultiPoly::constant(arena, Rat(1));
    if (n == 1) return m[0][0];
    MultiPoly acc(arena);
    for (std::size_t r = 0; r < n; ++r) {
        if (m[r][0].is_zero()) continue;
        PolyMatrix minor;
        minor.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r) continue;
            minor.emplace_back(m[i].begin() + 1, m[i].end());
        }
        MultiPoly t = m[r][0] * det_cofactor(minor, arena);
        acc = (r % 2 == 0) ? acc + t : acc - t;
    }
    return acc;
}

inline MultiPoly det_interp(const PolyMatrix& m, const ArenaPtr& arena,
                            const std::vector<std::size_t>& vars, std::size_t vi) {
    const std::size_t n = m.size();
    if (vi == vars.size()) {
        RatMatrix num(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) num.at(i, j) = m[i][j].constant_value();
        return MultiPoly::constant(arena, determinant(num));
    }
    std::size_t v = vars[vi];
    long bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
        long rb = 0;
        for (std::size_t j = 0; j < n; ++j) rb = std::max(rb, m[i][j].degree_in_or(v, 0));
        bound += rb;
    }
    std::vector<Rat> nodes;
    std::vector<MultiPoly> values;
    for (long t = 0; t <= bound; ++t) {
        Rat node(t);
        PolyMatrix spec(n, std::vector<MultiPoly>(n, MultiPoly(arena)));
        std::map<std::size_t, Rat> bind{{v, node}};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) spec[i][j] = m[i][j].partial_evaluate(bind);
        nodes.push_back(node);
        values.push_back(det_interp(spec, arena, vars, vi + 1));
    }
    // Newton divided differences with polynomial values.
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

// Determinant of a polynomial matrix: cofactor expansion up to 4x4,
// evaluation-interpolation with row-degree-sum bounds above that.
inline MultiPoly det_poly(const PolyMatrix& m, const ArenaPtr& arena,
                          long budget_points = 1 << 20) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        require(row.size() == n, errc::dimension_mismatch, "determinant of non-square matrix");
    if (n <= 4) return detail::det_cofactor(m, arena);
    std::vector<std::size_t> vars;
    long grid = 1;
    for (std::size_t v = 0; v < arena->count(); ++v) {
        long bound = 0;
        for (std::size_t i = 0; i < n; ++i) {
            long rb = 0;
            for (std::size_t j = 0; j < n; ++j) rb = std::max(rb, m[i][j].degree_in_or(v, 0));
            bound += rb;
        }
        if (bound > 0) {
            vars.push_back(v);
            grid *= bound + 1;
            require(grid <= budget_points, errc::budget_exceeded,
                    "det_poly interpolation grid exceeds budget");
        }
    }
    return detail::det_interp(m, arena, vars, 0);
}

} // namespace polygrid

#endif
