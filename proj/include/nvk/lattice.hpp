#pragma once

#include <cstdlib>
#include <vector>

#include "nvk/errors.hpp"
#include "nvk/matrix.hpp"
#include "nvk/rational.hpp"

namespace nvk {

// Integer-lattice normal forms. Everything here is exact over
// arbitrary-precision integers; all bases returned are canonical
// (Hermite form), so equal lattices produce equal matrices.

struct SmithResult {
    IntMat u;  // rows x rows, unimodular
    IntMat d;  // rows x cols, diagonal, d_i | d_{i+1}
    IntMat v;  // cols x cols, unimodular
};

namespace detail {

inline void negate_row(IntMat& m, int i) {
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = -m.at(i, j);
}

inline void add_row_multiple(IntMat& m, int dst, int src, const Int& q) {
    for (int j = 0; j < m.cols; ++j) m.at(dst, j) -= q * m.at(src, j);
}

inline void swap_rows(IntMat& m, int i, int j) {
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

inline Int tdiv(const Int& a, const Int& b) {
    Int q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace detail

// Unique row-Hermite basis of the lattice spanned by the rows of M:
// row echelon, positive pivots, entries above each pivot reduced into
// [0, pivot). Zero rows are dropped.
inline IntMat row_lattice_hnf(const IntMat& m) {
    IntMat h = m;
    int r = 0;
    for (int col = 0; col < h.cols && r < h.rows; ++col) {
        for (;;) {
            int best = -1;
            for (int i = r; i < h.rows; ++i) {
                if (sgn(h.at(i, col)) == 0) continue;
                if (best < 0 || cmp(abs(h.at(i, col)), abs(h.at(best, col))) < 0) best = i;
            }
            if (best < 0) break;
            if (best != r) detail::swap_rows(h, best, r);
            bool clean = true;
            for (int i = r + 1; i < h.rows; ++i) {
                if (sgn(h.at(i, col)) == 0) continue;
                Int q = detail::tdiv(h.at(i, col), h.at(r, col));
                if (sgn(q) != 0) detail::add_row_multiple(h, i, r, q);
                if (sgn(h.at(i, col)) != 0) clean = false;
            }
            if (clean) {
                if (sgn(h.at(r, col)) < 0) detail::negate_row(h, r);
                for (int i = 0; i < r; ++i) {
                    Int q = detail::fdiv(h.at(i, col), h.at(r, col));
                    if (sgn(q) != 0) detail::add_row_multiple(h, i, r, q);
                }
                ++r;
                break;
            }
        }
    }
    IntMat out(r, h.cols, Int(0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < h.cols; ++j) out.at(i, j) = h.at(i, j);
    return out;
}

// Canonical basis (columns) of the lattice spanned by the columns of A.
inline IntMat column_lattice_basis(const IntMat& a) {
    return row_lattice_hnf(a.transposed()).transposed();
}

// Basis (columns) of {x in Z^n : A x = 0}. Always saturated and in
// canonical form.
inline IntMat kernel_lattice(const IntMat& a) {
    const int n = a.cols, m = a.rows;
    // [A^T | I]: row-reduce the A^T part; rows whose A^T part becomes
    // zero carry a kernel basis in the identity part.
    IntMat w(n, m + n, Int(0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) w.at(i, j) = a.at(j, i);
        w.at(i, m + i) = 1;
    }
    int r = 0;
    for (int col = 0; col < m && r < n; ++col) {
        for (;;) {
            int best = -1;
            for (int i = r; i < n; ++i) {
                if (sgn(w.at(i, col)) == 0) continue;
                if (best < 0 || cmp(abs(w.at(i, col)), abs(w.at(best, col))) < 0) best = i;
            }
            if (best < 0) break;
            if (best != r) detail::swap_rows(w, best, r);
            bool clean = true;
            for (int i = r + 1; i < n; ++i) {
                if (sgn(w.at(i, col)) == 0) continue;
                Int q = detail::tdiv(w.at(i, col), w.at(r, col));
                if (sgn(q) != 0) detail::add_row_multiple(w, i, r, q);
                if (sgn(w.at(i, col)) != 0) clean = false;
            }
            if (clean) {
                ++r;
                break;
            }
        }
    }
    IntMat ker(n - r, n, Int(0));
    for (int i = r; i < n; ++i)
        for (int j = 0; j < n; ++j) ker.at(i - r, j) = w.at(i, m + j);
    return row_lattice_hnf(ker).transposed();
}

// Smith normal form with transforms: U*A*V = D, U and V unimodular,
// D diagonal with non-negative entries and d_i | d_{i+1}.
inline SmithResult smith_normal_form(const IntMat& a) {
    SmithResult res;
    res.d = a;
    IntMat& d = res.d;
    res.u = IntMat(a.rows, a.rows, Int(0));
    res.v = IntMat(a.cols, a.cols, Int(0));
    for (int i = 0; i < a.rows; ++i) res.u.at(i, i) = 1;
    for (int j = 0; j < a.cols; ++j) res.v.at(j, j) = 1;
    IntMat& u = res.u;
    IntMat& v = res.v;

    auto swap_cols = [&](IntMat& m, int i, int j) {
        for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
    };
    auto add_col_multiple = [&](IntMat& m, int dst, int src, const Int& q) {
        for (int r = 0; r < m.rows; ++r) m.at(r, dst) -= q * m.at(r, src);
    };

    const int steps = std::min(a.rows, a.cols);
    for (int t = 0; t < steps; ++t) {
        // locate a minimal-magnitude nonzero pivot in the trailing block
        int pi = -1, pj = -1;
        for (int i = t; i < d.rows; ++i)
            for (int j = t; j < d.cols; ++j) {
                if (sgn(d.at(i, j)) == 0) continue;
                if (pi < 0 || cmp(abs(d.at(i, j)), abs(d.at(pi, pj))) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        if (pi != t) {
            detail::swap_rows(d, pi, t);
            detail::swap_rows(u, pi, t);
        }
        if (pj != t) {
            swap_cols(d, pj, t);
            swap_cols(v, pj, t);
        }
        for (;;) {
            // clear column t
            bool col_clean = true;
            for (int i = t + 1; i < d.rows; ++i) {
                if (sgn(d.at(i, t)) == 0) continue;
                Int q = detail::tdiv(d.at(i, t), d.at(t, t));
                if (sgn(q) != 0) {
                    detail::add_row_multiple(d, i, t, q);
                    detail::add_row_multiple(u, i, t, q);
                }
                if (sgn(d.at(i, t)) != 0) col_clean = false;
            }
            if (!col_clean) {
                // a smaller remainder appeared; move it to the pivot
                int best = t;
                for (int i = t + 1; i < d.rows; ++i)
                    if (sgn(d.at(i, t)) != 0 &&
                        (sgn(d.at(best, t)) == 0 ||
                         cmp(abs(d.at(i, t)), abs(d.at(best, t))) < 0))
                        best = i;
                if (best != t) {
                    detail::swap_rows(d, best, t);
                    detail::swap_rows(u, best, t);
                }
                continue;
            }
            // clear row t
            bool row_clean = true;
            for (int j = t + 1; j < d.cols; ++j) {
                if (sgn(d.at(t, j)) == 0) continue;
                Int q = detail::tdiv(d.at(t, j), d.at(t, t));
                if (sgn(q) != 0) {
                    add_col_multiple(d, j, t, q);
                    add_col_multiple(v, j, t, q);
                }
                if (sgn(d.at(t, j)) != 0) row_clean = false;
            }
            if (!row_clean) {
                int best = t;
                for (int j = t + 1; j < d.cols; ++j)
                    if (sgn(d.at(t, j)) != 0 &&
                        (sgn(d.at(t, best)) == 0 ||
                         cmp(abs(d.at(t, j)), abs(d.at(t, best))) < 0))
                        best = j;
                if (best != t) {
                    swap_cols(d, best, t);
                    swap_cols(v, best, t);
                }
                continue;
            }
            // divisibility: pivot must divide every trailing entry
            int bi = -1;
            for (int i = t + 1; i < d.rows && bi < 0; ++i)
                for (int j = t + 1; j < d.cols; ++j)
                    if (sgn(d.at(i, j) % d.at(t, t)) != 0) {
                        bi = i;
                        break;
                    }
            if (bi < 0) break;
            detail::add_row_multiple(d, t, bi, Int(-1));
            detail::add_row_multiple(u, t, bi, Int(-1));
        }
        if (sgn(d.at(t, t)) < 0) {
            detail::negate_row(d, t);
            detail::negate_row(u, t);
        }
    }
    return res;
}

// Basis (columns) of the saturation of the column span of A: the
// smallest full subgroup of Z^n containing it.
inline IntMat saturate(const IntMat& a) {
    IntMat ortho = kernel_lattice(a.transposed());  // n x s
    return kernel_lattice(ortho.transposed());
}

inline int lattice_rank(const IntMat& basis) {
    return rank_over_fractions(basis, IntRing{});
}

// True if the column span is a direct summand of Z^n.
inline bool is_saturated(const IntMat& basis) {
    SmithResult s = smith_normal_form(basis);
    int r = 0;
    for (int t = 0; t < std::min(s.d.rows, s.d.cols); ++t)
        if (sgn(s.d.at(t, t)) != 0) {
            if (s.d.at(t, t) != 1) return false;
            ++r;
        }
    return true;
}

// Membership of an integer vector in the lattice spanned by the
// columns of `basis`.
inline bool lattice_contains(const IntMat& basis, const std::vector<Int>& vec) {
    if (static_cast<int>(vec.size()) != basis.rows)
        throw ShapeError("lattice membership: ambient rank mismatch");
    IntMat ext(basis.rows, basis.cols + 1, Int(0));
    for (int i = 0; i < basis.rows; ++i) {
        for (int j = 0; j < basis.cols; ++j) ext.at(i, j) = basis.at(i, j);
        ext.at(i, basis.cols) = vec[i];
    }
    return column_lattice_basis(ext) == column_lattice_basis(basis);
}

// Membership of a rational vector in the Q-span of the columns.
inline bool q_span_contains(const IntMat& basis, const std::vector<Rat>& vec) {
    if (static_cast<int>(vec.size()) != basis.rows)
        throw ShapeError("span membership: ambient rank mismatch");
    QMat ext(basis.rows, basis.cols + 1, Rat(0));
    for (int i = 0; i < basis.rows; ++i) {
        for (int j = 0; j < basis.cols; ++j) ext.at(i, j) = Rat(basis.at(i, j));
        ext.at(i, basis.cols) = vec[i];
    }
    QMat plain(basis.rows, basis.cols, Rat(0));
    for (int i = 0; i < basis.rows; ++i)
        for (int j = 0; j < basis.cols; ++j) plain.at(i, j) = Rat(basis.at(i, j));
    RatRing ring;
    return rank_over_fractions(ext, ring) == rank_over_fractions(plain, ring);
}

}  // namespace nvk
