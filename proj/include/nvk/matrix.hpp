#pragma once

#include <algorithm>
#include <vector>

#include "nvk/errors.hpp"
#include "nvk/laurent.hpp"
#include "nvk/rational.hpp"

namespace nvk {

// Dense row-major matrix over an arbitrary entry type. Zero-dimensional
// matrices are legal everywhere (complexes truncate at both ends).
template <class T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c, const T& fill) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {
        if (r < 0 || c < 0) throw ShapeError("negative matrix dimensions");
    }

    T& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    Mat transposed() const {
        Mat t(cols, rows, a.empty() ? T{} : a[0]);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }
};

using QMat = Mat<Rat>;
using IntMat = Mat<Int>;
using LMat = Mat<LaurentPoly>;

// --- entry-ring policies -------------------------------------------------
//
// The elimination algorithms below are generic over an integral domain;
// a policy object supplies the ring constants and exact division. The
// Laurent policy carries the ambient variable count so that zero/one
// exist even for zero-dimensional matrices.

struct RatRing {
    using Elem = Rat;
    Rat zero() const { return Rat(0); }
    Rat one() const { return Rat(1); }
    bool is_zero(const Rat& x) const { return sgn(x) == 0; }
    Rat mul(const Rat& x, const Rat& y) const { return x * y; }
    Rat sub(const Rat& x, const Rat& y) const { return x - y; }
    Rat divexact(const Rat& x, const Rat& y) const { return x / y; }
    size_t pivot_weight(const Rat&) const { return 1; }
};

struct IntRing {
    using Elem = Int;
    Int zero() const { return Int(0); }
    Int one() const { return Int(1); }
    bool is_zero(const Int& x) const { return sgn(x) == 0; }
    Int mul(const Int& x, const Int& y) const { return x * y; }
    Int sub(const Int& x, const Int& y) const { return x - y; }
    Int divexact(const Int& x, const Int& y) const {
        Int q;
        mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        return q;
    }
    size_t pivot_weight(const Int& x) const { return mpz_sizeinbase(x.get_mpz_t(), 2); }
};

struct LaurentRing {
    int nvars = 0;
    using Elem = LaurentPoly;
    LaurentPoly zero() const { return LaurentPoly::zero(nvars); }
    LaurentPoly one() const { return LaurentPoly::constant(nvars, Rat(1)); }
    bool is_zero(const LaurentPoly& x) const { return x.is_zero(); }
    LaurentPoly mul(const LaurentPoly& x, const LaurentPoly& y) const { return x * y; }
    LaurentPoly sub(const LaurentPoly& x, const LaurentPoly& y) const { return x - y; }
    LaurentPoly divexact(const LaurentPoly& x, const LaurentPoly& y) const {
        return x.divided_exactly_by(y);
    }
    size_t pivot_weight(const LaurentPoly& x) const { return x.term_count(); }
};

namespace detail {

// One-pass fraction-free (Bareiss) elimination with full pivoting.
// Pivots are chosen by minimal weight (term count for polynomials) to
// keep intermediate entries small. Returns the rank; if `det_out` is
// non-null the matrix must be square and the signed last pivot (the
// determinant) is stored there.
template <class Ring>
int bareiss(Mat<typename Ring::Elem> m, const Ring& ring,
            typename Ring::Elem* det_out = nullptr) {
    using E = typename Ring::Elem;
    const int n = std::min(m.rows, m.cols);
    E prev = ring.one();
    int sign = 1;
    int rank = 0;
    for (int step = 0; step < n; ++step) {
        // minimal-weight nonzero pivot in the trailing submatrix
        int pi = -1, pj = -1;
        size_t best = 0;
        for (int i = step; i < m.rows; ++i)
            for (int j = step; j < m.cols; ++j) {
                const E& x = m.at(i, j);
                if (ring.is_zero(x)) continue;
                size_t w = ring.pivot_weight(x);
                if (pi < 0 || w < best) {
                    pi = i;
                    pj = j;
                    best = w;
                }
            }
        if (pi < 0) break;  // trailing submatrix is zero
        if (pi != step) {
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(step, j), m.at(pi, j));
            sign = -sign;
        }
        if (pj != step) {
            for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, step), m.at(i, pj));
            sign = -sign;
        }
        const E pivot = m.at(step, step);
        for (int i = step + 1; i < m.rows; ++i) {
            for (int j = step + 1; j < m.cols; ++j) {
                E num = ring.sub(ring.mul(pivot, m.at(i, j)),
                                 ring.mul(m.at(i, step), m.at(step, j)));
                m.at(i, j) = ring.divexact(num, prev);
            }
            m.at(i, step) = ring.zero();
        }
        prev = pivot;
        ++rank;
    }
    if (det_out) {
        if (m.rows != m.cols) throw ShapeError("determinant of non-square matrix");
        if (rank < m.rows)
            *det_out = ring.zero();
        else if (m.rows == 0)
            *det_out = ring.one();
        else {
            *det_out = m.at(m.rows - 1, m.rows - 1);
            if (sign < 0) *det_out = ring.sub(ring.zero(), *det_out);
        }
    }
    return rank;
}

// Lexicographic enumeration of r-subsets of {0..n-1}.
inline bool next_subset(std::vector<int>& s, int n) {
    int r = static_cast<int>(s.size());
    for (int i = r - 1; i >= 0; --i) {
        if (s[i] < n - (r - i)) {
            ++s[i];
            for (int j = i + 1; j < r; ++j) s[j] = s[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Rank of M over the fraction field of the entry ring; exact.
template <class Ring>
int rank_over_fractions(const Mat<typename Ring::Elem>& m, const Ring& ring) {
    return detail::bareiss(m, ring);
}

// Exact determinant by fraction-free elimination.
template <class Ring>
typename Ring::Elem det(const Mat<typename Ring::Elem>& m, const Ring& ring) {
    if (m.rows != m.cols) throw ShapeError("determinant of non-square matrix");
    typename Ring::Elem d = ring.zero();
    detail::bareiss(m, ring, &d);
    return d;
}

// All r x r minors in lexicographic order on (row subset, column
// subset); duplicates retained.
template <class Ring>
std::vector<typename Ring::Elem> minors(const Mat<typename Ring::Elem>& m, int r,
                                        const Ring& ring) {
    if (r <= 0 || r > m.rows || r > m.cols)
        throw ShapeError("minor size out of range");
    std::vector<typename Ring::Elem> out;
    std::vector<int> rs(r), cs0(r);
    for (int i = 0; i < r; ++i) rs[i] = i;
    do {
        for (int i = 0; i < r; ++i) cs0[i] = i;
        std::vector<int> cs = cs0;
        do {
            Mat<typename Ring::Elem> sub(r, r, ring.zero());
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) sub.at(i, j) = m.at(rs[i], cs[j]);
            out.push_back(det(sub, ring));
        } while (detail::next_subset(cs, m.cols));
    } while (detail::next_subset(rs, m.rows));
    return out;
}

// Entry-wise ring homomorphism induced by p on a Laurent matrix.
inline LMat apply_hom(const MonoidHom& p, const LMat& m) {
    LMat out(m.rows, m.cols, LaurentPoly::zero(p.m));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(i, j) = apply_hom(p, m.at(i, j));
    return out;
}

inline LMat lmat_mul(const LMat& x, const LMat& y, int nvars) {
    if (x.cols != y.rows) throw ShapeError("matrix product shape mismatch");
    LMat out(x.rows, y.cols, LaurentPoly::zero(nvars));
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (x.at(i, k).is_zero()) continue;
            for (int j = 0; j < y.cols; ++j)
                out.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return out;
}

}  // namespace nvk
