#pragma once

#include <optional>
#include <vector>

#include "nvk/errors.hpp"
#include "nvk/matrix.hpp"

namespace nvk {

// Dense exact linear algebra over Q: reduced row echelon, solving,
// kernels, images, and sub-quotient bases. This is the workhorse of the
// spectral-sequence module, where every space is a subquotient of a
// finite-dimensional rational cochain space.

using QVec = std::vector<Rat>;

struct RrefResult {
    QMat m;
    std::vector<int> pivot_cols;
    int rank = 0;
};

inline RrefResult rref(QMat m) {
    RrefResult res;
    int r = 0;
    for (int col = 0; col < m.cols && r < m.rows; ++col) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (!is_zero(m.at(i, col))) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
        Rat inv = Rat(1) / m.at(r, col);
        for (int j = col; j < m.cols; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || is_zero(m.at(i, col))) continue;
            Rat f = m.at(i, col);
            for (int j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        res.pivot_cols.push_back(col);
        ++r;
    }
    res.rank = r;
    res.m = std::move(m);
    return res;
}

inline int qrank(const QMat& m) { return rref(m).rank; }

inline QMat qmat_mul(const QMat& x, const QMat& y) {
    if (x.cols != y.rows) throw ShapeError("matrix product shape mismatch");
    QMat out(x.rows, y.cols, Rat(0));
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (is_zero(x.at(i, k))) continue;
            for (int j = 0; j < y.cols; ++j) out.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return out;
}

inline QVec mat_vec(const QMat& m, const QVec& v) {
    if (static_cast<int>(v.size()) != m.cols) throw ShapeError("matrix-vector shape mismatch");
    QVec out(m.rows, Rat(0));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (!is_zero(m.at(i, j))) out[i] += m.at(i, j) * v[j];
    return out;
}

inline bool is_zero_vec(const QVec& v) {
    for (const auto& x : v)
        if (!is_zero(x)) return false;
    return true;
}

inline QMat from_columns(int ambient, const std::vector<QVec>& cols) {
    QMat m(ambient, static_cast<int>(cols.size()), Rat(0));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (static_cast<int>(cols[j].size()) != ambient)
            throw ShapeError("column length mismatch");
        for (int i = 0; i < ambient; ++i) m.at(i, static_cast<int>(j)) = cols[j][i];
    }
    return m;
}

inline QVec column_of(const QMat& m, int j) {
    QVec v(m.rows, Rat(0));
    for (int i = 0; i < m.rows; ++i) v[i] = m.at(i, j);
    return v;
}

// Basis (columns) of the null space of m.
inline QMat kernel_basis(const QMat& m) {
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : r.pivot_cols) is_pivot[c] = true;
    std::vector<QVec> cols;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(m.cols, Rat(0));
        v[free] = 1;
        for (size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
            v[r.pivot_cols[pi]] = -r.m.at(static_cast<int>(pi), free);
        cols.push_back(std::move(v));
    }
    return from_columns(m.cols, cols);
}

// Columns of m forming a basis of its column space.
inline QMat column_space_basis(const QMat& m) {
    RrefResult r = rref(m);
    std::vector<QVec> cols;
    for (int c : r.pivot_cols) cols.push_back(column_of(m, c));
    return from_columns(m.rows, cols);
}

// One exact solution of A x = b, or nullopt when inconsistent.
inline std::optional<QVec> solve(const QMat& a, const QVec& b) {
    if (static_cast<int>(b.size()) != a.rows) throw ShapeError("solve: rhs length mismatch");
    QMat aug(a.rows, a.cols + 1, Rat(0));
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols) = b[i];
    }
    RrefResult r = rref(std::move(aug));
    QVec x(a.cols, Rat(0));
    for (size_t pi = 0; pi < r.pivot_cols.size(); ++pi) {
        if (r.pivot_cols[pi] == a.cols) return std::nullopt;  // pivot in rhs column
        x[r.pivot_cols[pi]] = r.m.at(static_cast<int>(pi), a.cols);
    }
    return x;
}

// Particular solutions of A X = B column by column (free variables
// zero), or nullopt if any column is inconsistent.
inline std::optional<QMat> solve_multi(const QMat& a, const QMat& b) {
    if (b.rows != a.rows) throw ShapeError("solve_multi: rhs row mismatch");
    QMat aug(a.rows, a.cols + b.cols, Rat(0));
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols; ++j) aug.at(i, a.cols + j) = b.at(i, j);
    }
    RrefResult r = rref(std::move(aug));
    for (int c : r.pivot_cols)
        if (c >= a.cols) return std::nullopt;
    QMat x(a.cols, b.cols, Rat(0));
    for (size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
        for (int j = 0; j < b.cols; ++j)
            x.at(r.pivot_cols[pi], j) = r.m.at(static_cast<int>(pi), a.cols + j);
    return x;
}

// The subquotient span(Z)/span(B) of an ambient Q^d, with B contained
// in span(Z). Quotient classes are carried by ambient representatives.
class Quotient {
public:
    Quotient(int ambient, const QMat& z_span, const QMat& b_span) : ambient_(ambient) {
        if (z_span.rows != ambient || b_span.rows != ambient)
            throw ShapeError("subquotient: ambient dimension mismatch");
        {
            QMat joint(ambient, z_span.cols + b_span.cols, Rat(0));
            for (int i = 0; i < ambient; ++i) {
                for (int j = 0; j < z_span.cols; ++j) joint.at(i, j) = z_span.at(i, j);
                for (int j = 0; j < b_span.cols; ++j)
                    joint.at(i, z_span.cols + j) = b_span.at(i, j);
            }
            if (qrank(joint) != qrank(z_span))
                throw InvariantError("subquotient: denominator escapes the subspace");
        }
        QMat b_basis = column_space_basis(b_span);
        b_dim_ = b_basis.cols;
        // grow [B-basis | chosen Z columns] keeping columns independent
        std::vector<QVec> cols;
        for (int j = 0; j < b_basis.cols; ++j) cols.push_back(column_of(b_basis, j));
        int current_rank = b_dim_;
        for (int j = 0; j < z_span.cols; ++j) {
            cols.push_back(column_of(z_span, j));
            QMat probe = from_columns(ambient_, cols);
            if (qrank(probe) > current_rank) {
                ++current_rank;
                reps_.push_back(column_of(z_span, j));
            } else {
                cols.pop_back();
            }
        }
        solve_mat_ = from_columns(ambient_, cols);
        // sanity: B must sit inside span(Z) + chosen columns
        if (qrank(solve_mat_) != b_dim_ + static_cast<int>(reps_.size()))
            throw InvariantError("subquotient basis construction failed");
    }

    int dim() const { return static_cast<int>(reps_.size()); }
    int ambient() const { return ambient_; }
    const std::vector<QVec>& reps() const { return reps_; }

    // Quotient coordinates of an ambient vector lying in span(Z).
    QVec coords(const QVec& v) const {
        auto sol = solve(solve_mat_, v);
        if (!sol)
            throw InvariantError("subquotient coordinates of a vector outside the subspace");
        return QVec(sol->begin() + b_dim_, sol->end());
    }

    // Membership in span(Z) (the subspace whose quotient this is).
    bool contains(const QVec& v) const { return solve(solve_mat_, v).has_value(); }

    // True when v maps to zero in the quotient (v in span(B)).
    bool is_zero_class(const QVec& v) const { return is_zero_vec(coords(v)); }

    QVec lift(const QVec& q) const {
        if (static_cast<int>(q.size()) != dim()) throw ShapeError("quotient lift length mismatch");
        QVec v(ambient_, Rat(0));
        for (int k = 0; k < dim(); ++k)
            for (int i = 0; i < ambient_; ++i) v[i] += q[k] * reps_[k][i];
        return v;
    }

private:
    int ambient_;
    int b_dim_ = 0;
    QMat solve_mat_;
    std::vector<QVec> reps_;
};

}  // namespace nvk
