#pragma once

#include <string>
#include <vector>

#include "nvk/complexes.hpp"
#include "nvk/errors.hpp"
#include "nvk/lattice.hpp"
#include "nvk/matrix.hpp"
#include "nvk/qlinalg.hpp"

namespace nvk {

using BettiVector = std::vector<int>;

// A homomorphism xi: Z^n -> R encoded symbolically: xi(g) = sum_i
// alpha_i * (A g)_i where the reference reals alpha_1..alpha_{m0} are
// declared linearly independent over Q (a user contract, unverifiable
// here). Row i of `coeffs` carries the rational coefficients of
// alpha_i. The zero homomorphism is legal.
struct RealHom {
    int n = 0;
    QMat coeffs;                    // m0 x n
    std::vector<std::string> refs;  // m0 labels for the reference reals

    void check() const {
        if (coeffs.rows < 1) throw ShapeError("RealHom needs at least one reference real");
        if (static_cast<int>(refs.size()) != coeffs.rows)
            throw ShapeError("RealHom reference count does not match coefficient rows");
        if (coeffs.cols != n) throw ShapeError("RealHom coefficient columns do not match rank");
    }
};

struct Factorization {
    MonoidHom p;   // Z^n ->> Z^m, surjective
    RealHom tail;  // injective Z^m -> R with tail ∘ p = xi
};

inline void require_valid(const FreeComplex& c) {
    ValidationReport rep = validate(c);
    if (!rep.valid) throw InvariantError("invalid complex: " + rep.message);
}

// b_k = r_k - rank d_k - rank d_{k+1}, ranks over the fraction field of L_n.
inline BettiVector betti(const FreeComplex& c) {
    require_valid(c);
    LaurentRing ring{c.nvars};
    const int top = c.top_degree();
    std::vector<int> bd_rank(top + 2, 0);
    for (int k = 1; k <= top; ++k) bd_rank[k] = rank_over_fractions(c.boundary(k), ring);
    BettiVector b(top + 1, 0);
    for (int k = 0; k <= top; ++k) b[k] = c.ranks[k] - bd_rank[k] - bd_rank[k + 1];
    return b;
}

// Betti numbers of the complex with entries pushed through p, over the
// fraction field of L_m (plain Q when m = 0).
inline BettiVector betti_specialized(const FreeComplex& c, const MonoidHom& p) {
    require_valid(c);
    if (p.n != c.nvars)
        throw ShapeError("specialization source rank does not match complex variables");
    LaurentRing ring{p.m};
    const int top = c.top_degree();
    std::vector<int> bd_rank(top + 2, 0);
    for (int k = 1; k <= top; ++k)
        bd_rank[k] = rank_over_fractions(apply_hom(p, c.boundary(k)), ring);
    BettiVector b(top + 1, 0);
    for (int k = 0; k <= top; ++k) b[k] = c.ranks[k] - bd_rank[k] - bd_rank[k + 1];
    return b;
}

// Rank of the image subgroup xi(Z^n) in R. With Q-independent
// reference reals this is the rational rank of the coefficient matrix.
inline int irrationality_degree(const RealHom& xi) {
    xi.check();
    return qrank(xi.coeffs);
}

// Factor xi as an epimorphism p: Z^n ->> Z^m followed by a
// monomorphism, m being the irrationality degree. The image subgroup
// xi(Z^n), viewed as a lattice in the Q-span of the reference reals,
// is rebased by Hermite reduction; p expresses generators in that
// basis. xi = 0 yields the degenerate factorization through Z^0.
inline Factorization factor_hom(const RealHom& xi) {
    xi.check();
    const int m0 = xi.coeffs.rows, n = xi.n;
    const int m = qrank(xi.coeffs);
    Factorization f;
    if (m == 0) {
        f.p = MonoidHom::zero(0, n);
        f.tail.n = 0;
        f.tail.coeffs = QMat(m0, 0, Rat(0));
        f.tail.refs = xi.refs;
        return f;
    }
    Int den(1);
    for (const Rat& x : xi.coeffs.a) den = lcm(den, rat_den(x));
    IntMat scaled(m0, n, Int(0));
    for (int i = 0; i < m0; ++i)
        for (int j = 0; j < n; ++j) {
            Rat v = xi.coeffs.at(i, j) * Rat(den);
            scaled.at(i, j) = rat_num(v);
        }
    IntMat basis = column_lattice_basis(scaled);  // m0 x m
    if (basis.cols != m) throw InvariantError("image lattice rank disagrees with matrix rank");
    // coordinates of each generator image in the lattice basis
    QMat bq(m0, m, Rat(0));
    for (int i = 0; i < m0; ++i)
        for (int j = 0; j < m; ++j) bq.at(i, j) = Rat(basis.at(i, j));
    f.p = MonoidHom(m, n);
    for (int j = 0; j < n; ++j) {
        QVec rhs(m0, Rat(0));
        for (int i = 0; i < m0; ++i) rhs[i] = Rat(scaled.at(i, j));
        auto sol = solve(bq, rhs);
        if (!sol) throw InvariantError("generator image escapes its own lattice");
        for (int i = 0; i < m; ++i) {
            if (rat_den((*sol)[i]) != 1)
                throw InvariantError("non-integral lattice coordinate");
            Int num = rat_num((*sol)[i]);
            if (!num.fits_slong_p()) throw ResourceLimitError("factorization entry overflow");
            f.p.at(i, j) = num.get_si();
        }
    }
    f.tail.n = m;
    f.tail.coeffs = QMat(m0, m, Rat(0));
    for (int i = 0; i < m0; ++i)
        for (int j = 0; j < m; ++j) f.tail.coeffs.at(i, j) = Rat(basis.at(i, j)) / Rat(den);
    f.tail.refs = xi.refs;
    return f;
}

// Twisted Novikov Betti numbers: localization reduces them to the
// specialized Betti numbers along the factorization of xi.
inline BettiVector novikov_betti(const FreeComplex& c, const RealHom& xi) {
    if (xi.n != c.nvars)
        throw ShapeError("real homomorphism rank does not match complex variables");
    Factorization f = factor_hom(xi);
    return betti_specialized(c, f.p);
}

// Betti numbers at a maximally irrational direction (p = identity).
inline BettiVector generic_betti(const FreeComplex& c) { return betti(c); }

}  // namespace nvk
