#pragma once

#include <string>
#include <vector>

#include "nvk/errors.hpp"
#include "nvk/lattice.hpp"
#include "nvk/laurent.hpp"
#include "nvk/matrix.hpp"
#include "nvk/qlinalg.hpp"

namespace nvk {

// Finite free chain complex over the Laurent ring L_n, given by its
// boundary matrices. Degrees run 0..K; boundary(k) maps degree k to
// degree k-1 and has shape ranks[k-1] x ranks[k].
struct FreeComplex {
    int nvars = 0;
    std::vector<int> ranks;        // r_0 .. r_K
    std::vector<LMat> boundaries;  // index k-1 stores the degree-k boundary

    int top_degree() const { return static_cast<int>(ranks.size()) - 1; }

    const LMat& boundary(int k) const {
        if (k < 1 || k > top_degree()) throw ShapeError("boundary degree out of range");
        return boundaries[static_cast<size_t>(k) - 1];
    }
};

struct ValidationReport {
    bool valid = true;
    std::string message;  // empty when valid
    int k = -1, row = -1, col = -1;  // first violation, when applicable
};

inline ValidationReport validate(const FreeComplex& c) {
    ValidationReport rep;
    auto fail = [&](std::string msg, int k = -1, int i = -1, int j = -1) {
        rep.valid = false;
        rep.message = std::move(msg);
        rep.k = k;
        rep.row = i;
        rep.col = j;
        return rep;
    };
    if (c.ranks.empty()) return fail("complex has no degrees");
    for (int r : c.ranks)
        if (r < 0) return fail("negative rank");
    if (c.boundaries.size() + 1 != c.ranks.size())
        return fail("boundary count does not match degree count");
    for (int k = 1; k <= c.top_degree(); ++k) {
        const LMat& d = c.boundary(k);
        if (d.rows != c.ranks[k - 1] || d.cols != c.ranks[k])
            return fail("boundary " + std::to_string(k) + " has wrong shape", k);
        for (int i = 0; i < d.rows; ++i)
            for (int j = 0; j < d.cols; ++j)
                if (d.at(i, j).nvars() != c.nvars)
                    return fail("entry variable count mismatch in boundary " +
                                    std::to_string(k),
                                k, i, j);
    }
    for (int k = 1; k + 1 <= c.top_degree(); ++k) {
        LMat prod = lmat_mul(c.boundary(k), c.boundary(k + 1), c.nvars);
        for (int i = 0; i < prod.rows; ++i)
            for (int j = 0; j < prod.cols; ++j)
                if (!prod.at(i, j).is_zero())
                    return fail("d^2 != 0 at degree " + std::to_string(k) + ", entry (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")",
                                k, i, j);
    }
    return rep;
}

// --- group-presentation ingestion ----------------------------------------

// Words are sequences of signed 1-based generator indices: +i is the
// i-th generator, -i its inverse.
using Word = std::vector<int>;

struct Presentation {
    int generators = 0;
    std::vector<Word> relators;
};

// Images of the generators under rho: G -> GL(l, Q). When
// check_relations is set, every relator must map to the identity.
struct Representation {
    int dim = 1;
    std::vector<QMat> images;
    bool check_relations = false;
};

// Images of the generators in Z^n under the projection to the free
// abelianization; every relator must map to zero.
struct AbelianizationMap {
    int nvars = 0;
    std::vector<ExpVec> images;
};

namespace detail {

inline QMat qmat_inverse(const QMat& a) {
    if (a.rows != a.cols) throw ShapeError("inverse of non-square matrix");
    const int n = a.rows;
    QMat aug(n, 2 * n, Rat(0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, n + i) = 1;
    }
    RrefResult r = rref(std::move(aug));
    int left_rank = 0;
    for (int c : r.pivot_cols)
        if (c < n) ++left_rank;
    if (left_rank < n) throw InvariantError("non-invertible representation image");
    QMat inv(n, n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = r.m.at(i, n + j);
    return inv;
}

// rho°(x) = rho(x) * t^{phi(x)} as an l x l matrix over L_n.
inline LMat scaled_block(const QMat& q, const ExpVec& e, int nvars) {
    LMat b(q.rows, q.cols, LaurentPoly::zero(nvars));
    for (int i = 0; i < q.rows; ++i)
        for (int j = 0; j < q.cols; ++j)
            if (!is_zero(q.at(i, j))) b.at(i, j) = LaurentPoly::monomial(nvars, e, q.at(i, j));
    return b;
}

inline LMat lmat_identity(int l, int nvars) {
    LMat id(l, l, LaurentPoly::zero(nvars));
    for (int i = 0; i < l; ++i) id.at(i, i) = LaurentPoly::constant(nvars, Rat(1));
    return id;
}

}  // namespace detail

// Projection of the presented group onto its free abelianization,
// computed from the relator exponent matrix. Offered as a helper; the
// twisting map phi is always user-supplied, never derived silently.
inline AbelianizationMap suggest_abelianization(const Presentation& pres) {
    const int g = pres.generators;
    IntMat relmat(g, static_cast<int>(pres.relators.size()), Int(0));
    for (size_t ri = 0; ri < pres.relators.size(); ++ri)
        for (int letter : pres.relators[ri]) {
            int idx = std::abs(letter) - 1;
            if (idx < 0 || idx >= g) throw ShapeError("relator references an unknown generator");
            relmat.at(idx, static_cast<int>(ri)) += letter > 0 ? 1 : -1;
        }
    // characters of Z^g vanishing on all relators, a saturated lattice
    IntMat chars = kernel_lattice(relmat.transposed());  // g x n
    AbelianizationMap phi;
    phi.nvars = chars.cols;
    for (int i = 0; i < g; ++i) {
        ExpVec e(static_cast<size_t>(phi.nvars));
        for (int j = 0; j < phi.nvars; ++j) {
            const Int& v = chars.at(i, j);
            if (!v.fits_slong_p()) throw ResourceLimitError("abelianization entry overflow");
            e[static_cast<size_t>(j)] = v.get_si();
        }
        phi.images.push_back(std::move(e));
    }
    return phi;
}

// Chain complex of the presentation 2-complex, twisted by
// rho°(x) = rho(x) * t^{phi(x)}. The degree-1 block of a generator is
// rho°(x) - Id and the degree-2 block of (generator, relator) is the
// Fox derivative of the relator evaluated under rho°. Blocks enter the
// flattened matrices transposed, so the Fox identity
//   sum_x D_x(r) * (rho°(x) - Id) = rho°(r) - Id = 0
// turns into the chain condition for every block size l.
inline FreeComplex fox_complex(const Presentation& pres, const Representation& rho,
                               const AbelianizationMap& phi) {
    const int g = pres.generators;
    const int l = rho.dim;
    const int n = phi.nvars;
    const int nrel = static_cast<int>(pres.relators.size());
    if (g < 0 || l <= 0) throw ShapeError("bad presentation/representation sizes");
    if (static_cast<int>(rho.images.size()) != g || static_cast<int>(phi.images.size()) != g)
        throw ShapeError("per-generator data does not match generator count");
    for (const QMat& im : rho.images)
        if (im.rows != l || im.cols != l) throw ShapeError("representation image has wrong shape");
    for (const ExpVec& e : phi.images)
        if (static_cast<int>(e.size()) != n) throw ShapeError("phi image has wrong length");
    for (const Word& w : pres.relators)
        for (int letter : w)
            if (letter == 0 || std::abs(letter) > g)
                throw ShapeError("relator references an unknown generator");

    // phi must kill every relator
    for (size_t ri = 0; ri < pres.relators.size(); ++ri) {
        ExpVec total(n, 0);
        for (int letter : pres.relators[ri]) {
            const ExpVec& e = phi.images[static_cast<size_t>(std::abs(letter)) - 1];
            for (int i = 0; i < n; ++i) total[i] += letter > 0 ? e[i] : -e[i];
        }
        if (total != ExpVec(n, 0))
            throw InvariantError("relator " + std::to_string(ri) +
                                 " has nonzero abelianized image");
    }

    // letter matrices under rho°
    std::vector<LMat> pos(g), neg(g);
    for (int x = 0; x < g; ++x) {
        QMat inv = detail::qmat_inverse(rho.images[x]);  // throws if singular
        ExpVec e = phi.images[x], me(n, 0);
        for (int i = 0; i < n; ++i) me[i] = -e[i];
        pos[x] = detail::scaled_block(rho.images[x], e, n);
        neg[x] = detail::scaled_block(inv, me, n);
    }
    auto letter_mat = [&](int letter) -> const LMat& {
        return letter > 0 ? pos[letter - 1] : neg[-letter - 1];
    };
    const LMat id = detail::lmat_identity(l, n);

    if (rho.check_relations) {
        for (size_t ri = 0; ri < pres.relators.size(); ++ri) {
            LMat acc = id;
            for (int letter : pres.relators[ri]) acc = lmat_mul(acc, letter_mat(letter), n);
            if (!(acc == id))
                throw InvariantError("relator " + std::to_string(ri) +
                                     " does not map to the identity");
        }
    }

    FreeComplex c;
    c.nvars = n;
    c.ranks = {l};
    if (g == 0) return c;
    c.ranks.push_back(g * l);

    LMat d1(l, g * l, LaurentPoly::zero(n));
    for (int x = 0; x < g; ++x)
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j) {
                LaurentPoly v = pos[x].at(i, j) - id.at(i, j);
                d1.at(j, x * l + i) = v;  // block transposed
            }
    c.boundaries.push_back(std::move(d1));
    if (nrel == 0) return c;

    c.ranks.push_back(nrel * l);
    LMat d2(g * l, nrel * l, LaurentPoly::zero(n));
    for (int ri = 0; ri < nrel; ++ri) {
        const Word& w = pres.relators[static_cast<size_t>(ri)];
        for (int x = 0; x < g; ++x) {
            // Fox derivative of w by generator x, evaluated under rho°
            LMat deriv(l, l, LaurentPoly::zero(n));
            LMat prefix = id;
            for (int letter : w) {
                if (letter == x + 1) {
                    for (int i = 0; i < l; ++i)
                        for (int j = 0; j < l; ++j) deriv.at(i, j) += prefix.at(i, j);
                } else if (letter == -(x + 1)) {
                    LMat term = lmat_mul(prefix, neg[x], n);
                    for (int i = 0; i < l; ++i)
                        for (int j = 0; j < l; ++j) deriv.at(i, j) -= term.at(i, j);
                }
                prefix = lmat_mul(prefix, letter_mat(letter), n);
            }
            for (int i = 0; i < l; ++i)
                for (int j = 0; j < l; ++j)
                    d2.at(x * l + j, ri * l + i) = deriv.at(i, j);  // block transposed
        }
    }
    c.boundaries.push_back(std::move(d2));
    return c;
}

}  // namespace nvk
