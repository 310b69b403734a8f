#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nvk/betti.hpp"
#include "nvk/complexes.hpp"
#include "nvk/errors.hpp"
#include "nvk/matrix.hpp"
#include "nvk/qlinalg.hpp"

namespace nvk {

// Cochain-level model of a deformed differential D_t = d + t*e on a
// graded rational vector space: per degree k, d[k] and e[k] map degree
// k to degree k+1. Valid models satisfy d∘d = 0, e∘e = 0 and
// d∘e + e∘d = 0, so that D_t squares to zero for every t.
struct DeformationModel {
    std::vector<int> dims;  // m_0 .. m_K
    std::vector<QMat> d;    // k = 0..K-1: m_{k+1} x m_k
    std::vector<QMat> e;    // same shapes

    int top_degree() const { return static_cast<int>(dims.size()) - 1; }

    int dim(int k) const {
        if (k < 0 || k > top_degree()) return 0;
        return dims[static_cast<size_t>(k)];
    }

    // Degree-k map, padded with empty matrices outside 0..K-1.
    QMat dmap(int k) const { return map_at(d, k); }
    QMat emap(int k) const { return map_at(e, k); }

private:
    QMat map_at(const std::vector<QMat>& maps, int k) const {
        if (k >= 0 && k < static_cast<int>(maps.size())) return maps[static_cast<size_t>(k)];
        return QMat(dim(k + 1), dim(k), Rat(0));
    }
};

struct ModelReport {
    bool valid = true;
    std::string message;
};

inline ModelReport validate_model(const DeformationModel& m) {
    ModelReport rep;
    auto fail = [&](std::string msg) {
        rep.valid = false;
        rep.message = std::move(msg);
        return rep;
    };
    const int top = m.top_degree();
    if (top < 0) return fail("model has no degrees");
    if (m.d.size() != static_cast<size_t>(top) || m.e.size() != static_cast<size_t>(top))
        return fail("map count does not match degree count");
    for (int k = 0; k < top; ++k) {
        if (m.d[k].rows != m.dim(k + 1) || m.d[k].cols != m.dim(k))
            return fail("d at degree " + std::to_string(k) + " has wrong shape");
        if (m.e[k].rows != m.dim(k + 1) || m.e[k].cols != m.dim(k))
            return fail("e at degree " + std::to_string(k) + " has wrong shape");
    }
    auto all_zero = [](const QMat& q) {
        for (const Rat& x : q.a)
            if (!is_zero(x)) return false;
        return true;
    };
    for (int k = 0; k + 1 < top; ++k) {
        if (!all_zero(qmat_mul(m.d[k + 1], m.d[k])))
            return fail("d∘d != 0 at degree " + std::to_string(k));
        if (!all_zero(qmat_mul(m.e[k + 1], m.e[k])))
            return fail("e∘e != 0 at degree " + std::to_string(k));
        QMat anti = qmat_mul(m.d[k + 1], m.e[k]);
        QMat anti2 = qmat_mul(m.e[k + 1], m.d[k]);
        for (size_t i = 0; i < anti.a.size(); ++i) anti.a[i] += anti2.a[i];
        if (!all_zero(anti)) return fail("d∘e + e∘d != 0 at degree " + std::to_string(k));
    }
    return rep;
}

inline void require_valid(const DeformationModel& m) {
    ModelReport rep = validate_model(m);
    if (!rep.valid) throw InvariantError("invalid deformation model: " + rep.message);
}

struct SpectralPage {
    int r = 2;
    std::vector<int> dims;                  // dim MH^k, k = 0..K
    std::vector<std::vector<QVec>> reps;    // cocycle representatives per degree
    std::vector<QMat> deltas;               // Delta_r: MH^k -> MH^{k+1}, k = 0..K
};

// An r-chain (w_1, .., w_r) in degree k: d w_1 = 0 and
// d w_{i+1} = e w_i. Its existence certifies that [w_1] survives to
// page r; e w_r represents the Massey product of the class.
struct ChainWitness {
    int degree = 0;
    std::vector<QVec> chain;
};

struct SpectralRun {
    std::vector<SpectralPage> pages;  // starting at r = 2
    int stable_at = 2;                // first r with the stable dimensions
    BettiVector e_infinity;
    BettiVector generic;              // ranks over Q(t)
    bool cross_check_ok = false;
};

// b_k = m_k - rank(D_k) - rank(D_{k-1}) with D = d + t*e over Q[t],
// ranks taken over Q(t).
inline BettiVector generic_betti_truncated(const DeformationModel& m) {
    require_valid(m);
    const int top = m.top_degree();
    LaurentRing ring{1};
    auto deformed = [&](int k) {
        QMat dk = m.dmap(k), ek = m.emap(k);
        LMat out(dk.rows, dk.cols, LaurentPoly::zero(1));
        for (int i = 0; i < dk.rows; ++i)
            for (int j = 0; j < dk.cols; ++j) {
                LaurentPoly v = LaurentPoly::constant(1, dk.at(i, j));
                v += LaurentPoly::monomial(1, ExpVec{1}, ek.at(i, j));
                out.at(i, j) = v;
            }
        return out;
    };
    std::vector<int> rk(static_cast<size_t>(top) + 2, 0);
    for (int k = 0; k <= top; ++k) rk[static_cast<size_t>(k) + 1] = rank_over_fractions(deformed(k), ring);
    BettiVector b(static_cast<size_t>(top) + 1, 0);
    for (int k = 0; k <= top; ++k)
        b[static_cast<size_t>(k)] = m.dim(k) - rk[static_cast<size_t>(k) + 1] - rk[static_cast<size_t>(k)];
    return b;
}

// Dimensions of ker L_k / im L_{k-1} for a degree-one square-zero
// operator given on cohomology.
inline BettiVector theta_cohomology(const std::vector<QMat>& maps) {
    const int top = static_cast<int>(maps.size());
    for (int k = 0; k + 1 < top; ++k) {
        if (maps[k + 1].cols != maps[k].rows)
            throw ShapeError("theta_cohomology: map shapes do not chain");
        QMat prod = qmat_mul(maps[k + 1], maps[k]);
        for (const Rat& x : prod.a)
            if (!is_zero(x)) throw InvariantError("theta_cohomology: L∘L != 0");
    }
    BettiVector b(static_cast<size_t>(top) + 1, 0);
    for (int k = 0; k <= top; ++k) {
        int dim_k = k < top ? maps[static_cast<size_t>(k)].cols
                            : (top > 0 ? maps[static_cast<size_t>(top) - 1].rows : 0);
        int rank_k = k < top ? qrank(maps[static_cast<size_t>(k)]) : 0;
        int rank_prev = k > 0 ? qrank(maps[static_cast<size_t>(k) - 1]) : 0;
        b[static_cast<size_t>(k)] = dim_k - rank_k - rank_prev;
    }
    return b;
}

// Page-by-page engine. MZ_(r) is carried in cohomology coordinates:
// classes admitting an r-chain (d w_1 = 0, d w_{i+1} = e w_i), found by
// solving the stacked chain system; MB_(r) is the image of e on the
// last member of (r-1)-chains one degree down.
class SpectralEngine {
public:
    explicit SpectralEngine(const DeformationModel& m) : model_(m) {
        require_valid(m);
        const int top = m.top_degree();
        for (int k = 0; k <= top; ++k) {
            QMat z = kernel_basis(m.dmap(k));
            QMat b = column_space_basis(m.dmap(k - 1));
            cohomology_.emplace_back(m.dim(k), z, b);
        }
    }

    const DeformationModel& model() const { return model_; }
    int top_degree() const { return model_.top_degree(); }
    int hdim(int k) const {
        if (k < 0 || k > top_degree()) return 0;
        return cohomology_[static_cast<size_t>(k)].dim();
    }

    // Cohomology coordinates of a cocycle in degree k.
    QVec hcoords(int k, const QVec& cocycle) const {
        return cohomology_[static_cast<size_t>(k)].coords(cocycle);
    }

    // Cocycle representative of a class given in cohomology coordinates.
    QVec hlift(int k, const QVec& coords) const {
        return cohomology_[static_cast<size_t>(k)].lift(coords);
    }

    // Basis columns of MZ^k_(r) in cohomology coordinates.
    const QMat& mz(int r, int k) {
        auto key = std::make_pair(r, k);
        auto it = mz_cache_.find(key);
        if (it != mz_cache_.end()) return it->second;
        return mz_cache_.emplace(key, compute_mz(r, k)).first->second;
    }

    // Basis columns of MB^k_(r) in cohomology coordinates.
    const QMat& mb(int r, int k) {
        auto key = std::make_pair(r, k);
        auto it = mb_cache_.find(key);
        if (it != mb_cache_.end()) return it->second;
        return mb_cache_.emplace(key, compute_mb(r, k)).first->second;
    }

    std::vector<int> page_dims(int r) {
        std::vector<int> dims;
        for (int k = 0; k <= top_degree(); ++k) {
            Quotient q(hdim(k), mz(r, k), mb(r, k));
            dims.push_back(q.dim());
        }
        return dims;
    }

    SpectralPage page(int r) {
        if (r < 1) throw ShapeError("page index must be at least 1");
        SpectralPage pg;
        pg.r = r;
        const int top = top_degree();
        std::vector<std::unique_ptr<Quotient>> mh;
        for (int k = 0; k <= top; ++k)
            mh.push_back(std::make_unique<Quotient>(hdim(k), mz(r, k), mb(r, k)));
        for (int k = 0; k <= top; ++k) {
            pg.dims.push_back(mh[static_cast<size_t>(k)]->dim());
            std::vector<QVec> reps;
            for (const QVec& hc : mh[static_cast<size_t>(k)]->reps())
                reps.push_back(cohomology_[static_cast<size_t>(k)].lift(hc));
            pg.reps.push_back(std::move(reps));
        }
        for (int k = 0; k <= top; ++k) {
            const Quotient& src = *mh[static_cast<size_t>(k)];
            const int tgt_dim = k + 1 <= top ? mh[static_cast<size_t>(k) + 1]->dim() : 0;
            QMat delta(tgt_dim, src.dim(), Rat(0));
            // above the top degree e lands in the zero space, so Delta_r = 0
            if (src.dim() > 0 && k + 1 <= top)
                fill_delta(r, k, src, *mh[static_cast<size_t>(k) + 1], delta);
            pg.deltas.push_back(std::move(delta));
        }
        return pg;
    }

private:
    // Stacked chain system for chains (w_1..w_len) in degree k:
    // d w_1 = 0 and d w_{i+1} = e w_i. Returns the coefficient matrix.
    QMat chain_system(int len, int k) const {
        const QMat dk = model_.dmap(k);
        const QMat ek = model_.emap(k);
        const int mk = model_.dim(k);
        const int rows_per = dk.rows;
        QMat s(rows_per * len, mk * len, Rat(0));
        auto put = [&](int block_row, int block_col, const QMat& mat, int sign) {
            for (int i = 0; i < mat.rows; ++i)
                for (int j = 0; j < mat.cols; ++j)
                    s.at(block_row * rows_per + i, block_col * mk + j) =
                        sign > 0 ? mat.at(i, j) : Rat(-mat.at(i, j));
        };
        put(0, 0, dk, +1);
        for (int i = 1; i < len; ++i) {
            put(i, i - 1, ek, -1);
            put(i, i, dk, +1);
        }
        return s;
    }

    QMat compute_mz(int r, int k) {
        if (k < 0 || k > top_degree()) return QMat(0, 0, Rat(0));
        const int h = hdim(k);
        if (r <= 1) {
            QMat id(h, h, Rat(0));
            for (int i = 0; i < h; ++i) id.at(i, i) = 1;
            return id;
        }
        const int mk = model_.dim(k);
        QMat sys = chain_system(r, k);
        QMat ker = kernel_basis(sys);
        std::vector<QVec> hcols;
        for (int j = 0; j < ker.cols; ++j) {
            QVec w1(mk, Rat(0));
            for (int i = 0; i < mk; ++i) w1[i] = ker.at(i, j);
            hcols.push_back(hcoords(k, w1));
        }
        return column_space_basis(from_columns(h, hcols));
    }

    QMat compute_mb(int r, int k) {
        if (k < 0 || k > top_degree()) return QMat(0, 0, Rat(0));
        const int h = hdim(k);
        if (r <= 1) return QMat(h, 0, Rat(0));
        const int len = r - 1;
        const int mprev = model_.dim(k - 1);
        if (mprev == 0) return QMat(h, 0, Rat(0));
        QMat sys = chain_system(len, k - 1);
        QMat ker = kernel_basis(sys);
        const QMat eprev = model_.emap(k - 1);
        std::vector<QVec> hcols;
        for (int j = 0; j < ker.cols; ++j) {
            QVec last(mprev, Rat(0));
            for (int i = 0; i < mprev; ++i) last[i] = ker.at((len - 1) * mprev + i, j);
            QVec v = mat_vec(eprev, last);
            hcols.push_back(hcoords(k, v));
        }
        return column_space_basis(from_columns(h, hcols));
    }

    // Delta_r on a page: for each basis class, solve for an r-chain
    // witness pinned to a representative and push e w_r into the next
    // quotient. Any two witnesses differ by a homogeneous chain, so the
    // kernel of the witness system is checked to land in MB (the
    // paper-level well-definedness, asserted at runtime).
    void fill_delta(int r, int k, const Quotient& src, const Quotient& tgt, QMat& delta) {
        const int mk = model_.dim(k);
        const QMat ek = model_.emap(k);
        QMat sys = witness_system(r, k);
        // one RHS per basis class: pin w_1 to the class representative
        QMat rhs(sys.rows, src.dim(), Rat(0));
        for (int c = 0; c < src.dim(); ++c) {
            QVec lift = cohomology_[static_cast<size_t>(k)].lift(src.reps()[static_cast<size_t>(c)]);
            for (int i = 0; i < mk; ++i) rhs.at(i, c) = lift[i];
        }
        auto sols = solve_multi(sys, rhs);
        if (!sols) throw InvariantError("no r-chain witness for a class in MZ");
        for (int c = 0; c < src.dim(); ++c) {
            QVec wr(mk, Rat(0));
            for (int i = 0; i < mk; ++i) wr[i] = sols->at((r - 1) * mk + i, c);
            QVec v = mat_vec(ek, wr);
            QVec hv = hcoords(k + 1, v);
            QVec q = tgt.coords(hv);  // throws if the class escapes MZ/MB
            for (int i = 0; i < tgt.dim(); ++i) delta.at(i, c) = q[i];
        }
        // well-definedness: homogeneous witnesses must map into MB
        QMat ker = kernel_basis(sys);
        for (int j = 0; j < ker.cols; ++j) {
            QVec wr(mk, Rat(0));
            for (int i = 0; i < mk; ++i) wr[i] = ker.at((r - 1) * mk + i, j);
            QVec v = mat_vec(ek, wr);
            QVec hv = hcoords(k + 1, v);
            if (!tgt.contains(hv) || !is_zero_vec(tgt.coords(hv)))
                throw InvariantError("Massey differential witness disagreement beyond MB");
        }
    }

    // Unknowns (w_1..w_r, correction c in degree k-1):
    //   w_1 - d c = representative, and the chain equations.
    QMat witness_system(int r, int k) const {
        const int mk = model_.dim(k);
        const int mprev = model_.dim(k - 1);
        const QMat dk = model_.dmap(k);
        const QMat ek = model_.emap(k);
        const QMat dprev = model_.dmap(k - 1);
        const int rows_chain = dk.rows;
        QMat s(mk + rows_chain * (r - 1), mk * r + mprev, Rat(0));
        for (int i = 0; i < mk; ++i) {
            s.at(i, i) = 1;
            for (int j = 0; j < mprev; ++j) s.at(i, mk * r + j) = Rat(-dprev.at(i, j));
        }
        for (int step = 1; step < r; ++step)
            for (int i = 0; i < rows_chain; ++i) {
                for (int j = 0; j < mk; ++j) {
                    s.at(mk + (step - 1) * rows_chain + i, (step - 1) * mk + j) =
                        Rat(-ek.at(i, j));
                    s.at(mk + (step - 1) * rows_chain + i, step * mk + j) = dk.at(i, j);
                }
            }
        return s;
    }

    DeformationModel model_;
    std::vector<Quotient> cohomology_;
    std::map<std::pair<int, int>, QMat> mz_cache_;
    std::map<std::pair<int, int>, QMat> mb_cache_;
};

// MZ^k_(r) as cocycle representatives.
inline std::vector<QVec> mz_space(const DeformationModel& m, int r, int k) {
    if (r < 1) throw ShapeError("mz_space: page index must be at least 1");
    SpectralEngine eng(m);
    if (k < 0 || k > eng.top_degree()) throw ShapeError("mz_space: degree out of range");
    const QMat& z = eng.mz(r, k);
    std::vector<QVec> out;
    for (int j = 0; j < z.cols; ++j) out.push_back(eng.hlift(k, column_of(z, j)));
    return out;
}

inline std::vector<QVec> mb_space(const DeformationModel& m, int r, int k) {
    if (r < 1) throw ShapeError("mb_space: page index must be at least 1");
    SpectralEngine eng(m);
    if (k < 0 || k > eng.top_degree()) throw ShapeError("mb_space: degree out of range");
    const QMat& b = eng.mb(r, k);
    std::vector<QVec> out;
    for (int j = 0; j < b.cols; ++j) out.push_back(eng.hlift(k, column_of(b, j)));
    return out;
}

inline SpectralPage page(const DeformationModel& m, int r) {
    if (r < 2) throw ShapeError("pages are defined for r >= 2");
    SpectralEngine eng(m);
    return eng.page(r);
}

// An r-chain starting from the class of the given cocycle (the
// representative may shift by a coboundary), or nullopt when the class
// does not lie in MZ^k_(r).
inline std::optional<ChainWitness> r_chain_witness(const DeformationModel& m, int r, int k,
                                                   const QVec& cocycle) {
    if (r < 1) throw ShapeError("chain length must be at least 1");
    require_valid(m);
    if (k < 0 || k > m.top_degree()) throw ShapeError("chain witness: degree out of range");
    const int mk = m.dim(k);
    if (static_cast<int>(cocycle.size()) != mk)
        throw ShapeError("chain witness: cocycle length mismatch");
    if (!is_zero_vec(mat_vec(m.dmap(k), cocycle)))
        throw ShapeError("chain witness: input is not a cocycle");
    const int mprev = m.dim(k - 1);
    const QMat dk = m.dmap(k), ek = m.emap(k), dprev = m.dmap(k - 1);
    const int rows_chain = dk.rows;
    QMat sys(mk + rows_chain * (r - 1), mk * r + mprev, Rat(0));
    QVec rhs(static_cast<size_t>(sys.rows), Rat(0));
    for (int i = 0; i < mk; ++i) {
        sys.at(i, i) = 1;
        for (int j = 0; j < mprev; ++j) sys.at(i, mk * r + j) = Rat(-dprev.at(i, j));
        rhs[static_cast<size_t>(i)] = cocycle[static_cast<size_t>(i)];
    }
    for (int step = 1; step < r; ++step)
        for (int i = 0; i < rows_chain; ++i)
            for (int j = 0; j < mk; ++j) {
                sys.at(mk + (step - 1) * rows_chain + i, (step - 1) * mk + j) =
                    Rat(-ek.at(i, j));
                sys.at(mk + (step - 1) * rows_chain + i, step * mk + j) = dk.at(i, j);
            }
    auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    ChainWitness w;
    w.degree = k;
    for (int step = 0; step < r; ++step) {
        QVec v(static_cast<size_t>(mk), Rat(0));
        for (int i = 0; i < mk; ++i) v[static_cast<size_t>(i)] = (*sol)[static_cast<size_t>(step * mk + i)];
        w.chain.push_back(std::move(v));
    }
    return w;
}

// Iterate pages until the certified stabilization bound and check the
// result against the Q(t) ranks. Both the bound and the equality are
// hard requirements; failure signals an invariant violation.
inline SpectralRun run_spectral(const DeformationModel& m, int max_page = 0) {
    SpectralEngine eng(m);
    const int top = eng.top_degree();
    int sum_h = 0, max_m = 0;
    for (int k = 0; k <= top; ++k) {
        sum_h += eng.hdim(k);
        max_m = std::max(max_m, m.dim(k));
    }
    const int r_cap = std::max(2 * sum_h + 2, max_m + 2);
    SpectralRun run;
    std::vector<std::vector<int>> dims_by_page;
    for (int r = 2; r <= r_cap; ++r) {
        SpectralPage pg = eng.page(r);
        dims_by_page.push_back(pg.dims);
        if (max_page <= 0 || r <= max_page) run.pages.push_back(std::move(pg));
    }
    run.e_infinity = BettiVector(dims_by_page.back().begin(), dims_by_page.back().end());
    if (dims_by_page.size() >= 2 &&
        dims_by_page[dims_by_page.size() - 2] != dims_by_page.back())
        throw InvariantError("spectral sequence did not stabilize within its bound");
    run.stable_at = r_cap;
    for (int r = r_cap; r >= 2; --r) {
        if (dims_by_page[static_cast<size_t>(r) - 2] == dims_by_page.back())
            run.stable_at = r;
        else
            break;
    }
    run.generic = generic_betti_truncated(m);
    run.cross_check_ok = run.e_infinity == run.generic;
    if (!run.cross_check_ok)
        throw InvariantError("stable page dimensions disagree with the Q(t) ranks");
    return run;
}

inline BettiVector e_infinity(const DeformationModel& m) { return run_spectral(m).e_infinity; }

struct CompareReport {
    BettiVector complex_betti;   // homological grading
    BettiVector model_einfinity; // cohomological grading
    bool equal = false;
    std::string note;
    std::string convention =
        "degree k of the chain complex (homological) is compared with degree k "
        "of the deformation model (cohomological)";
};

// Compare b_*(C, p) with the stable page of a deformation model the
// user declares to describe the same space, twist and direction.
inline CompareReport compare_models(const FreeComplex& c, const DeformationModel& m,
                                    const MonoidHom& p, const std::string& note = "") {
    CompareReport rep;
    rep.note = note;
    rep.complex_betti = betti_specialized(c, p);
    rep.model_einfinity = e_infinity(m);
    size_t len = std::max(rep.complex_betti.size(), rep.model_einfinity.size());
    rep.equal = true;
    for (size_t k = 0; k < len; ++k) {
        int a = k < rep.complex_betti.size() ? rep.complex_betti[k] : 0;
        int b = k < rep.model_einfinity.size() ? rep.model_einfinity[k] : 0;
        if (a != b) rep.equal = false;
    }
    return rep;
}

}  // namespace nvk
