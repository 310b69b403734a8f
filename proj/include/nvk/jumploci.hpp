#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nvk/betti.hpp"
#include "nvk/complexes.hpp"
#include "nvk/errors.hpp"
#include "nvk/lattice.hpp"
#include "nvk/laurent.hpp"
#include "nvk/matrix.hpp"

namespace nvk {

// A saturated sublattice of Hom(Z^n, Z) = Z^n, stored as a canonical
// Hermite basis so that equal subgroups compare equal.
struct FullSubgroup {
    int n = 0;
    IntMat basis;  // n x rank, canonical columns

    static FullSubgroup from_basis(int n, const IntMat& b) {
        FullSubgroup g;
        g.n = n;
        g.basis = column_lattice_basis(b);
        return g;
    }

    static FullSubgroup zero(int n) {
        return FullSubgroup{n, IntMat(n, 0, Int(0))};
    }

    int rank() const { return basis.cols; }

    bool operator==(const FullSubgroup& o) const { return n == o.n && basis == o.basis; }

    bool operator<(const FullSubgroup& o) const {
        if (n != o.n) return n < o.n;
        if (basis.cols != o.basis.cols) return basis.cols < o.basis.cols;
        return basis.a < o.basis.a;
    }

    // Subgroup inclusion; both sides saturated, so Q-span inclusion decides.
    bool contains(const FullSubgroup& g) const {
        if (n != g.n) throw ShapeError("subgroup comparison: ambient rank mismatch");
        if (g.rank() > rank()) return false;
        for (int j = 0; j < g.basis.cols; ++j) {
            std::vector<Rat> col(n);
            for (int i = 0; i < n; ++i) col[i] = Rat(g.basis.at(i, j));
            if (!q_span_contains(basis, col)) return false;
        }
        return true;
    }

    // p ⊏ G: every coordinate map of p lies in the subgroup.
    bool subordinate(const MonoidHom& p) const {
        if (p.n != n) throw ShapeError("subordination: ambient rank mismatch");
        for (int i = 0; i < p.m; ++i) {
            std::vector<Rat> row(n);
            for (int j = 0; j < n; ++j) row[j] = Rat(static_cast<long>(p.at(i, j)));
            if (!q_span_contains(basis, row)) return false;
        }
        return true;
    }

    // Constraint-style description: "h(e1)=h(e3), h(e2)=0".
    std::string describe() const {
        if (rank() == n) return "all h";
        IntMat constraints = kernel_lattice(basis.transposed());  // n x (n - rank)
        std::string out;
        for (int j = 0; j < constraints.cols; ++j) {
            std::string lhs, rhs;
            for (int i = 0; i < n; ++i) {
                Int c = constraints.at(i, j);
                if (sgn(c) == 0) continue;
                std::string term;
                Int a = abs(c);
                if (a != 1) term += a.get_str() + "*";
                term += "h(e" + std::to_string(i + 1) + ")";
                std::string& side = sgn(c) > 0 ? lhs : rhs;
                if (!side.empty()) side += "+";
                side += term;
            }
            if (lhs.empty()) std::swap(lhs, rhs);
            if (rhs.empty()) rhs = "0";
            if (!out.empty()) out += ", ";
            out += lhs + "=" + rhs;
        }
        return out;
    }
};

// Partition of the support of a Laurent polynomial into blocks whose
// coefficients each sum to zero. Blocks keep the element order of the
// support (lexicographic); blocks are ordered by their least element.
struct FittedSubdivision {
    LaurentPoly delta;
    std::vector<std::vector<ExpVec>> blocks;
};

struct JumpLociLimits {
    size_t max_support = 12;
    size_t max_assignments = 1000000;
};

// All partitions of supp(delta) into zero-sum blocks, in canonical
// backtracking order (elements assigned in lexicographic order, each to
// an existing block or a fresh one). Empty result when none exists.
inline std::vector<FittedSubdivision> fitted_subdivisions(const LaurentPoly& delta,
                                                          const JumpLociLimits& limits = {}) {
    if (delta.is_zero())
        throw ShapeError("fitted subdivisions of the zero polynomial are undefined");
    std::vector<ExpVec> elems;
    std::vector<Rat> coefs;
    Rat total(0);
    for (const auto& [e, c] : delta.terms()) {
        elems.push_back(e);
        coefs.push_back(c);
        total += c;
    }
    std::vector<FittedSubdivision> out;
    if (!is_zero(total)) return out;  // block sums cannot all vanish
    if (elems.size() > limits.max_support)
        throw ResourceLimitError("support size " + std::to_string(elems.size()) +
                                 " exceeds the subdivision limit " +
                                 std::to_string(limits.max_support));
    std::vector<std::vector<int>> blocks;
    std::vector<Rat> sums;
    auto emit = [&]() {
        FittedSubdivision s;
        s.delta = delta;
        for (const auto& b : blocks) {
            std::vector<ExpVec> vecs;
            for (int i : b) vecs.push_back(elems[static_cast<size_t>(i)]);
            s.blocks.push_back(std::move(vecs));
        }
        out.push_back(std::move(s));
    };
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == elems.size()) {
            for (const Rat& s : sums)
                if (!is_zero(s)) return;
            emit();
            return;
        }
        for (size_t b = 0; b < blocks.size(); ++b) {
            blocks[b].push_back(static_cast<int>(i));
            sums[b] += coefs[i];
            self(self, i + 1);
            sums[b] -= coefs[i];
            blocks[b].pop_back();
        }
        blocks.push_back({static_cast<int>(i)});
        sums.push_back(coefs[i]);
        self(self, i + 1);
        sums.pop_back();
        blocks.pop_back();
    };
    rec(rec, 0);
    return out;
}

// L(sigma): all h constant on every block, i.e. the kernel lattice of
// the stacked in-block difference vectors. Always saturated; proper
// because every block has at least two elements.
inline FullSubgroup subgroup_of_subdivision(const FittedSubdivision& s) {
    const int n = s.delta.nvars();
    std::vector<std::vector<Int>> rows;
    for (const auto& block : s.blocks)
        for (size_t i = 1; i < block.size(); ++i) {
            std::vector<Int> diff(n);
            for (int v = 0; v < n; ++v) diff[v] = Int(block[i][v]) - Int(block[i - 1][v]);
            rows.push_back(std::move(diff));
        }
    IntMat m(static_cast<int>(rows.size()), n, Int(0));
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < n; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
    FullSubgroup g;
    g.n = n;
    g.basis = kernel_lattice(m);
    return g;
}

namespace detail {

inline void prune_to_maximal(std::vector<FullSubgroup>& family) {
    std::set<FullSubgroup> uniq(family.begin(), family.end());
    std::vector<FullSubgroup> list(uniq.begin(), uniq.end());
    std::vector<FullSubgroup> keep;
    for (size_t i = 0; i < list.size(); ++i) {
        bool covered = false;
        for (size_t j = 0; j < list.size() && !covered; ++j)
            if (i != j && !(list[i] == list[j]) && list[j].contains(list[i])) covered = true;
        if (!covered) keep.push_back(list[i]);
    }
    family = std::move(keep);
}

}  // namespace detail

// The subgroups L(sigma) over all fitted subdivisions of delta,
// deduplicated and pruned to the inclusion-maximal ones. An integral p
// satisfies p(delta) = 0 iff p is subordinate to a listed subgroup.
inline std::vector<FullSubgroup> vanishing_family(const LaurentPoly& delta,
                                                  const JumpLociLimits& limits = {}) {
    std::vector<FullSubgroup> family;
    for (const FittedSubdivision& s : fitted_subdivisions(delta, limits))
        family.push_back(subgroup_of_subdivision(s));
    detail::prune_to_maximal(family);
    return family;
}

struct SplitNote {
    int drop_low = 0;   // required rank drop of d_k
    int drop_high = 0;  // required rank drop of d_{k+1}
    std::string status;
};

struct JumpLocusResult {
    int k = 0;
    int q = 0;
    int baseline = 0;  // generic Betti number b_k
    std::vector<FullSubgroup> family;
    std::vector<SplitNote> splits;
    bool covers(const MonoidHom& p) const {
        for (const FullSubgroup& g : family)
            if (g.subordinate(p)) return true;
        return false;
    }
};

// Finite family of proper full subgroups characterizing
// b_k(C, p) >= b_k(C) + q. For each split i of the required rank drop
// between d_k and d_{k+1}, every nonzero minor of the critical size
// must vanish under p; a choice of fitted subdivision per minor pins an
// intersection lattice, and the union over choices and splits is the
// jump locus.
inline JumpLocusResult jump_loci(const FreeComplex& c, int k, int q,
                                 const JumpLociLimits& limits = {}) {
    require_valid(c);
    const int top = c.top_degree();
    if (k < 0 || k > top) throw ShapeError("jump_loci: degree out of range");
    if (q < 1) throw ShapeError("jump_loci: jump amount must be positive");
    const int n = c.nvars;
    LaurentRing ring{n};

    const int rank_a = k >= 1 ? rank_over_fractions(c.boundary(k), ring) : 0;
    const int rank_b = k + 1 <= top ? rank_over_fractions(c.boundary(k + 1), ring) : 0;

    JumpLocusResult res;
    res.k = k;
    res.q = q;
    res.baseline = c.ranks[k] - rank_a - rank_b;

    // fitted subdivisions and difference rows per distinct minor
    std::map<LaurentPoly, std::vector<FittedSubdivision>> subdivision_memo;
    auto subdivisions_of = [&](const LaurentPoly& m) -> const std::vector<FittedSubdivision>& {
        auto it = subdivision_memo.find(m);
        if (it == subdivision_memo.end())
            it = subdivision_memo.emplace(m, fitted_subdivisions(m, limits)).first;
        return it->second;
    };

    std::vector<FullSubgroup> collected;
    for (int i = 0; i <= q; ++i) {
        const int drop_a = i, drop_b = q - i;
        if (drop_a > rank_a || drop_b > rank_b) {
            res.splits.push_back(
                {drop_a, drop_b, "skipped: required rank drop exceeds the boundary rank"});
            continue;
        }
        std::set<LaurentPoly> to_kill;
        std::string dead_minor;
        auto add_minors = [&](const LMat& bd, int rank, int drop) {
            if (drop < 1) return;  // no condition on this side
            for (LaurentPoly& m : minors(bd, rank - drop + 1, ring))
                if (!m.is_zero()) to_kill.insert(std::move(m));
        };
        if (drop_a >= 1) add_minors(c.boundary(k), rank_a, drop_a);
        if (drop_b >= 1) add_minors(c.boundary(k + 1), rank_b, drop_b);
        if (to_kill.empty())
            throw InvariantError("jump_loci: a positive rank drop produced no minors");
        size_t assignments = 1;
        std::vector<const std::vector<FittedSubdivision>*> choice_sets;
        for (const LaurentPoly& m : to_kill) {
            const auto& subs = subdivisions_of(m);
            if (subs.empty()) {
                dead_minor = m.str();  // this minor cannot vanish under any p
                break;
            }
            if (assignments > limits.max_assignments / subs.size())
                throw ResourceLimitError("subdivision assignment count exceeds the limit");
            assignments *= subs.size();
            choice_sets.push_back(&subs);
        }
        if (!dead_minor.empty()) {
            res.splits.push_back({drop_a, drop_b,
                                  "empty: minor " + dead_minor + " has no fitted subdivision"});
            continue;
        }
        res.splits.push_back({drop_a, drop_b,
                              "contributes " + std::to_string(assignments) +
                                  " subdivision assignment(s)"});
        // mixed-radix walk over one subdivision choice per minor
        std::vector<size_t> idx(choice_sets.size(), 0);
        for (;;) {
            std::vector<std::vector<Int>> rows;
            for (size_t mi = 0; mi < choice_sets.size(); ++mi) {
                const FittedSubdivision& s = (*choice_sets[mi])[idx[mi]];
                for (const auto& block : s.blocks)
                    for (size_t bi = 1; bi < block.size(); ++bi) {
                        std::vector<Int> diff(n);
                        for (int v = 0; v < n; ++v)
                            diff[v] = Int(block[bi][v]) - Int(block[bi - 1][v]);
                        rows.push_back(std::move(diff));
                    }
            }
            IntMat m(static_cast<int>(rows.size()), n, Int(0));
            for (size_t ri = 0; ri < rows.size(); ++ri)
                for (int j = 0; j < n; ++j) m.at(static_cast<int>(ri), j) = rows[ri][j];
            FullSubgroup g;
            g.n = n;
            g.basis = kernel_lattice(m);
            collected.push_back(std::move(g));
            size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == choice_sets[pos]->size()) {
                idx[pos] = 0;
                ++pos;
            }
            if (pos == idx.size()) break;
        }
    }
    detail::prune_to_maximal(collected);
    res.family = std::move(collected);
    return res;
}

// Direct oracle for the jump condition.
inline bool test_jump(const FreeComplex& c, int k, int q, const MonoidHom& p) {
    const int top = c.top_degree();
    if (k < 0 || k > top) throw ShapeError("test_jump: degree out of range");
    BettiVector base = betti(c);
    BettiVector spec = betti_specialized(c, p);
    return spec[static_cast<size_t>(k)] >= base[static_cast<size_t>(k)] + q;
}

// xi lies in G_i ⊗ R for one common i iff every coefficient row of xi
// is in the rational span of that subgroup.
inline bool membership_real(const RealHom& xi, const std::vector<FullSubgroup>& family) {
    xi.check();
    for (const FullSubgroup& g : family) {
        if (g.n != xi.n) throw ShapeError("membership_real: ambient rank mismatch");
        bool all = true;
        for (int i = 0; i < xi.coeffs.rows && all; ++i) {
            std::vector<Rat> row(xi.n);
            for (int j = 0; j < xi.n; ++j) row[j] = xi.coeffs.at(i, j);
            if (!q_span_contains(g.basis, row)) all = false;
        }
        if (all) return true;
    }
    return false;
}

}  // namespace nvk
