// Acceptance suite: one line per criterion, nonzero exit on any
// failure. Criteria pin the fixture values, the oracle-equivalence
// sweep, the spectral-sequence property suite and the hard
// cross-checks, each with its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace nvk;

namespace {

struct Failure {
    std::string what;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure{what};
}

int failures = 0;

// every deformation model built anywhere in this suite passes through
// here; the count is reported by criterion 8
int cross_checked_models = 0;
void hard_cross_check(const DeformationModel& m) {
    SpectralRun run = run_spectral(m);
    require(run.cross_check_ok, "E-infinity disagrees with the Q(t) ranks");
    require(run.e_infinity == generic_betti_truncated(m),
            "cross-check value drifted between calls");
    ++cross_checked_models;
}

void criterion(int id, const std::string& label, double budget_seconds,
               const std::function<void()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
        body();
    } catch (const Failure& f) {
        verdict = "FAIL";
        detail = f.what;
    } catch (const std::exception& ex) {
        verdict = "FAIL";
        detail = ex.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (verdict == "PASS" && budget_seconds > 0 && secs > budget_seconds) {
        verdict = "FAIL";
        detail = "time budget exceeded";
    }
    std::printf("[criterion %d] %-58s %s (%.2fs)%s\n", id, label.c_str(), verdict.c_str(),
                secs, detail.empty() ? "" : (" - " + detail).c_str());
    std::fflush(stdout);
    if (verdict == "FAIL") ++failures;
}

std::string vec_str(const BettiVector& b) {
    std::string out = "(";
    for (size_t i = 0; i < b.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(b[i]);
    }
    return out + ")";
}

void require_equal(const BettiVector& got, const BettiVector& want, const std::string& what) {
    require(got == want, what + ": got " + vec_str(got) + ", want " + vec_str(want));
}

// sweep data shared between criteria 4 and 9
struct SweepEntry {
    FreeComplex c;
    std::vector<MonoidHom> ps;
    std::vector<BettiVector> specialized;
    BettiVector base;
};
std::vector<SweepEntry> sweep_data;

}  // namespace

int main() {
    criterion(1, "circle fixture: betti, specialization, jump locus, Novikov", 1.0, [] {
        FreeComplex c = realize_complex(tst::load_fixture("circle.json"));
        require_equal(betti(c), {0, 0}, "betti");
        require_equal(betti_specialized(c, MonoidHom::zero(1, 1)), {1, 1},
                      "betti at p = 0");
        JumpLocusResult jl = jump_loci(c, 0, 1);
        require(jl.family.size() == 1 && jl.family[0].rank() == 0,
                "jump locus must be exactly the zero subgroup");
        RealHom xi;
        xi.n = 1;
        xi.coeffs = QMat(1, 1, Rat(1));
        xi.refs = {"1"};
        require_equal(novikov_betti(c, xi), {0, 0}, "novikov betti at xi = 1");
    });

    criterion(2, "torus fixture: Fox matrices bit-exact, betti, jumps", 1.0, [] {
        FreeComplex c = realize_complex(tst::load_fixture("torus.json"));
        require(c.ranks == std::vector<int>{1, 2, 1}, "ranks of the presentation complex");
        LaurentPoly t = LaurentPoly::variable(2, 0), s = LaurentPoly::variable(2, 1);
        LaurentPoly one = LaurentPoly::constant(2, Rat(1));
        require(c.boundary(1).at(0, 0) == t - one && c.boundary(1).at(0, 1) == s - one,
                "d1 must be (t-1, s-1)");
        require(c.boundary(2).at(0, 0) == one - s && c.boundary(2).at(1, 0) == t - one,
                "d2 must be (1-s, t-1)^T");
        require_equal(betti(c), {0, 0, 0}, "betti");
        JumpLocusResult jl = jump_loci(c, 1, 1);
        require(jl.family.size() == 1 && jl.family[0].rank() == 0,
                "jump locus must be exactly the zero subgroup");
        require(test_jump(c, 1, 2, MonoidHom::zero(2, 2)), "b_1 must jump by 2 at p = 0");
    });

    criterion(3, "klein bottle fixture: branch structure and specialization", 1.0, [] {
        FreeComplex c = realize_complex(tst::load_fixture("klein.json"));
        LaurentPoly t = LaurentPoly::variable(1, 0);
        LaurentPoly one = LaurentPoly::constant(1, Rat(1));
        require(c.boundary(1).at(0, 0).is_zero() && c.boundary(1).at(0, 1) == t - one,
                "d1 must be (0, t-1)");
        require(c.boundary(2).at(0, 0) == one + t && c.boundary(2).at(1, 0).is_zero(),
                "d2 must be (1+t, 0)^T");
        require(fitted_subdivisions(one + t).empty(), "1+t admits no fitted subdivision");
        JumpLocusResult jl = jump_loci(c, 1, 1);
        require(jl.family.size() == 1 && jl.family[0].rank() == 0,
                "jump locus must be exactly the zero subgroup");
        int empty_branches = 0, live_branches = 0;
        for (const SplitNote& s2 : jl.splits) {
            if (s2.status.find("no fitted subdivision") != std::string::npos) ++empty_branches;
            if (s2.status.find("contributes") != std::string::npos) ++live_branches;
        }
        require(empty_branches == 1 && live_branches == 1,
                "the d2 branch must be empty and the d1 branch alone must contribute");
        require_equal(betti_specialized(c, MonoidHom::zero(0, 1)), {1, 1, 0},
                      "betti at p = 0");
    });

    criterion(4, "oracle equivalence sweep (fixtures + 20 random complexes)", 300.0, [] {
        sweep_data.clear();
        std::vector<FreeComplex> cs = {tst::circle_complex(), tst::torus_complex(),
                                       tst::klein_complex()};
        tst::Rng rng(20260808);
        for (int i = 0; i < 20; ++i) cs.push_back(tst::random_complex(rng));
        long mismatches = 0, checks = 0;
        for (const FreeComplex& c : cs) {
            SweepEntry entry;
            entry.c = c;
            entry.ps = tst::full_p_sweep(c.nvars, 2, 3);
            entry.base = betti(c);
            for (const MonoidHom& p : entry.ps)
                entry.specialized.push_back(betti_specialized(c, p));
            for (int k = 0; k <= c.top_degree(); ++k)
                for (int q = 1; q <= 2; ++q) {
                    JumpLocusResult res = jump_loci(c, k, q);
                    for (size_t i = 0; i < entry.ps.size(); ++i) {
                        bool jumped = entry.specialized[i][static_cast<size_t>(k)] >=
                                      entry.base[static_cast<size_t>(k)] + q;
                        bool covered = res.covers(entry.ps[i]);
                        ++checks;
                        if (jumped != covered) ++mismatches;
                        // exercise the public oracle itself on a subsample
                        if (i % 97 == 0 && test_jump(c, k, q, entry.ps[i]) != jumped)
                            ++mismatches;
                    }
                }
            sweep_data.push_back(std::move(entry));
        }
        require(checks > 100000, "sweep unexpectedly small: " + std::to_string(checks));
        require(mismatches == 0,
                std::to_string(mismatches) + " discrepancies in " + std::to_string(checks) +
                    " checks");
    });

    criterion(5, "torus model: degeneracy at the second page", 1.0, [] {
        InputDocument doc = tst::load_fixture("torus_model.json");
        const DeformationModel& m = *doc.deformation;
        SpectralPage p2 = page(m, 2);
        require(p2.dims == std::vector<int>{0, 0, 0}, "page 2 dims must be (0,0,0)");
        SpectralRun run = run_spectral(m);
        require(run.stable_at == 2, "must stabilize at r = 2");
        require_equal(run.e_infinity, {0, 0, 0}, "E-infinity");
        require_equal(generic_betti_truncated(m), {0, 0, 0}, "Q(t) ranks");
        hard_cross_check(m);
    });

    criterion(6, "heisenberg model: Massey differential and collapse", 1.0, [] {
        InputDocument doc = tst::load_fixture("heisenberg_model.json");
        const DeformationModel& m = *doc.deformation;
        SpectralPage p2 = page(m, 2);
        require(p2.dims == std::vector<int>{0, 1, 1, 0}, "page 2 dims must be (0,1,1,0)");
        require(qrank(p2.deltas[1]) == 1, "Delta_2 must have rank 1 in degree 1");
        // the degree-1 survivor is [y] and its product lands on [xz]
        const QVec& y_rep = p2.reps[1][0];
        require(is_zero(y_rep[0]) && !is_zero(y_rep[1]) && is_zero(y_rep[2]),
                "degree-1 class must be spanned by y");
        const QVec& xz_rep = p2.reps[2][0];
        require(is_zero(xz_rep[0]) && !is_zero(xz_rep[1]) && is_zero(xz_rep[2]),
                "degree-2 class must be spanned by xz");
        require(!is_zero(p2.deltas[1].at(0, 0)), "<x,x,y> must hit [xz] nontrivially");
        SpectralPage p3 = page(m, 3);
        require(p3.dims == std::vector<int>{0, 0, 0, 0}, "page 3 must vanish");
        SpectralRun run = run_spectral(m);
        require_equal(run.e_infinity, {0, 0, 0, 0}, "E-infinity");
        require_equal(run.generic, {0, 0, 0, 0}, "Q(t) ranks");
        hard_cross_check(m);
    });

    criterion(7, "page calculus on fixtures + 50 random models", 120.0, [] {
        std::vector<DeformationModel> models = {tst::torus_model(), tst::heisenberg_model()};
        tst::Rng rng(973101);
        for (int i = 0; i < 50; ++i) models.push_back(tst::random_model(rng, 12));
        for (const DeformationModel& m : models) {
            require(validate_model(m).valid, "generated model must be valid");
            SpectralEngine eng(m);
            const int top = eng.top_degree();
            int sum_h = 0, max_m = 0;
            for (int k = 0; k <= top; ++k) {
                sum_h += eng.hdim(k);
                max_m = std::max(max_m, m.dim(k));
            }
            const int r_cap = std::max(2 * sum_h + 2, max_m + 2);
            long euler_ref = 0;
            bool have_euler = false;
            std::vector<int> prev_dims;
            for (int r = 2; r <= r_cap; ++r) {
                SpectralPage pg = eng.page(r);
                for (int k = 0; k + 1 <= top; ++k) {
                    QMat sq = qmat_mul(pg.deltas[static_cast<size_t>(k) + 1],
                                       pg.deltas[static_cast<size_t>(k)]);
                    for (const Rat& x : sq.a)
                        require(is_zero(x), "Delta_r^2 must vanish");
                }
                if (r > 2) {
                    // previous page homology must match this page
                    SpectralPage prev = eng.page(r - 1);
                    for (int k = 0; k <= top; ++k) {
                        int rank_out = qrank(prev.deltas[static_cast<size_t>(k)]);
                        int rank_in =
                            k >= 1 ? qrank(prev.deltas[static_cast<size_t>(k) - 1]) : 0;
                        require(prev.dims[static_cast<size_t>(k)] - rank_out - rank_in ==
                                    pg.dims[static_cast<size_t>(k)],
                                "H(MH_r, Delta_r) must equal MH_{r+1}");
                    }
                }
                long euler = 0;
                for (int k = 0; k <= top; ++k)
                    euler += (k % 2 == 0 ? 1 : -1) * pg.dims[static_cast<size_t>(k)];
                if (!have_euler) {
                    euler_ref = euler;
                    have_euler = true;
                }
                require(euler == euler_ref, "Euler characteristic must be page-invariant");
                prev_dims = pg.dims;
            }
            hard_cross_check(m);
        }
    });

    criterion(8, "hard cross-oracle: E-infinity equals the Q(t) ranks everywhere", 0.0, [] {
        // every model that passed through the suite was checked on the
        // spot; this criterion asserts the count and re-checks the
        // fixture models once more
        hard_cross_check(tst::torus_model());
        hard_cross_check(tst::heisenberg_model());
        require(cross_checked_models >= 54,
                "expected at least 54 cross-checked models, saw " +
                    std::to_string(cross_checked_models));
    });

    criterion(9, "monotonicity and unimodular invariance of specialization", 0.0, [] {
        require(!sweep_data.empty(), "criterion 4 must have produced sweep data");
        for (const SweepEntry& entry : sweep_data)
            for (size_t i = 0; i < entry.ps.size(); ++i)
                for (size_t k = 0; k < entry.base.size(); ++k)
                    require(entry.specialized[i][k] >= entry.base[k],
                            "specialized Betti numbers must dominate the generic ones");
        tst::Rng rng(55501);
        for (int trial = 0; trial < 30; ++trial) {
            const SweepEntry& entry = sweep_data[static_cast<size_t>(trial) % sweep_data.size()];
            MonoidHom u = tst::random_unimodular(rng, entry.c.nvars);
            require(betti_specialized(entry.c, u) == entry.base,
                    "unimodular specialization must preserve Betti numbers");
        }
    });

    if (failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
