#include <catch2/catch.hpp>

#include "test_support.hpp"

using namespace nvk;
using tst::qmat;

namespace {

QMat random_qmat(tst::Rng& rng, int rows, int cols) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    QMat m(rows, cols, Rat(0));
    for (auto& x : m.a) x = make_rat(Int(num(rng)), Int(den(rng)));
    return m;
}

}  // namespace

TEST_CASE("rref and rank") {
    QMat m = qmat(2, 3, {1, 2, 3, 2, 4, 6});
    RrefResult r = rref(m);
    CHECK(r.rank == 1);
    CHECK(r.pivot_cols == std::vector<int>{0});
    CHECK(qrank(qmat(2, 2, {1, 0, 0, 1})) == 2);
    CHECK(qrank(QMat(0, 4, Rat(0))) == 0);
}

TEST_CASE("solve") {
    SECTION("consistent system") {
        QMat a = qmat(2, 2, {1, 1, 0, 1});
        auto x = solve(a, {Rat(3), Rat(2)});
        REQUIRE(x.has_value());
        CHECK(mat_vec(a, *x) == QVec{Rat(3), Rat(2)});
    }
    SECTION("inconsistent system") {
        QMat a = qmat(2, 1, {1, 1});
        CHECK(!solve(a, {Rat(0), Rat(1)}).has_value());
    }
    SECTION("random consistency") {
        tst::Rng rng(211);
        for (int i = 0; i < 60; ++i) {
            QMat a = random_qmat(rng, 3, 4);
            QVec x0(4, Rat(0));
            for (auto& v : x0) v = Rat(std::uniform_int_distribution<int>(-3, 3)(rng));
            QVec b = mat_vec(a, x0);
            auto x = solve(a, b);
            REQUIRE(x.has_value());
            CHECK(mat_vec(a, *x) == b);
        }
    }
    SECTION("solve_multi agrees column by column") {
        tst::Rng rng(223);
        QMat a = random_qmat(rng, 3, 3);
        QMat b = random_qmat(rng, 3, 2);
        auto x = solve_multi(a, b);
        if (x) {
            QMat ax = qmat_mul(a, *x);
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 3; ++i) CHECK(ax.at(i, j) == b.at(i, j));
        }
    }
}

TEST_CASE("kernel and image") {
    QMat a = qmat(2, 3, {1, 0, 1, 0, 1, 1});
    QMat k = kernel_basis(a);
    REQUIRE(k.cols == 1);
    CHECK(is_zero_vec(mat_vec(a, column_of(k, 0))));
    QMat im = column_space_basis(a);
    CHECK(im.cols == 2);
    SECTION("rank-nullity on random matrices") {
        tst::Rng rng(227);
        for (int i = 0; i < 40; ++i) {
            QMat m = random_qmat(rng, 3, 5);
            CHECK(kernel_basis(m).cols + qrank(m) == 5);
            CHECK(column_space_basis(m).cols == qrank(m));
        }
    }
}

TEST_CASE("quotient spaces") {
    // Q^3 / span(e1) with Z = span(e1, e2)
    QMat z = qmat(3, 2, {1, 0, 0, 1, 0, 0});
    QMat b = qmat(3, 1, {1, 0, 0});
    Quotient q(3, z, b);
    CHECK(q.dim() == 1);
    SECTION("coords kill the subspace") {
        CHECK(is_zero_vec(q.coords({Rat(5), Rat(0), Rat(0)})));
        CHECK(q.coords({Rat(1), Rat(2), Rat(0)}) == QVec{Rat(2)});
    }
    SECTION("membership") {
        CHECK(q.contains({Rat(1), Rat(1), Rat(0)}));
        CHECK(!q.contains({Rat(0), Rat(0), Rat(1)}));
        CHECK_THROWS_AS(q.coords({Rat(0), Rat(0), Rat(1)}), InvariantError);
    }
    SECTION("lift then coords is the identity") {
        QVec c{Rat(7)};
        CHECK(q.coords(q.lift(c)) == c);
    }
    SECTION("trivial quotients") {
        Quotient zero(3, b, b);
        CHECK(zero.dim() == 0);
        Quotient full(2, qmat(2, 2, {1, 0, 0, 1}), QMat(2, 0, Rat(0)));
        CHECK(full.dim() == 2);
    }
}
