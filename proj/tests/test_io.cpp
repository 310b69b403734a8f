#include <catch2/catch.hpp>

#include "test_support.hpp"

using namespace nvk;

TEST_CASE("document round trip") {
    SECTION("complex documents") {
        InputDocument doc;
        doc.complex = tst::torus_complex();
        doc.query_p = tst::hom(1, 2, {1, 0});
        doc.query_k = 1;
        doc.query_q = 2;
        std::string text = serialize_document(doc);
        InputDocument back = parse_document(text);
        REQUIRE(back.complex.has_value());
        CHECK(back.complex->boundaries == doc.complex->boundaries);
        CHECK(back.query_p == doc.query_p);
        CHECK(back.query_k == doc.query_k);
        CHECK(serialize_document(back) == text);
    }
    SECTION("presentation documents") {
        PresentationBundle b;
        b.presentation.generators = 2;
        b.presentation.relators = {Word{1, 2, -1, -2}};
        b.representation.dim = 1;
        b.representation.images = {QMat(1, 1, Rat(1)), QMat(1, 1, Rat(1))};
        b.representation.check_relations = true;
        b.phi.nvars = 2;
        b.phi.images = {ExpVec{1, 0}, ExpVec{0, 1}};
        InputDocument doc;
        doc.presentation = b;
        std::string text = serialize_document(doc);
        InputDocument back = parse_document(text);
        REQUIRE(back.presentation.has_value());
        CHECK(serialize_document(back) == text);
        CHECK(realize_complex(back).boundaries == tst::torus_complex().boundaries);
    }
    SECTION("deformation documents") {
        InputDocument doc;
        doc.deformation = tst::heisenberg_model();
        std::string text = serialize_document(doc);
        InputDocument back = parse_document(text);
        REQUIRE(back.deformation.has_value());
        CHECK(validate_model(*back.deformation).valid);
        CHECK(serialize_document(back) == text);
    }
    SECTION("xi queries") {
        InputDocument doc;
        doc.complex = tst::circle_complex();
        RealHom xi;
        xi.n = 1;
        xi.coeffs = QMat(2, 1, Rat(0));
        xi.coeffs.at(0, 0) = 1;
        xi.coeffs.at(1, 0) = make_rat(Int(-2), Int(3));
        xi.refs = {"1", "sqrt2"};
        doc.query_xi = xi;
        InputDocument back = parse_document(serialize_document(doc));
        REQUIRE(back.query_xi.has_value());
        CHECK(back.query_xi->coeffs == xi.coeffs);
        CHECK(back.query_xi->refs == xi.refs);
    }
}

TEST_CASE("fixture files parse and agree with the built-in fixtures") {
    SECTION("circle") {
        FreeComplex c = realize_complex(tst::load_fixture("circle.json"));
        CHECK(c.boundaries == tst::circle_complex().boundaries);
    }
    SECTION("torus presentation generates the torus complex") {
        FreeComplex c = realize_complex(tst::load_fixture("torus.json"));
        CHECK(c.boundaries == tst::torus_complex().boundaries);
    }
    SECTION("klein presentation") {
        FreeComplex c = realize_complex(tst::load_fixture("klein.json"));
        CHECK(c.boundaries == tst::klein_complex().boundaries);
    }
    SECTION("models") {
        InputDocument doc = tst::load_fixture("heisenberg_model.json");
        REQUIRE(doc.deformation.has_value());
        CHECK(doc.deformation->dims == tst::heisenberg_model().dims);
        CHECK(run_spectral(*doc.deformation).e_infinity == BettiVector{0, 0, 0, 0});
    }
}

TEST_CASE("schema violations") {
    auto expect_parse_error = [](const std::string& text) {
        CHECK_THROWS_AS(parse_document(text), ParseError);
    };
    SECTION("not json") { expect_parse_error("not json at all {"); }
    SECTION("missing format") { expect_parse_error(R"({"complex": {}})"); }
    SECTION("wrong format tag") {
        expect_parse_error(R"({"format": "nvk/999", "complex": {}})");
    }
    SECTION("no payload") { expect_parse_error(R"({"format": "nvk/1"})"); }
    SECTION("two payloads") {
        expect_parse_error(
            R"({"format": "nvk/1",
                "complex": {"n": 0, "ranks": [1], "boundaries": {}},
                "deformation": {"dims": [1], "d": [], "e": []}})");
    }
    SECTION("bad denominator") {
        expect_parse_error(
            R"({"format": "nvk/1", "complex": {"n": 1, "ranks": [1, 1],
                "boundaries": {"1": [[[{"exp": [1], "num": 1, "den": 0}]]]}}})");
    }
    SECTION("exponent length mismatch") {
        expect_parse_error(
            R"({"format": "nvk/1", "complex": {"n": 2, "ranks": [1, 1],
                "boundaries": {"1": [[[{"exp": [1], "num": 1, "den": 1}]]]}}})");
    }
    SECTION("missing boundary degree") {
        expect_parse_error(
            R"({"format": "nvk/1", "complex": {"n": 1, "ranks": [1, 1], "boundaries": {}}})");
    }
    SECTION("stray boundary degree") {
        expect_parse_error(
            R"({"format": "nvk/1", "complex": {"n": 1, "ranks": [1],
                "boundaries": {"7": [[[]]]}}})");
    }
    SECTION("wrongly typed fields map to parse errors") {
        expect_parse_error(
            R"({"format": "nvk/1",
                "presentation": {"generators": 1, "relators": [],
                "representation": {"dim": "one", "images": [[[1]]]},
                "phi": [[1]], "n": 1}})");
        expect_parse_error(
            R"({"format": "nvk/1",
                "complex": {"n": 1, "ranks": [1], "boundaries": {}},
                "queries": {"k": "zero"}})");
    }
}

TEST_CASE("mangled documents fail with parse errors, never crashes") {
    std::string text = tst::read_file(tst::fixture_path("torus.json"));
    SECTION("truncations") {
        for (size_t len = 0; len < text.size(); len += 7) {
            try {
                parse_document(text.substr(0, len));
            } catch (const ParseError&) {
            }
        }
        CHECK(true);
    }
    SECTION("character flips") {
        tst::Rng rng(811);
        std::uniform_int_distribution<size_t> pos(0, text.size() - 1);
        std::uniform_int_distribution<int> ch(32, 126);
        for (int trial = 0; trial < 300; ++trial) {
            std::string mutated = text;
            mutated[pos(rng)] = static_cast<char>(ch(rng));
            try {
                InputDocument doc = parse_document(mutated);
                // survivors must still serialize and re-parse
                parse_document(serialize_document(doc));
            } catch (const Error&) {
            }
        }
        CHECK(true);
    }
}

TEST_CASE("wide integers travel as strings") {
    LaurentPoly f(1);
    Int big = Int("123456789012345678901234567890");
    f.add_term(ExpVec{0}, make_rat(big, Int(1)));
    f.add_term(ExpVec{1}, make_rat(Int(1), big));
    json j = poly_to_json(f);
    CHECK(j[0]["num"].is_string());
    CHECK(j[1]["den"].is_string());
    LaurentPoly back = poly_from_json(j, 1, "test");
    CHECK(back == f);
}

TEST_CASE("canonical coefficient encoding") {
    LaurentPoly f(1);
    f.add_term(ExpVec{2}, make_rat(Int(-2), Int(4)));  // stored as -1/2
    json j = poly_to_json(f);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["num"].get<std::int64_t>() == -1);
    CHECK(j[0]["den"].get<std::int64_t>() == 2);
}
