#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvk/betti.hpp"
#include "nvk/complexes.hpp"
#include "nvk/errors.hpp"
#include "nvk/laurent.hpp"
#include "nvk/specseq.hpp"

namespace nvk {

// One self-describing document format, version tag "nvk/1". A document
// carries exactly one payload block (complex | presentation |
// deformation) plus optional query data. Rationals are always
// numerator/denominator pairs; integers wider than 64 bits are carried
// as decimal strings.

inline constexpr const char* kFormatTag = "nvk/1";

using json = nlohmann::json;

struct PresentationBundle {
    Presentation presentation;
    Representation representation;
    AbelianizationMap phi;
};

struct InputDocument {
    std::optional<FreeComplex> complex;
    std::optional<PresentationBundle> presentation;
    std::optional<DeformationModel> deformation;
    std::optional<MonoidHom> query_p;
    std::optional<RealHom> query_xi;
    std::optional<int> query_k;
    std::optional<int> query_q;
};

// --- scalar encoding ------------------------------------------------------

inline json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

inline Int int_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return int_from_string(j.get<std::string>());
    throw ParseError(std::string(what) + ": expected an integer or decimal string");
}

inline json rat_to_json(const Rat& r) {
    return json{{"num", int_to_json(rat_num(r))}, {"den", int_to_json(rat_den(r))}};
}

inline Rat rat_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_object()) {
        if (!j.contains("num") || !j.contains("den"))
            throw ParseError(std::string(what) + ": rational needs num and den");
        Int num = int_from_json(j.at("num"), what);
        Int den = int_from_json(j.at("den"), what);
        if (sgn(den) <= 0) throw ParseError(std::string(what) + ": denominator must be positive");
        return make_rat(num, den);
    }
    throw ParseError(std::string(what) + ": expected a rational");
}

// --- polynomials ----------------------------------------------------------

inline json poly_to_json(const LaurentPoly& f) {
    json terms = json::array();
    for (const auto& [e, c] : f.terms()) {
        json exp = json::array();
        for (auto v : e) exp.push_back(v);
        terms.push_back(json{{"exp", exp},
                             {"num", int_to_json(rat_num(c))},
                             {"den", int_to_json(rat_den(c))}});
    }
    return terms;
}

inline LaurentPoly poly_from_json(const json& j, int nvars, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": polynomial must be a term list");
    LaurentPoly f(nvars);
    for (const json& t : j) {
        if (!t.is_object() || !t.contains("exp") || !t.contains("num") || !t.contains("den"))
            throw ParseError(std::string(what) + ": term needs exp, num, den");
        const json& je = t.at("exp");
        if (!je.is_array() || static_cast<int>(je.size()) != nvars)
            throw ParseError(std::string(what) + ": exponent vector must have length " +
                             std::to_string(nvars));
        ExpVec e(nvars);
        for (int i = 0; i < nvars; ++i) {
            if (!je[static_cast<size_t>(i)].is_number_integer())
                throw ParseError(std::string(what) + ": exponents must be integers");
            e[static_cast<size_t>(i)] = je[static_cast<size_t>(i)].get<std::int64_t>();
        }
        Int num = int_from_json(t.at("num"), what);
        Int den = int_from_json(t.at("den"), what);
        if (sgn(den) <= 0) throw ParseError(std::string(what) + ": denominator must be positive");
        f.add_term(e, make_rat(num, den));
    }
    return f;
}

// --- matrices ---------------------------------------------------------------

inline json qmat_to_json(const QMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(rat_to_json(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline QMat qmat_from_json(const json& j, int rows, int cols, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw ParseError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
    QMat m(rows, cols, Rat(0));
    for (int i = 0; i < rows; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ParseError(std::string(what) + ": expected " + std::to_string(cols) +
                             " columns");
        for (int c = 0; c < cols; ++c) m.at(i, c) = rat_from_json(row[static_cast<size_t>(c)], what);
    }
    return m;
}

inline json intmat_to_json(const IntMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(int_to_json(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline MonoidHom hom_from_json(const json& j, int n, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected a row list");
    const int m = static_cast<int>(j.size());
    MonoidHom p(m, n);
    for (int i = 0; i < m; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ParseError(std::string(what) + ": rows must have length " + std::to_string(n));
        for (int c = 0; c < n; ++c) {
            if (!row[static_cast<size_t>(c)].is_number_integer())
                throw ParseError(std::string(what) + ": entries must be integers");
            p.at(i, c) = row[static_cast<size_t>(c)].get<std::int64_t>();
        }
    }
    return p;
}

inline json hom_to_json(const MonoidHom& p) {
    json rows = json::array();
    for (int i = 0; i < p.m; ++i) {
        json row = json::array();
        for (int j = 0; j < p.n; ++j) row.push_back(p.at(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline RealHom realhom_from_json(const json& j, int n, const char* what) {
    if (!j.is_object() || !j.contains("matrix") || !j.contains("refs"))
        throw ParseError(std::string(what) + ": xi needs matrix and refs");
    const json& refs = j.at("refs");
    if (!refs.is_array() || refs.empty())
        throw ParseError(std::string(what) + ": refs must be a non-empty list of labels");
    RealHom xi;
    xi.n = n;
    xi.coeffs = qmat_from_json(j.at("matrix"), static_cast<int>(refs.size()), n, what);
    for (const json& s : refs) {
        if (!s.is_string()) throw ParseError(std::string(what) + ": refs must be strings");
        xi.refs.push_back(s.get<std::string>());
    }
    xi.check();
    return xi;
}

inline json realhom_to_json(const RealHom& xi) {
    json refs = json::array();
    for (const std::string& s : xi.refs) refs.push_back(s);
    return json{{"matrix", qmat_to_json(xi.coeffs)}, {"refs", refs}};
}

// --- document blocks --------------------------------------------------------

inline json complex_to_json(const FreeComplex& c) {
    json boundaries = json::object();
    for (int k = 1; k <= c.top_degree(); ++k) {
        const LMat& d = c.boundary(k);
        json rows = json::array();
        for (int i = 0; i < d.rows; ++i) {
            json row = json::array();
            for (int j = 0; j < d.cols; ++j) row.push_back(poly_to_json(d.at(i, j)));
            rows.push_back(row);
        }
        boundaries[std::to_string(k)] = rows;
    }
    json ranks = json::array();
    for (int r : c.ranks) ranks.push_back(r);
    return json{{"n", c.nvars}, {"ranks", ranks}, {"boundaries", boundaries}};
}

inline FreeComplex complex_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("complex block must be an object");
    if (!j.contains("n") || !j.contains("ranks") || !j.contains("boundaries"))
        throw ParseError("complex block needs n, ranks, boundaries");
    FreeComplex c;
    if (!j.at("n").is_number_integer() || j.at("n").get<std::int64_t>() < 0)
        throw ParseError("complex: n must be a non-negative integer");
    c.nvars = j.at("n").get<int>();
    for (const json& r : j.at("ranks")) {
        if (!r.is_number_integer() || r.get<std::int64_t>() < 0)
            throw ParseError("complex: ranks must be non-negative integers");
        c.ranks.push_back(r.get<int>());
    }
    if (c.ranks.empty()) throw ParseError("complex: ranks must be non-empty");
    const json& bd = j.at("boundaries");
    if (!bd.is_object()) throw ParseError("complex: boundaries must map degrees to matrices");
    for (int k = 1; k <= c.top_degree(); ++k) {
        std::string key = std::to_string(k);
        if (!bd.contains(key)) throw ParseError("complex: missing boundary " + key);
        const json& rows = bd.at(key);
        int r = c.ranks[static_cast<size_t>(k) - 1], cc = c.ranks[static_cast<size_t>(k)];
        if (!rows.is_array() || static_cast<int>(rows.size()) != r)
            throw ParseError("complex: boundary " + key + " must have " + std::to_string(r) +
                             " rows");
        LMat m(r, cc, LaurentPoly::zero(c.nvars));
        for (int i = 0; i < r; ++i) {
            const json& row = rows[static_cast<size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != cc)
                throw ParseError("complex: boundary " + key + " must have " +
                                 std::to_string(cc) + " columns");
            for (int jj = 0; jj < cc; ++jj)
                m.at(i, jj) = poly_from_json(row[static_cast<size_t>(jj)], c.nvars,
                                             "complex boundary entry");
        }
        c.boundaries.push_back(std::move(m));
    }
    for (const auto& [key, val] : bd.items()) {
        bool known = false;
        for (int k = 1; k <= c.top_degree(); ++k)
            if (key == std::to_string(k)) known = true;
        if (!known) throw ParseError("complex: unexpected boundary key '" + key + "'");
    }
    return c;
}

inline json presentation_to_json(const PresentationBundle& b) {
    json relators = json::array();
    for (const Word& w : b.presentation.relators) {
        json jw = json::array();
        for (int letter : w) jw.push_back(letter);
        relators.push_back(jw);
    }
    json images = json::array();
    for (const QMat& im : b.representation.images) images.push_back(qmat_to_json(im));
    json phi = json::array();
    for (const ExpVec& e : b.phi.images) {
        json je = json::array();
        for (auto v : e) je.push_back(v);
        phi.push_back(je);
    }
    return json{{"generators", b.presentation.generators},
                {"relators", relators},
                {"representation",
                 json{{"dim", b.representation.dim},
                      {"images", images},
                      {"check_relations", b.representation.check_relations}}},
                {"phi", phi},
                {"n", b.phi.nvars}};
}

inline PresentationBundle presentation_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("presentation block must be an object");
    for (const char* key : {"generators", "relators", "representation", "phi", "n"})
        if (!j.contains(key))
            throw ParseError(std::string("presentation block needs ") + key);
    PresentationBundle b;
    if (!j.at("generators").is_number_integer() || j.at("generators").get<std::int64_t>() < 0)
        throw ParseError("presentation: generators must be a non-negative integer");
    b.presentation.generators = j.at("generators").get<int>();
    for (const json& w : j.at("relators")) {
        Word word;
        if (!w.is_array()) throw ParseError("presentation: relators must be letter lists");
        for (const json& letter : w) {
            if (!letter.is_number_integer() || letter.get<std::int64_t>() == 0)
                throw ParseError("presentation: letters are nonzero signed generator indices");
            word.push_back(letter.get<int>());
        }
        b.presentation.relators.push_back(std::move(word));
    }
    const json& rep = j.at("representation");
    if (!rep.is_object() || !rep.contains("dim") || !rep.contains("images"))
        throw ParseError("presentation: representation needs dim and images");
    b.representation.dim = rep.at("dim").get<int>();
    if (b.representation.dim < 1) throw ParseError("presentation: representation dim must be >= 1");
    for (const json& im : rep.at("images"))
        b.representation.images.push_back(
            qmat_from_json(im, b.representation.dim, b.representation.dim,
                           "representation image"));
    b.representation.check_relations =
        rep.contains("check_relations") && rep.at("check_relations").get<bool>();
    if (!j.at("n").is_number_integer() || j.at("n").get<std::int64_t>() < 0)
        throw ParseError("presentation: n must be a non-negative integer");
    b.phi.nvars = j.at("n").get<int>();
    for (const json& e : j.at("phi")) {
        if (!e.is_array() || static_cast<int>(e.size()) != b.phi.nvars)
            throw ParseError("presentation: phi rows must have length n");
        ExpVec v;
        for (const json& x : e) {
            if (!x.is_number_integer()) throw ParseError("presentation: phi entries are integers");
            v.push_back(x.get<std::int64_t>());
        }
        b.phi.images.push_back(std::move(v));
    }
    if (static_cast<int>(b.representation.images.size()) != b.presentation.generators ||
        static_cast<int>(b.phi.images.size()) != b.presentation.generators)
        throw ParseError("presentation: per-generator data does not match generator count");
    return b;
}

inline json deformation_to_json(const DeformationModel& m) {
    json dims = json::array();
    for (int v : m.dims) dims.push_back(v);
    json d = json::array(), e = json::array();
    for (const QMat& q : m.d) d.push_back(qmat_to_json(q));
    for (const QMat& q : m.e) e.push_back(qmat_to_json(q));
    return json{{"dims", dims}, {"d", d}, {"e", e}};
}

inline DeformationModel deformation_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("deformation block must be an object");
    for (const char* key : {"dims", "d", "e"})
        if (!j.contains(key)) throw ParseError(std::string("deformation block needs ") + key);
    DeformationModel m;
    for (const json& v : j.at("dims")) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw ParseError("deformation: dims must be non-negative integers");
        m.dims.push_back(v.get<int>());
    }
    if (m.dims.empty()) throw ParseError("deformation: dims must be non-empty");
    const int top = m.top_degree();
    const json& jd = j.at("d");
    const json& je = j.at("e");
    if (static_cast<int>(jd.size()) != top || static_cast<int>(je.size()) != top)
        throw ParseError("deformation: d and e need one matrix per adjacent degree pair");
    for (int k = 0; k < top; ++k) {
        m.d.push_back(qmat_from_json(jd[static_cast<size_t>(k)], m.dim(k + 1), m.dim(k),
                                     "deformation d"));
        m.e.push_back(qmat_from_json(je[static_cast<size_t>(k)], m.dim(k + 1), m.dim(k),
                                     "deformation e"));
    }
    return m;
}

// --- whole documents --------------------------------------------------------

inline InputDocument parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw ParseError(std::string("not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    if (!j.contains("format") || !j.at("format").is_string())
        throw ParseError("document needs a format tag");
    if (j.at("format").get<std::string>() != kFormatTag)
        throw ParseError("unsupported format '" + j.at("format").get<std::string>() +
                         "', expected '" + kFormatTag + "'");
    InputDocument doc;
    int payloads = 0;
    try {
        if (j.contains("complex")) {
            doc.complex = complex_from_json(j.at("complex"));
            ++payloads;
        }
        if (j.contains("presentation")) {
            doc.presentation = presentation_from_json(j.at("presentation"));
            ++payloads;
        }
        if (j.contains("deformation")) {
            doc.deformation = deformation_from_json(j.at("deformation"));
            ++payloads;
        }
    } catch (const json::exception& ex) {
        throw ParseError(std::string("malformed document field: ") + ex.what());
    }
    if (payloads != 1)
        throw ParseError("document must contain exactly one of complex, presentation, "
                         "deformation");
    if (j.contains("queries")) {
        const json& q = j.at("queries");
        if (!q.is_object()) throw ParseError("queries block must be an object");
        int n = 0;
        if (doc.complex)
            n = doc.complex->nvars;
        else if (doc.presentation)
            n = doc.presentation->phi.nvars;
        if (q.contains("p")) doc.query_p = hom_from_json(q.at("p"), n, "queries.p");
        if (q.contains("xi")) doc.query_xi = realhom_from_json(q.at("xi"), n, "queries.xi");
        if (q.contains("k")) {
            if (!q.at("k").is_number_integer())
                throw ParseError("queries.k must be an integer");
            doc.query_k = q.at("k").get<int>();
        }
        if (q.contains("q")) {
            if (!q.at("q").is_number_integer())
                throw ParseError("queries.q must be an integer");
            doc.query_q = q.at("q").get<int>();
        }
    }
    return doc;
}

inline json document_to_json(const InputDocument& doc) {
    json j;
    j["format"] = kFormatTag;
    if (doc.complex) j["complex"] = complex_to_json(*doc.complex);
    if (doc.presentation) j["presentation"] = presentation_to_json(*doc.presentation);
    if (doc.deformation) j["deformation"] = deformation_to_json(*doc.deformation);
    json q = json::object();
    if (doc.query_p) q["p"] = hom_to_json(*doc.query_p);
    if (doc.query_xi) q["xi"] = realhom_to_json(*doc.query_xi);
    if (doc.query_k) q["k"] = *doc.query_k;
    if (doc.query_q) q["q"] = *doc.query_q;
    if (!q.empty()) j["queries"] = q;
    return j;
}

inline std::string serialize_document(const InputDocument& doc) {
    return document_to_json(doc).dump(2) + "\n";
}

// The chain complex a document denotes: the complex block itself, or
// the Fox complex of the presentation block.
inline FreeComplex realize_complex(const InputDocument& doc) {
    if (doc.complex) return *doc.complex;
    if (doc.presentation)
        return fox_complex(doc.presentation->presentation, doc.presentation->representation,
                           doc.presentation->phi);
    throw ParseError("document does not describe a chain complex");
}

}  // namespace nvk
