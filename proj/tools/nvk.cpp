// nvk: exact Betti numbers, Novikov Betti numbers, jump loci and Massey
// spectral sequences of complexes over Laurent polynomial rings.
//
// Exit codes: 0 success, 1 domain invariant failure, 2 parse/schema
// error, 3 resource limit exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nvk/nvk.hpp"

namespace {

using nvk::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nvk::ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nvk::InputDocument load(const std::string& path) {
    return nvk::parse_document(read_file(path));
}

std::string betti_str(const nvk::BettiVector& b) {
    std::string out = "(";
    for (size_t i = 0; i < b.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(b[i]);
    }
    return out + ")";
}

json betti_json(const nvk::BettiVector& b) {
    json arr = json::array();
    for (int v : b) arr.push_back(v);
    return arr;
}

nvk::MonoidHom parse_p_flag(const std::string& text, int n) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw nvk::ParseError(std::string("--p is not valid JSON: ") + ex.what());
    }
    return nvk::hom_from_json(j, n, "--p");
}

nvk::RealHom parse_xi_flag(const std::string& text, int n) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw nvk::ParseError(std::string("--xi is not valid JSON: ") + ex.what());
    }
    return nvk::realhom_from_json(j, n, "--xi");
}

struct Options {
    std::string file, file_b;
    std::string p_text, xi_text;
    bool json_out = false;
    int k = -1, q = -1;
    int max_page = 0;
    size_t max_support = nvk::JumpLociLimits{}.max_support;
    size_t max_assignments = nvk::JumpLociLimits{}.max_assignments;
};

void emit(const Options& opt, const json& machine, const std::string& human) {
    if (opt.json_out)
        std::cout << machine.dump(2) << "\n";
    else
        std::cout << human;
}

int cmd_validate(const Options& opt) {
    nvk::InputDocument doc = load(opt.file);
    bool valid = true;
    std::string message;
    if (doc.deformation) {
        nvk::ModelReport rep = nvk::validate_model(*doc.deformation);
        valid = rep.valid;
        message = rep.message;
    } else {
        nvk::FreeComplex c = nvk::realize_complex(doc);
        nvk::ValidationReport rep = nvk::validate(c);
        valid = rep.valid;
        message = rep.message;
    }
    json machine{{"command", "validate"}, {"valid", valid}, {"message", message}};
    std::string human = valid ? "valid\n" : "INVALID: " + message + "\n";
    emit(opt, machine, human);
    return valid ? 0 : 1;
}

int cmd_betti(const Options& opt) {
    nvk::InputDocument doc = load(opt.file);
    nvk::FreeComplex c = nvk::realize_complex(doc);
    nvk::BettiVector b;
    std::string mode;
    if (!opt.p_text.empty() || (doc.query_p && opt.xi_text.empty())) {
        nvk::MonoidHom p =
            !opt.p_text.empty() ? parse_p_flag(opt.p_text, c.nvars) : *doc.query_p;
        b = nvk::betti_specialized(c, p);
        mode = "specialized";
    } else if (!opt.xi_text.empty() || doc.query_xi) {
        nvk::RealHom xi =
            !opt.xi_text.empty() ? parse_xi_flag(opt.xi_text, c.nvars) : *doc.query_xi;
        b = nvk::novikov_betti(c, xi);
        mode = "novikov";
    } else {
        b = nvk::betti(c);
        mode = "plain";
    }
    json machine{{"command", "betti"}, {"mode", mode}, {"b", betti_json(b)}};
    emit(opt, machine, "b = " + betti_str(b) + "\n");
    return 0;
}

int cmd_jumploci(const Options& opt) {
    nvk::InputDocument doc = load(opt.file);
    nvk::FreeComplex c = nvk::realize_complex(doc);
    int k = opt.k >= 0 ? opt.k : doc.query_k.value_or(-1);
    int q = opt.q >= 0 ? opt.q : doc.query_q.value_or(-1);
    if (k < 0 || q < 0)
        throw nvk::ParseError("jumploci needs a degree (-k) and a jump amount (-q)");
    nvk::JumpLociLimits limits{opt.max_support, opt.max_assignments};
    nvk::JumpLocusResult res = nvk::jump_loci(c, k, q, limits);

    json family = json::array();
    std::ostringstream human;
    human << "jump locus for degree " << k << ", jump " << q << " (baseline b_" << k << " = "
          << res.baseline << "):\n";
    for (size_t i = 0; i < res.family.size(); ++i) {
        const nvk::FullSubgroup& g = res.family[i];
        std::string desc = g.rank() == 0 ? "{0}" : g.describe();
        human << "  G" << i + 1 << ": rank " << g.rank() << ", " << desc << "\n";
        family.push_back(json{{"rank", g.rank()},
                              {"basis", nvk::intmat_to_json(g.basis)},
                              {"constraints", g.describe()}});
    }
    if (res.family.empty()) human << "  (empty: no homomorphism attains this jump)\n";
    json notes = json::array();
    for (const nvk::SplitNote& s : res.splits) {
        human << "  split (drop d_" << k << " >= " << s.drop_low << ", drop d_" << k + 1
              << " >= " << s.drop_high << "): " << s.status << "\n";
        notes.push_back(json{{"drop_low", s.drop_low},
                             {"drop_high", s.drop_high},
                             {"status", s.status}});
    }
    json machine{{"command", "jumploci"}, {"k", k},
                 {"q", q},                {"baseline", res.baseline},
                 {"family", family},      {"splits", notes}};
    emit(opt, machine, human.str());
    return 0;
}

int cmd_specseq(const Options& opt) {
    nvk::InputDocument doc = load(opt.file);
    if (!doc.deformation)
        throw nvk::ParseError("specseq needs a document with a deformation block");
    nvk::SpectralRun run = nvk::run_spectral(*doc.deformation, opt.max_page);

    std::ostringstream human;
    json pages = json::array();
    for (const nvk::SpectralPage& pg : run.pages) {
        if (opt.max_page <= 0 && pg.r > run.stable_at) break;
        nvk::BettiVector dims(pg.dims.begin(), pg.dims.end());
        std::string dr;
        json jranks = json::array();
        json jdeltas = json::array();
        for (size_t kk = 0; kk < pg.deltas.size(); ++kk) {
            int rk = nvk::qrank(pg.deltas[kk]);
            if (!dr.empty()) dr += ", ";
            dr += std::to_string(rk);
            jranks.push_back(rk);
            jdeltas.push_back(nvk::qmat_to_json(pg.deltas[kk]));
        }
        human << "r=" << pg.r << ": dims " << betti_str(dims) << "; delta ranks (" << dr
              << ")\n";
        json jdims = json::array();
        for (int d : pg.dims) jdims.push_back(d);
        pages.push_back(json{
            {"r", pg.r}, {"dims", jdims}, {"delta_ranks", jranks}, {"deltas", jdeltas}});
    }
    human << "stable at r=" << run.stable_at << "\n";
    human << "E_infinity = " << betti_str(run.e_infinity) << "; Q(t) cross-check "
          << (run.cross_check_ok ? "OK" : "FAILED") << "\n";
    json machine{{"command", "specseq"},
                 {"pages", pages},
                 {"stable_at", run.stable_at},
                 {"e_infinity", betti_json(run.e_infinity)},
                 {"generic_betti", betti_json(run.generic)},
                 {"cross_check", run.cross_check_ok ? "ok" : "failed"}};
    emit(opt, machine, human.str());
    return 0;
}

int cmd_compare(const Options& opt) {
    nvk::InputDocument doc_a = load(opt.file);
    nvk::InputDocument doc_b = load(opt.file_b);
    nvk::FreeComplex c = nvk::realize_complex(doc_a);
    if (!doc_b.deformation)
        throw nvk::ParseError("compare needs a deformation document as its second input");
    nvk::MonoidHom p = !opt.p_text.empty()
                           ? parse_p_flag(opt.p_text, c.nvars)
                           : (doc_a.query_p ? *doc_a.query_p : nvk::MonoidHom::identity(c.nvars));
    nvk::CompareReport rep = nvk::compare_models(c, *doc_b.deformation, p);

    std::ostringstream human;
    human << "complex side (specialized Betti, homological): " << betti_str(rep.complex_betti)
          << "\n";
    human << "model side (stable page, cohomological):       "
          << betti_str(rep.model_einfinity) << "\n";
    human << "convention: " << rep.convention << "\n";
    human << (rep.equal ? "MATCH\n" : "MISMATCH\n");
    json machine{{"command", "compare"},
                 {"complex_betti", betti_json(rep.complex_betti)},
                 {"model_e_infinity", betti_json(rep.model_einfinity)},
                 {"equal", rep.equal},
                 {"convention", rep.convention}};
    emit(opt, machine, human.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Novikov Betti numbers, jump loci and Massey spectral sequences"};
    app.require_subcommand(1);
    Options opt;

    auto* v = app.add_subcommand("validate", "check a document and its invariants");
    v->add_option("file", opt.file, "input document")->required();
    v->add_flag("--json", opt.json_out, "machine-readable output");

    auto* b = app.add_subcommand("betti", "Betti numbers, optionally specialized or Novikov");
    b->add_option("file", opt.file, "input document")->required();
    auto* popt = b->add_option("--p", opt.p_text, "integer matrix of p as JSON rows");
    auto* xopt = b->add_option("--xi", opt.xi_text, "real homomorphism encoding as JSON");
    popt->excludes(xopt);
    b->add_flag("--json", opt.json_out, "machine-readable output");

    auto* jl = app.add_subcommand("jumploci", "jump locus subgroup family for (k, q)");
    jl->add_option("file", opt.file, "input document")->required();
    jl->add_option("-k", opt.k, "homological degree");
    jl->add_option("-q", opt.q, "jump amount (positive)");
    jl->add_option("--max-support", opt.max_support, "support-size budget per minor");
    jl->add_option("--max-assignments", opt.max_assignments, "subdivision assignment budget");
    jl->add_flag("--json", opt.json_out, "machine-readable output");

    auto* ss = app.add_subcommand("specseq", "Massey spectral sequence of a deformation model");
    ss->add_option("file", opt.file, "input document")->required();
    ss->add_option("--max-page", opt.max_page, "print pages up to this r");
    ss->add_flag("--json", opt.json_out, "machine-readable output");

    auto* cp = app.add_subcommand("compare", "compare a Laurent complex against a model");
    cp->add_option("complex", opt.file, "complex or presentation document")->required();
    cp->add_option("model", opt.file_b, "deformation document")->required();
    cp->add_option("--p", opt.p_text, "integer matrix of p as JSON rows");
    cp->add_flag("--json", opt.json_out, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (v->parsed()) return cmd_validate(opt);
        if (b->parsed()) return cmd_betti(opt);
        if (jl->parsed()) return cmd_jumploci(opt);
        if (ss->parsed()) return cmd_specseq(opt);
        if (cp->parsed()) return cmd_compare(opt);
    } catch (const nvk::ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const nvk::ResourceLimitError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const nvk::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
