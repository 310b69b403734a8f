#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nvk/errors.hpp"
#include "nvk/rational.hpp"

namespace nvk {

// Exponent vector of a Laurent monomial: one integer exponent per
// variable, negative exponents allowed. Length must match the ambient
// variable count.
using ExpVec = std::vector<std::int64_t>;

// Integer matrix of a monoid homomorphism Z^n -> Z^m, acting on
// exponent vectors by matrix-vector product.
struct MonoidHom {
    int m = 0;  // target rank (rows)
    int n = 0;  // source rank (cols)
    std::vector<std::int64_t> a;  // row-major, m*n entries

    MonoidHom() = default;
    MonoidHom(int m_, int n_) : m(m_), n(n_), a(static_cast<size_t>(m_) * n_, 0) {
        if (m_ < 0 || n_ < 0)
            throw ShapeError("negative MonoidHom dimensions");
    }

    static MonoidHom identity(int n_) {
        MonoidHom p(n_, n_);
        for (int i = 0; i < n_; ++i) p.at(i, i) = 1;
        return p;
    }
    static MonoidHom zero(int m_, int n_) { return MonoidHom(m_, n_); }

    std::int64_t& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    std::int64_t at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    ExpVec apply(const ExpVec& g) const {
        if (static_cast<int>(g.size()) != n)
            throw ShapeError("MonoidHom applied to exponent vector of wrong length");
        ExpVec out(m, 0);
        for (int i = 0; i < m; ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < n; ++j) s += at(i, j) * g[j];
            out[i] = s;
        }
        return out;
    }

    // Matrix product: (p ∘ q)(g) = p(q(g)).
    MonoidHom compose(const MonoidHom& q) const {
        if (n != q.m)
            throw ShapeError("MonoidHom composition shape mismatch");
        MonoidHom r(m, q.n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < q.n; ++j) {
                std::int64_t s = 0;
                for (int k = 0; k < n; ++k) s += at(i, k) * q.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    bool operator==(const MonoidHom& o) const { return m == o.m && n == o.n && a == o.a; }
};

// Sparse multivariate Laurent polynomial over Q. Terms are kept in a
// map ordered lexicographically on exponent vectors; zero coefficients
// are never stored, so equality and support queries are syntactic.
class LaurentPoly {
public:
    using TermMap = std::map<ExpVec, Rat>;

    explicit LaurentPoly(int nvars = 0) : nvars_(nvars) {
        if (nvars < 0) throw ShapeError("negative variable count");
    }

    static LaurentPoly zero(int nvars) { return LaurentPoly(nvars); }

    static LaurentPoly constant(int nvars, const Rat& c) {
        LaurentPoly f(nvars);
        if (!nvk::is_zero(c)) f.terms_.emplace(ExpVec(nvars, 0), c);
        return f;
    }

    static LaurentPoly monomial(int nvars, const ExpVec& e, const Rat& c) {
        if (static_cast<int>(e.size()) != nvars)
            throw ShapeError("monomial exponent length mismatch");
        LaurentPoly f(nvars);
        if (!nvk::is_zero(c)) f.terms_.emplace(e, c);
        return f;
    }

    // Single variable t_i of an n-variable ring, exponent 1.
    static LaurentPoly variable(int nvars, int i) {
        ExpVec e(nvars, 0);
        e.at(i) = 1;
        return monomial(nvars, e, Rat(1));
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    Rat coeff(const ExpVec& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first == ExpVec(nvars_, 0));
    }

    std::set<ExpVec> support() const {
        std::set<ExpVec> s;
        for (const auto& [e, c] : terms_) s.insert(e);
        return s;
    }

    void add_term(const ExpVec& e, const Rat& c) {
        if (static_cast<int>(e.size()) != nvars_)
            throw ShapeError("term exponent length mismatch");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!nvk::is_zero(c)) terms_.emplace(e, c);
        } else {
            it->second += c;
            if (nvk::is_zero(it->second)) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& g) {
        check_same_ring(g);
        for (const auto& [e, c] : g.terms_) add_term(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& g) {
        check_same_ring(g);
        for (const auto& [e, c] : g.terms_) add_term(e, Rat(-c));
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly f, const LaurentPoly& g) { return f += g; }
    friend LaurentPoly operator-(LaurentPoly f, const LaurentPoly& g) { return f -= g; }

    LaurentPoly operator-() const {
        LaurentPoly r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, Rat(-c));
        return r;
    }

    friend LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g) {
        f.check_same_ring(g);
        LaurentPoly r(f.nvars_);
        for (const auto& [ef, cf] : f.terms_)
            for (const auto& [eg, cg] : g.terms_) {
                ExpVec e(f.nvars_);
                for (int i = 0; i < f.nvars_; ++i) e[i] = ef[i] + eg[i];
                r.add_term(e, Rat(cf * cg));
            }
        return r;
    }

    friend LaurentPoly operator*(const Rat& c, const LaurentPoly& f) {
        LaurentPoly r(f.nvars_);
        if (nvk::is_zero(c)) return r;
        for (const auto& [e, cf] : f.terms_) r.terms_.emplace(e, Rat(c * cf));
        return r;
    }

    bool operator==(const LaurentPoly& g) const {
        return nvars_ == g.nvars_ && terms_ == g.terms_;
    }
    bool operator!=(const LaurentPoly& g) const { return !(*this == g); }

    // Strict total order (lex on variable count, then on the term map);
    // used only as a container key, has no algebraic meaning.
    bool operator<(const LaurentPoly& g) const {
        if (nvars_ != g.nvars_) return nvars_ < g.nvars_;
        return terms_ < g.terms_;
    }

    // Exact division by a divisor known to divide *this. Repeatedly
    // cancels the lex-leading term. When the division is exact every
    // quotient exponent lies in the box pinned by the Newton polytope
    // identity NP(f) = NP(q) + NP(g) (coordinate extrema add, leading
    // terms cannot cancel over a domain), so a step outside the box
    // proves inexactness; the emitted exponents strictly decrease in
    // lex order, which bounds the loop either way.
    LaurentPoly divided_exactly_by(const LaurentPoly& g) const {
        check_same_ring(g);
        if (g.is_zero()) throw ShapeError("division by zero polynomial");
        if (is_zero()) return LaurentPoly(nvars_);
        ExpVec lo(nvars_), hi(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            std::int64_t fmin = 0, fmax = 0, gmin = 0, gmax = 0;
            bool first = true;
            for (const auto& [e, c] : terms_) {
                fmin = first ? e[i] : std::min(fmin, e[i]);
                fmax = first ? e[i] : std::max(fmax, e[i]);
                first = false;
            }
            first = true;
            for (const auto& [e, c] : g.terms_) {
                gmin = first ? e[i] : std::min(gmin, e[i]);
                gmax = first ? e[i] : std::max(gmax, e[i]);
                first = false;
            }
            lo[i] = fmin - gmin;
            hi[i] = fmax - gmax;
        }
        LaurentPoly rem = *this;
        LaurentPoly quo(nvars_);
        const auto& glead = *g.terms_.rbegin();
        size_t guard = 0;
        while (!rem.is_zero()) {
            if (++guard > 10000000)
                throw InvariantError("polynomial division did not terminate");
            const auto& rlead = *rem.terms_.rbegin();
            ExpVec e(nvars_);
            for (int i = 0; i < nvars_; ++i) {
                e[i] = rlead.first[i] - glead.first[i];
                if (e[i] < lo[i] || e[i] > hi[i])
                    throw InvariantError(
                        "inexact polynomial division in fraction-free elimination");
            }
            Rat c = rlead.second / glead.second;
            LaurentPoly t = monomial(nvars_, e, c);
            quo += t;
            rem -= t * g;
        }
        return quo;
    }

    // Human-readable form; variables print as t,s,u for n <= 3, else t1..tn.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        // print highest terms first
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            Rat ab = abs(c);
            if (first) {
                if (sgn(c) < 0) out += "-";
                first = false;
            } else {
                out += sgn(c) < 0 ? " - " : " + ";
            }
            std::string mono = monomial_str(e);
            if (mono.empty()) {
                out += to_string(ab);
            } else {
                if (ab != 1) out += to_string(ab) + "*";
                out += mono;
            }
        }
        return out;
    }

private:
    void check_same_ring(const LaurentPoly& g) const {
        if (nvars_ != g.nvars_)
            throw ShapeError("variable-count mismatch: " + std::to_string(nvars_) +
                             " vs " + std::to_string(g.nvars_));
    }

    std::string monomial_str(const ExpVec& e) const {
        static const char* short_names[3] = {"t", "s", "u"};
        std::string out;
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            if (!out.empty()) out += "*";
            out += nvars_ <= 3 ? short_names[i] : ("t" + std::to_string(i + 1));
            if (e[i] != 1) out += "^" + std::to_string(e[i]);
        }
        return out;
    }

    int nvars_;
    TermMap terms_;
};

// Ring homomorphism L_n -> L_m induced by p: Z^n -> Z^m; each term
// c*x^g maps to c*x^{p(g)} and like terms merge (cancellation possible).
inline LaurentPoly apply_hom(const MonoidHom& p, const LaurentPoly& f) {
    if (p.n != f.nvars())
        throw ShapeError("apply_hom: homomorphism source rank " + std::to_string(p.n) +
                         " does not match variable count " + std::to_string(f.nvars()));
    LaurentPoly out(p.m);
    for (const auto& [e, c] : f.terms()) out.add_term(p.apply(e), c);
    return out;
}

}  // namespace nvk
