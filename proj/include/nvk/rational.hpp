#pragma once

#include <gmpxx.h>

#include <string>

#include "nvk/errors.hpp"

namespace nvk {

// Exact arbitrary-precision integers and rationals. All rank and
// vanishing decisions in the library go through these types; no
// floating point anywhere.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0)
        throw ShapeError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_of(long v) { return Rat(v); }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline Int rat_num(const Rat& r) { return r.get_num(); }
inline Int rat_den(const Rat& r) { return r.get_den(); }

inline std::string to_string(const Int& v) { return v.get_str(); }

inline std::string to_string(const Rat& r) {
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Int int_from_string(const std::string& s) {
    if (s.empty())
        throw ParseError("empty integer literal");
    mpz_class v;
    if (v.set_str(s, 10) != 0)
        throw ParseError("bad integer literal: " + s);
    return v;
}

}  // namespace nvk
