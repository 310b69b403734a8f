#pragma once

// Exact computation of twisted Betti numbers, twisted Novikov Betti
// numbers and cohomology jump loci of finite free chain complexes over
// Laurent polynomial rings, and of the Massey spectral sequence of a
// deformed differential d + t*e.

#include "nvk/betti.hpp"
#include "nvk/complexes.hpp"
#include "nvk/errors.hpp"
#include "nvk/io.hpp"
#include "nvk/jumploci.hpp"
#include "nvk/lattice.hpp"
#include "nvk/laurent.hpp"
#include "nvk/matrix.hpp"
#include "nvk/qlinalg.hpp"
#include "nvk/rational.hpp"
#include "nvk/specseq.hpp"
