#pragma once

// curvmax: curvature-aware monotone submodular maximization under a matroid
// constraint via non-oblivious local search, plus the numerical verification
// suite for its guarantees.

#include "curvmax/corpus.hpp"
#include "curvmax/element_set.hpp"
#include "curvmax/errors.hpp"
#include "curvmax/io.hpp"
#include "curvmax/lifted.hpp"
#include "curvmax/matroid.hpp"
#include "curvmax/parallel.hpp"
#include "curvmax/potential.hpp"
#include "curvmax/search.hpp"
#include "curvmax/set_function.hpp"
#include "curvmax/verify.hpp"

namespace curvmax {
inline constexpr const char* kVersion = "0.1.0";
}
