#pragma once

#include <array>
#include <string_view>

#include "mig/hermitian.hpp"

namespace mig {

enum class Measure { Airm, Lem, Jbld, Skld };

inline constexpr std::array<Measure, 4> kAllMeasures = {Measure::Airm, Measure::Lem,
                                                        Measure::Jbld, Measure::Skld};

std::string_view measure_name(Measure m);
Measure parse_measure(std::string_view s);

// Squared dissimilarity between HPD matrices:
//   airm  sum of log^2 of the generalized eigenvalues of (Y, X)
//   lem   || log X - log Y ||_F^2
//   jbld  log det((X+Y)/2) - (1/2) log det(XY)
//   skld  tr(Y^{-1} X + X^{-1} Y - 2I)
double sq_distance(Measure m, const HpdMatrix& x, const HpdMatrix& y);

// Fast path without the HPD wrapper checks; callers guarantee both arguments
// are Hermitian positive definite.
double sq_distance_unchecked(Measure m, const ComplexMatrix& x, const ComplexMatrix& y);

}  // namespace mig
