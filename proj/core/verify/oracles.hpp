#pragma once

// Independent references used by the acceptance suite. Everything here is
// computed by a different method than the library under test: dense slice
// elimination instead of the projection-based condensation, and a beam-mode
// Galerkin series instead of the finite element plate solver.

#include <vector>

#include "pzp/tensors.hpp"

namespace pzp::verify {

// Center deflection coefficient of the uniformly loaded clamped unit square,
// w_c = coeff * q / D with D the isotropic bending stiffness. Galerkin with
// products of clamped-clamped beam eigenfunctions; `modes` per direction.
// 13 modes resolve the classical value to about 3e-5 relative.
double clamped_plate_series_coefficient(int modes = 13);

// Schur elimination of the listed slots via dense LU on the extracted block.
Mat10 dense_condense_oracle(const Mat10& GT, const std::vector<int>& elim);

}  // namespace pzp::verify
