#pragma once

// Thin-regime periodic cell problems on Y = (-1/2,1/2)^2.
//
// The transverse condensation is applied per phase before any cell solve
// (it is pointwise in y and the constitutive field does not depend on x3),
// which turns the cell problems into purely in-plane elliptic problems:
// three membrane loadings E^{gd} for (gd) in {11, 22, 12}, three flexion
// loadings in the bicubic space, and one electric loading driven by d_M.
// The 12 loading is the symmetrized unit (E^12_12 = E^12_21 = 1/2); the 21
// problem is the same solve. Correctors are mean-zero by a constrained
// solve, so periodicity and the zero average hold exactly.

#include <Eigen/Dense>

#include "pzp/condense.hpp"
#include "pzp/mesh.hpp"

namespace pzp {

// In-plane coefficients of one phase after transverse condensation at G = 0;
// the circuit admittance enters the plate models, never the cell problems.
struct CondensedPhase {
  Tensor4 RM;
  Tensor4 RN;
  Mat2 dM = Mat2::Zero();
  double cM33 = 0.0;

  static CondensedPhase from_material(const Material& m);
};

// Piecewise-constant condensed coefficient field on the tagged cell mesh.
class CondensedFieldY {
 public:
  CondensedFieldY(CellMesh2D mesh, const Material& matrix, const Material& inclusion);
  CondensedFieldY(CellMesh2D mesh, CondensedPhase matrix, CondensedPhase inclusion);

  const CellMesh2D& mesh() const { return mesh_; }
  const CondensedPhase& phase(int p) const { return phases_[p]; }
  const CondensedPhase& at(int e) const { return phases_[mesh_.tag(e)]; }
  const CondensedPhase& at(int i, int j) const { return phases_[mesh_.tag(i, j)]; }

 private:
  CellMesh2D mesh_;
  CondensedPhase phases_[2];
};

// Loading directions, fixed column order {11, 22, 12}.
inline constexpr int kNumLoadings = 3;
Mat2 unit_loading(int col);

// Corrector DOF vectors. Membrane and electric correctors live in the
// periodic Q1 vector space (dof = 2*node + comp), flexion correctors in the
// periodic BFS space; one column per loading.
struct Correctors2D {
  Eigen::MatrixXd uM;   // 2*n^2 x 3
  Eigen::MatrixXd uN;   // 4*n^2 x 3
  Eigen::VectorXd uM3;  // 2*n^2
};

Eigen::MatrixXd solve_membrane_correctors(const CondensedFieldY& field);
Eigen::MatrixXd solve_flexion_correctors(const CondensedFieldY& field);
Eigen::VectorXd solve_piezo_corrector(const CondensedFieldY& field);

// All seven correctors; the membrane and electric problems share one
// factorization (same operator, batched right-hand sides).
Correctors2D solve_cell2d(const CondensedFieldY& field);

struct EffectiveTensorsThin {
  Tensor4 RN;     // plate bending
  Tensor4 RM;     // membrane
  Mat2 dM3 = Mat2::Zero();
  Mat2 eM3 = Mat2::Zero();
  double cM33 = 0.0;
  double vol_Y1 = 0.0;
};

// Energy-form quadratures over Y of the total fields E + S(u) (membrane,
// with the electric loading entering through d_M) and E + D^2 u (flexion).
EffectiveTensorsThin effective_tensors_thin(const Correctors2D& correctors,
                                            const CondensedFieldY& field);

// Convenience: condense, solve, integrate.
EffectiveTensorsThin homogenize_thin(const CellMesh2D& mesh, const Material& matrix,
                                     const Material& inclusion);

}  // namespace pzp
