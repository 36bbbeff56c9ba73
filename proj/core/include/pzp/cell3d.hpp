#pragma once

// Comparable-regime coupled elastic-electrostatic cell problems on the
// extruded cell Z = Y x (-1,1).
//
// No transverse condensation here: the pointwise coefficient is the full
// 10x10 global tensor and the corrector unknown is U = (u, psi) with u a
// 3-component displacement (periodic in plane, free through the thickness,
// translations removed by mean-zero constraints) and psi the electric
// potential carried on inclusion columns only, grounded on the top and
// bottom faces. The seven loadings share one operator:
//   membrane  M(lm):  base = E^lm
//   flexion   N(lm):  base = -x3 E^lm
//   electric  E3:     base = b = (0_9, 1)
// and every corrector solves  int M1(V) R M1(U) = -int M1(V) R base,
// where M1 packs the 3D strain of u and the gradient of psi into the
// 10-vector layout. The off-diagonal (12) loading is the symmetrized unit
// with halves, representing both 12 and 21.

#include <Eigen/Dense>

#include "pzp/fem.hpp"
#include "pzp/mesh.hpp"
#include "pzp/spaces.hpp"
#include "pzp/tensors.hpp"

namespace pzp {

// Piecewise-constant full coefficient field on the tagged extruded mesh.
class FieldZ {
 public:
  FieldZ(CellMesh3D mesh, const Material& matrix, const Material& inclusion);

  const CellMesh3D& mesh() const { return mesh_; }
  const CellSpace3D& space() const { return space_; }
  const Material& material(int phase) const { return mats_[phase]; }
  const Mat10& GT(int phase) const { return GT_[phase]; }
  const Mat10& at(int i, int j) const { return GT_[mesh_.tag(i, j)]; }

 private:
  CellMesh3D mesh_;
  CellSpace3D space_;
  Material mats_[2];
  Mat10 GT_[2];
};

// Loading order: M11 M22 M12 N11 N22 N12 E3.
inline constexpr int kNumLoadings3D = 7;
Vec10 loading_base_3d(int col, double x3);

// Coupled operator and the seven right-hand sides on the space of `field`.
void assemble_cell3d_system(const FieldZ& field, fem::SpMat& A, Eigen::MatrixXd& B);

// Corrector DOF columns in loading order; rows follow CellSpace3D numbering
// (displacement block, then electric block).
struct Correctors3D {
  Eigen::MatrixXd U;  // ndof x 7
};

Correctors3D solve_cell3d(const FieldZ& field);
Eigen::VectorXd solve_corrector_3d(const FieldZ& field, int loading);

struct EffectiveTensorsComparable {
  Tensor4 RMM, RMN, RNM, RNN;
  Mat2 dMM3 = Mat2::Zero();
  Mat2 dNM3 = Mat2::Zero();
  Mat2 eMM3 = Mat2::Zero();
  Mat2 eMN3 = Mat2::Zero();
  double cMM33 = 0.0;
  double vol_Y1 = 0.0;
};

// Quadratures of the total fields over Z (measure |Z| = 2, not normalized):
// the first factor of each entry carries the row loading, the second the
// column loading, with the nonsymmetric pointwise tensor in between.
EffectiveTensorsComparable effective_tensors_comparable(const Correctors3D& correctors,
                                                        const FieldZ& field);

EffectiveTensorsComparable homogenize_comparable(const CellMesh3D& mesh,
                                                 const Material& matrix,
                                                 const Material& inclusion);

}  // namespace pzp
