#pragma once

// Pointwise transverse condensation of the 10x10 global tensor.
//
// Two projections are used: P (flexion) eliminates the transverse slots
// {K13, K23, K33, L3}; P2 (membrane) eliminates {K13, K23, K33} only, the
// transverse electric field staying in the membrane model. The elimination
// maps are T = -(P GT P)^{-1} P GT restricted to the active slots, and
//   GT_N = (I + T_N^t) GT (I + T_N)
//   GT_M = (I + T_M^t) (GT + 2 G P1) (I + T_M),   P1 = e_{L3} e_{L3}^t,
// where G >= 0 is the circuit admittance constant. Eliminated rows/columns
// of the results are exact zeros; slots whose whole row and column already
// vanish are skipped, which makes the operation idempotent and covers the
// electrically passive matrix phase.

#include "pzp/tensors.hpp"

namespace pzp {

struct CondensedTensors {
  Mat10 RM = Mat10::Zero();  // membrane-condensed tensor (includes the 2G term)
  Mat10 RN = Mat10::Zero();  // flexion-condensed tensor
  Mat10 TM = Mat10::Zero();  // membrane elimination map (columns on kept slots)
  Mat10 TN = Mat10::Zero();  // flexion elimination map
  double G = 0.0;

  // The coefficients the 2D cell problems consume.
  Tensor4 RM_inplane() const;
  Tensor4 RN_inplane() const;
  Mat2 dM() const;      // d_M3(alpha,beta): upper-right block of RM
  double cM33() const;  // (L3, L3) entry of RM
};

CondensedTensors condense(const Mat10& GT, double G);

// Reduced membrane tensor of the local mixed model:
//   R_loc = R_M_H - (c_M33_H + 2 |Y1| G)^{-1} d_M_H (x) e_M_H.
Tensor4 local_reduction(const Tensor4& RM_H, const Mat2& dM_H, const Mat2& eM_H,
                        double cM33_H, double G, double volY1);

}  // namespace pzp
