#include "pzp/condense.hpp"

#include <cmath>

#include "pzp/errors.hpp"

namespace pzp {

namespace {

// Slots of P whose row or column carries anything; a fully zero slot has
// nothing to eliminate (already condensed, or an electrically passive phase).
std::vector<int> active_slots(const Mat10& GT, const std::vector<int>& P,
                              double scale) {
  std::vector<int> act;
  for (int s : P) {
    const double rowmax = GT.row(s).cwiseAbs().maxCoeff();
    const double colmax = GT.col(s).cwiseAbs().maxCoeff();
    if (std::max(rowmax, colmax) > 1e-14 * scale) act.push_back(s);
  }
  return act;
}

// T = -(P GT P)^{-1} P GT with zero columns on the eliminated slots, so that
// (I + T) x completes the kept components of x and drops eliminated ones.
Mat10 elimination_map(const Mat10& GT, const std::vector<int>& P, double scale) {
  Mat10 T = Mat10::Zero();
  const int m = static_cast<int>(P.size());
  if (m == 0) return T;

  Eigen::MatrixXd A(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) A(a, b) = GT(P[a], P[b]);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw DegenerateMaterialError(
        "transverse pivot block is singular; material cannot be condensed");

  Eigen::MatrixXd B(m, 10);
  for (int a = 0; a < m; ++a) B.row(a) = GT.row(P[a]);
  Eigen::MatrixXd X = -lu.solve(B);

  for (int a = 0; a < m; ++a) T.row(P[a]) = X.row(a);
  for (int s : P) T.col(s).setZero();
  (void)scale;
  return T;
}

Mat10 condense_with(const Mat10& GT, const Mat10& extra,
                    const std::vector<int>& P, Mat10& T_out) {
  const double scale = std::max(GT.cwiseAbs().maxCoeff(), 1e-300);
  const std::vector<int> act = active_slots(GT, P, scale);
  T_out = elimination_map(GT, act, scale);
  Mat10 I = Mat10::Identity();
  Mat10 res = (I + T_out.transpose()) * (GT + extra) * (I + T_out);
  // eliminated rows/columns are zero by construction; make them exact
  for (int s : act) {
    res.row(s).setZero();
    res.col(s).setZero();
  }
  return res;
}

}  // namespace

CondensedTensors condense(const Mat10& GT, double G) {
  if (G < 0) throw DegenerateCircuitError("admittance constant G must be >= 0");
  CondensedTensors out;
  out.G = G;

  Mat10 circuit = Mat10::Zero();
  circuit(sL3, sL3) = 2.0 * G;

  out.RN = condense_with(GT, Mat10::Zero(), {sK13, sK23, sK33, sL3}, out.TN);
  out.RM = condense_with(GT, circuit, {sK13, sK23, sK33}, out.TM);
  return out;
}

Tensor4 CondensedTensors::RM_inplane() const {
  Tensor4 t;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int e = 0; e < 2; ++e)
          t(a, b, g, e) = RM(inplane_slot(a, b), inplane_slot(g, e));
  return t;
}

Tensor4 CondensedTensors::RN_inplane() const {
  Tensor4 t;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int e = 0; e < 2; ++e)
          t(a, b, g, e) = RN(inplane_slot(a, b), inplane_slot(g, e));
  return t;
}

Mat2 CondensedTensors::dM() const {
  Mat2 d;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) d(a, b) = RM(inplane_slot(a, b), sL3);
  return d;
}

double CondensedTensors::cM33() const { return RM(sL3, sL3); }

Tensor4 local_reduction(const Tensor4& RM_H, const Mat2& dM_H, const Mat2& eM_H,
                        double cM33_H, double G, double volY1) {
  if (G < 0) throw DegenerateCircuitError("admittance constant G must be >= 0");
  const double denom = cM33_H + 2.0 * volY1 * G;
  const double scale = std::max({RM_H.max_abs(), dM_H.cwiseAbs().maxCoeff(),
                                 eM_H.cwiseAbs().maxCoeff(), 1e-30});
  if (!(denom > 1e-14 * scale))
    throw DegenerateCircuitError(
        "c_M33_H + 2|Y1|G is not positive; the voltage cannot be eliminated");
  Tensor4 r = RM_H;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int e = 0; e < 2; ++e)
          r(a, b, g, e) -= dM_H(a, b) * eM_H(g, e) / denom;
  return r;
}

}  // namespace pzp
