#pragma once

// Constitutive tensors of a piezoelectric phase and their packing into the
// 10x10 global tensor acting on generalized strain/field 10-vectors.
//
// The 10-vector layout is fixed throughout the library:
//   0:K11 1:K12 2:K21 3:K22 4:K13 5:K23 6:K33 7:L1 8:L2 9:L3
// where K collects the (scaled) strain components (K12 = K21 for vectors
// arising from actual fields) and L the electric-potential gradient. The
// global tensor carries the duplicated in-plane slots and the 2x/4x factors
// on the transverse shear rows/columns so that for M = (K, L)
//   M . GT . M^T = sum_{ijkl} K_ij R_ijkl K_kl + sum_{jk} c_jk L_j L_k :
// the piezo blocks (+d upper right, -d lower left) cancel in the quadratic
// form but make the operator non-symmetric.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pzp {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat10 = Eigen::Matrix<double, 10, 10>;
using Vec10 = Eigen::Matrix<double, 10, 1>;

// Slot indices of the 10-vector layout.
enum Slot : int {
  sK11 = 0,
  sK12 = 1,
  sK21 = 2,
  sK22 = 3,
  sK13 = 4,
  sK23 = 5,
  sK33 = 6,
  sL1 = 7,
  sL2 = 8,
  sL3 = 9,
};

// In-plane slot of the pair (a,b), 0-based a,b in {0,1}.
inline constexpr int inplane_slot(int a, int b) { return 2 * a + b; }

// Fourth-order in-plane tensor (2x2x2x2), 0-based indices.
class Tensor4 {
 public:
  Tensor4() { v_.fill(0.0); }
  double& operator()(int a, int b, int c, int d) {
    return v_[((a * 2 + b) * 2 + c) * 2 + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return v_[((a * 2 + b) * 2 + c) * 2 + d];
  }
  Tensor4& operator+=(const Tensor4& o) {
    for (int i = 0; i < 16; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
  }
  friend Tensor4 operator*(double s, Tensor4 t) {
    t *= s;
    return t;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) {
    a += b;
    return a;
  }
  friend Tensor4 operator-(const Tensor4& a, const Tensor4& b) {
    Tensor4 r;
    for (int i = 0; i < 16; ++i) r.v_[i] = a.v_[i] - b.v_[i];
    return r;
  }
  double max_abs() const {
    double m = 0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }
  // Full contraction a : T : b over all four in-plane index pairs.
  double contract(const Mat2& a, const Mat2& b) const;
  // Single-sided contraction (T : b)_{ab}.
  Mat2 apply(const Mat2& b) const;
  // Mandel 3x3 matrix on symmetric 2x2 arguments, basis (11, 22, sqrt2*12).
  Mat3 mandel() const;
  static Tensor4 from_mandel(const Mat3& m);
  static Tensor4 isotropic(double lambda, double mu);

 private:
  std::array<double, 16> v_;
};

// Elasticity tensor R_ijkl, full 81-entry storage, 0-based indices.
class ElasticTensor {
 public:
  ElasticTensor() { v_.fill(0.0); }
  double& operator()(int i, int j, int k, int l) {
    return v_[((i * 3 + j) * 3 + k) * 3 + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return v_[((i * 3 + j) * 3 + k) * 3 + l];
  }

  static ElasticTensor isotropic(double lambda, double mu);
  // 21 upper-triangle entries of the 6x6 Voigt stiffness, row-major, Voigt
  // pair order (11, 22, 33, 23, 13, 12). Entries are the tensor values
  // themselves (stiffness convention, no shear doubling on input).
  static ElasticTensor from_voigt(const std::array<double, 21>& upper);

  // Mandel 6x6: the quadratic form on symmetric matrices in an orthonormal
  // basis, so its eigenvalues are the tensor's eigenvalues as an operator.
  Eigen::Matrix<double, 6, 6> mandel() const;
  double max_abs() const;

 private:
  std::array<double, 81> v_;
};

// Piezoelectric coupling d_kij (symmetric in ij), 0-based.
class PiezoTensor {
 public:
  PiezoTensor() { v_.fill(0.0); }
  double& operator()(int k, int i, int j) { return v_[(k * 3 + i) * 3 + j]; }
  double operator()(int k, int i, int j) const {
    return v_[(k * 3 + i) * 3 + j];
  }
  // 18 entries: k = 1..3 rows, each with Voigt pair order (11,22,33,23,13,12).
  static PiezoTensor from_rows(const std::array<double, 18>& rows);
  double max_abs() const;

 private:
  std::array<double, 27> v_;
};

// Dielectric permittivity c_jk (symmetric 3x3).
using Permittivity = Mat3;

struct Material {
  ElasticTensor R;
  PiezoTensor d;
  Permittivity c = Permittivity::Zero();

  static Material isotropic_elastic(double lambda, double mu) {
    return Material{ElasticTensor::isotropic(lambda, mu), PiezoTensor{},
                    Permittivity::Zero()};
  }
};

// 10x10 global tensor from the three constitutive tensors; layout above.
Mat10 assemble_global_tensor(const ElasticTensor& R, const PiezoTensor& d,
                             const Permittivity& c);
inline Mat10 assemble_global_tensor(const Material& m) {
  return assemble_global_tensor(m.R, m.d, m.c);
}

struct ValidationReport {
  bool ok = false;
  // True when the phase carries an electric response (c positive definite);
  // false for a passive phase (c = 0 and d = 0).
  bool electric = false;
  double elastic_margin = 0.0;       // smallest eigenvalue of the Mandel 6x6
  double permittivity_margin = 0.0;  // smallest eigenvalue of c (0 if passive)
  std::vector<std::string> symmetry_violations;
  std::vector<std::string> issues;  // everything that makes ok false
};

// Checks the internal invariants of one phase: index symmetries, elastic
// coercivity, and electric consistency (either c positive definite, or c and d
// both identically zero).
ValidationReport validate_material(const ElasticTensor& R, const PiezoTensor& d,
                                   const Permittivity& c);
inline ValidationReport validate_material(const Material& m) {
  return validate_material(m.R, m.d, m.c);
}

// Phase-pair consistency: the matrix phase must be passive, the inclusion
// phase electrically active. Returns human-readable flags; empty means ok.
std::vector<std::string> phase_consistency(const ValidationReport& matrix,
                                           const ValidationReport& inclusion);

}  // namespace pzp
