#include "pzp/tensors.hpp"

#include <cmath>

#include "pzp/errors.hpp"

namespace pzp {

namespace {
constexpr int kVoigtPairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
}

double Tensor4::contract(const Mat2& a, const Mat2& b) const {
  double s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += a(i, j) * (*this)(i, j, k, l) * b(k, l);
  return s;
}

Mat2 Tensor4::apply(const Mat2& b) const {
  Mat2 r = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(i, j) += (*this)(i, j, k, l) * b(k, l);
  return r;
}

Mat3 Tensor4::mandel() const {
  const double s = std::sqrt(2.0);
  const double w[3] = {1.0, 1.0, s};
  const int p[3][2] = {{0, 0}, {1, 1}, {0, 1}};
  Mat3 m;
  for (int A = 0; A < 3; ++A)
    for (int B = 0; B < 3; ++B)
      m(A, B) = w[A] * w[B] * (*this)(p[A][0], p[A][1], p[B][0], p[B][1]);
  return m;
}

Tensor4 Tensor4::from_mandel(const Mat3& m) {
  const double s = std::sqrt(2.0);
  const double w[3] = {1.0, 1.0, s};
  const int p[3][2] = {{0, 0}, {1, 1}, {0, 1}};
  auto voigt_of = [](int i, int j) { return (i == j) ? i : 2; };
  Tensor4 t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          int A = voigt_of(i, j), B = voigt_of(k, l);
          t(i, j, k, l) = m(A, B) / (w[A] * w[B]);
        }
  (void)p;
  return t;
}

Tensor4 Tensor4::isotropic(double lambda, double mu) {
  Tensor4 t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          t(i, j, k, l) = lambda * (i == j) * (k == l) +
                          mu * ((i == k) * (j == l) + (i == l) * (j == k));
  return t;
}

ElasticTensor ElasticTensor::isotropic(double lambda, double mu) {
  ElasticTensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          t(i, j, k, l) = lambda * (i == j) * (k == l) +
                          mu * ((i == k) * (j == l) + (i == l) * (j == k));
  return t;
}

ElasticTensor ElasticTensor::from_voigt(const std::array<double, 21>& upper) {
  Eigen::Matrix<double, 6, 6> C;
  int idx = 0;
  for (int A = 0; A < 6; ++A)
    for (int B = A; B < 6; ++B) {
      C(A, B) = upper[idx];
      C(B, A) = upper[idx];
      ++idx;
    }
  ElasticTensor t;
  for (int A = 0; A < 6; ++A)
    for (int B = 0; B < 6; ++B) {
      int i = kVoigtPairs[A][0], j = kVoigtPairs[A][1];
      int k = kVoigtPairs[B][0], l = kVoigtPairs[B][1];
      // all index symmetries share the one Voigt value
      t(i, j, k, l) = C(A, B);
      t(j, i, k, l) = C(A, B);
      t(i, j, l, k) = C(A, B);
      t(j, i, l, k) = C(A, B);
    }
  return t;
}

Eigen::Matrix<double, 6, 6> ElasticTensor::mandel() const {
  const double s = std::sqrt(2.0);
  const double w[6] = {1, 1, 1, s, s, s};
  Eigen::Matrix<double, 6, 6> m;
  for (int A = 0; A < 6; ++A)
    for (int B = 0; B < 6; ++B) {
      int i = kVoigtPairs[A][0], j = kVoigtPairs[A][1];
      int k = kVoigtPairs[B][0], l = kVoigtPairs[B][1];
      m(A, B) = w[A] * w[B] * (*this)(i, j, k, l);
    }
  return m;
}

double ElasticTensor::max_abs() const {
  double m = 0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

PiezoTensor PiezoTensor::from_rows(const std::array<double, 18>& rows) {
  PiezoTensor d;
  for (int k = 0; k < 3; ++k)
    for (int A = 0; A < 6; ++A) {
      int i = kVoigtPairs[A][0], j = kVoigtPairs[A][1];
      d(k, i, j) = rows[6 * k + A];
      d(k, j, i) = rows[6 * k + A];
    }
  return d;
}

double PiezoTensor::max_abs() const {
  double m = 0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

Mat10 assemble_global_tensor(const ElasticTensor& R, const PiezoTensor& d,
                             const Permittivity& c) {
  Mat10 G = Mat10::Zero();
  // in-plane rows (K_ab), 0-based plane indices a,b in {0,1}; 3rd direction = 2
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int r = inplane_slot(a, b);
      for (int g = 0; g < 2; ++g)
        for (int e = 0; e < 2; ++e) G(r, inplane_slot(g, e)) = R(a, b, g, e);
      for (int g = 0; g < 2; ++g) G(r, sK13 + g) = 2.0 * R(a, b, g, 2);
      G(r, sK33) = R(a, b, 2, 2);
      for (int g = 0; g < 2; ++g) G(r, sL1 + g) = d(g, a, b);
      G(r, sL3) = d(2, a, b);
    }
  // transverse shear rows (K_a3)
  for (int a = 0; a < 2; ++a) {
    const int r = sK13 + a;
    for (int g = 0; g < 2; ++g)
      for (int e = 0; e < 2; ++e) G(r, inplane_slot(g, e)) = 2.0 * R(a, 2, g, e);
    for (int g = 0; g < 2; ++g) G(r, sK13 + g) = 4.0 * R(a, 2, g, 2);
    G(r, sK33) = 2.0 * R(a, 2, 2, 2);
    for (int g = 0; g < 2; ++g) G(r, sL1 + g) = 2.0 * d(g, a, 2);
    G(r, sL3) = 2.0 * d(2, a, 2);
  }
  // normal row (K_33)
  for (int g = 0; g < 2; ++g)
    for (int e = 0; e < 2; ++e) G(sK33, inplane_slot(g, e)) = R(2, 2, g, e);
  for (int g = 0; g < 2; ++g) G(sK33, sK13 + g) = 2.0 * R(2, 2, g, 2);
  G(sK33, sK33) = R(2, 2, 2, 2);
  for (int g = 0; g < 2; ++g) G(sK33, sL1 + g) = d(g, 2, 2);
  G(sK33, sL3) = d(2, 2, 2);
  // electric rows (L_k): -d on the elastic columns, +c on the electric block
  for (int k = 0; k < 3; ++k) {
    const int r = sL1 + k;
    for (int g = 0; g < 2; ++g)
      for (int e = 0; e < 2; ++e) G(r, inplane_slot(g, e)) = -d(k, g, e);
    for (int g = 0; g < 2; ++g) G(r, sK13 + g) = -2.0 * d(k, g, 2);
    G(r, sK33) = -d(k, 2, 2);
    for (int g = 0; g < 3; ++g) G(r, sL1 + g) = c(k, g);
  }
  return G;
}

namespace {

void check_sym(double x, double y, double tol, const std::string& what,
               std::vector<std::string>& out) {
  if (std::abs(x - y) > tol) out.push_back(what);
}

}  // namespace

ValidationReport validate_material(const ElasticTensor& R, const PiezoTensor& d,
                                   const Permittivity& c) {
  ValidationReport rep;
  const double scale = std::max({R.max_abs(), d.max_abs(),
                                 c.cwiseAbs().maxCoeff(), 1e-30});
  const double tol = 1e-12 * scale;

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          if (i > j || (i == j && k > l)) continue;
          check_sym(R(i, j, k, l), R(j, i, k, l), tol,
                    "R(" + std::to_string(i + 1) + std::to_string(j + 1) +
                        std::to_string(k + 1) + std::to_string(l + 1) +
                        ") != R(" + std::to_string(j + 1) + std::to_string(i + 1) +
                        std::to_string(k + 1) + std::to_string(l + 1) + ")",
                    rep.symmetry_violations);
          check_sym(R(i, j, k, l), R(k, l, i, j), tol,
                    "R(" + std::to_string(i + 1) + std::to_string(j + 1) +
                        std::to_string(k + 1) + std::to_string(l + 1) +
                        ") != R(" + std::to_string(k + 1) + std::to_string(l + 1) +
                        std::to_string(i + 1) + std::to_string(j + 1) + ")",
                    rep.symmetry_violations);
        }
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        check_sym(d(k, i, j), d(k, j, i), tol,
                  "d(" + std::to_string(k + 1) + std::to_string(i + 1) +
                      std::to_string(j + 1) + ") != d(" + std::to_string(k + 1) +
                      std::to_string(j + 1) + std::to_string(i + 1) + ")",
                  rep.symmetry_violations);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      check_sym(c(i, j), c(j, i), tol,
                "c(" + std::to_string(i + 1) + std::to_string(j + 1) +
                    ") != c(" + std::to_string(j + 1) + std::to_string(i + 1) + ")",
                rep.symmetry_violations);

  for (const auto& v : rep.symmetry_violations)
    rep.issues.push_back("symmetry: " + v);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(R.mandel());
  rep.elastic_margin = es.eigenvalues().minCoeff();
  if (!(rep.elastic_margin > 0))
    rep.issues.push_back("elasticity tensor is not coercive (margin " +
                         std::to_string(rep.elastic_margin) + ")");

  const double cmax = c.cwiseAbs().maxCoeff();
  const double dmax = d.max_abs();
  if (cmax <= tol) {
    rep.electric = false;
    rep.permittivity_margin = 0.0;
    if (dmax > tol)
      rep.issues.push_back("piezo coupling present but permittivity is zero");
  } else {
    rep.electric = true;
    Eigen::SelfAdjointEigenSolver<Mat3> ec(c);
    rep.permittivity_margin = ec.eigenvalues().minCoeff();
    if (!(rep.permittivity_margin > 0))
      rep.issues.push_back("permittivity is not positive definite (margin " +
                           std::to_string(rep.permittivity_margin) + ")");
  }

  rep.ok = rep.issues.empty();
  return rep;
}

std::vector<std::string> phase_consistency(const ValidationReport& matrix,
                                           const ValidationReport& inclusion) {
  std::vector<std::string> flags;
  if (!matrix.ok) flags.push_back("matrix phase fails validation");
  if (!inclusion.ok) flags.push_back("inclusion phase fails validation");
  if (matrix.electric)
    flags.push_back("matrix phase must be electrically passive (c = 0, d = 0)");
  if (!inclusion.electric)
    flags.push_back("inclusion phase must have positive definite permittivity");
  return flags;
}

}  // namespace pzp
