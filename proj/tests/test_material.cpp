#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "pzp/condense.hpp"
#include "pzp/errors.hpp"
#include "pzp/tensors.hpp"

using namespace pzp;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen(20240817);
  return gen;
}

double runif(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

ElasticTensor random_elastic() {
  // random coercive tensor: random Mandel 6x6 A^T A + I
  Eigen::Matrix<double, 6, 6> A;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) A(i, j) = runif();
  Eigen::Matrix<double, 6, 6> M = A.transpose() * A + Eigen::Matrix<double, 6, 6>::Identity();
  // Mandel -> Voigt stiffness: weights 1 on normal, sqrt2 on shear components
  const double w[6] = {1, 1, 1, std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0)};
  std::array<double, 21> upper{};
  int k = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = a; b < 6; ++b) upper[k++] = M(a, b) / (w[a] * w[b]);
  return ElasticTensor::from_voigt(upper);
}

PiezoTensor random_piezo() {
  std::array<double, 18> rows{};
  for (double& x : rows) x = runif();
  return PiezoTensor::from_rows(rows);
}

Permittivity random_permittivity() {
  Mat3 A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = runif();
  return A.transpose() * A + 0.5 * Mat3::Identity();
}

Vec10 random_mvector() {
  Vec10 m;
  for (int i = 0; i < 10; ++i) m[i] = runif();
  m[sK21] = m[sK12];
  return m;
}

// independent index-loop evaluation of R s:s + c L.L for the packed M
double direct_energy(const ElasticTensor& R, const Permittivity& c, const Vec10& m) {
  Mat3 s;
  s << m[sK11], m[sK12], m[sK13], m[sK12], m[sK22], m[sK23], m[sK13], m[sK23], m[sK33];
  Vec3 L(m[sL1], m[sL2], m[sL3]);
  double e = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) e += s(i, j) * R(i, j, k, l) * s(k, l);
  return e + L.dot(c * L);
}

Mat10 pseudo_symmetry_J() {
  Mat10 J = Mat10::Identity();
  J(sL1, sL1) = J(sL2, sL2) = J(sL3, sL3) = -1.0;
  return J;
}

// dense slice-based elimination of the given slots, used as an independent
// cross-check of the projector-based production path
Mat10 dense_condense(const Mat10& GT, const std::vector<int>& elim) {
  std::vector<int> keep;
  for (int s = 0; s < 10; ++s)
    if (std::find(elim.begin(), elim.end(), s) == elim.end()) keep.push_back(s);
  const int ne = static_cast<int>(elim.size()), nk = static_cast<int>(keep.size());
  Eigen::MatrixXd Aee(ne, ne), Aek(ne, nk);
  for (int a = 0; a < ne; ++a) {
    for (int b = 0; b < ne; ++b) Aee(a, b) = GT(elim[a], elim[b]);
    for (int b = 0; b < nk; ++b) Aek(a, b) = GT(elim[a], keep[b]);
  }
  Eigen::MatrixXd X = -Aee.inverse() * Aek;  // transverse response per kept unit
  Mat10 out = Mat10::Zero();
  for (int a = 0; a < nk; ++a) {
    Vec10 va = Vec10::Zero();
    va[keep[a]] = 1.0;
    for (int e = 0; e < ne; ++e) va[elim[e]] = X(e, a);
    for (int b = 0; b < nk; ++b) {
      Vec10 vb = Vec10::Zero();
      vb[keep[b]] = 1.0;
      for (int e = 0; e < ne; ++e) vb[elim[e]] = X(e, b);
      out(keep[a], keep[b]) = va.dot(GT * vb);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("global tensor layout on the isotropic example") {
  const Material m{ElasticTensor::isotropic(1.0, 1.0), PiezoTensor{}, Mat3::Identity()};
  const Mat10 GT = assemble_global_tensor(m);
  CHECK(GT(sK11, sK11) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(GT(sK13, sK13) == doctest::Approx(4.0).epsilon(1e-14));  // 4 R_1313
  CHECK(GT(sK22, sK11) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(GT(sL1, sL1) == doctest::Approx(1.0).epsilon(1e-14));
  // block diagonal when d = 0
  CHECK(GT.block<7, 3>(0, 7).norm() == 0.0);
  CHECK(GT.block<3, 7>(7, 0).norm() == 0.0);

  const Mat10 Z = assemble_global_tensor(ElasticTensor{}, PiezoTensor{}, Mat3::Zero());
  CHECK(Z.norm() == 0.0);
}

TEST_CASE("quadratic form equals elastic plus dielectric energy") {
  for (int trial = 0; trial < 1000; ++trial) {
    const ElasticTensor R = random_elastic();
    const PiezoTensor d = random_piezo();
    const Permittivity c = random_permittivity();
    const Mat10 GT = assemble_global_tensor(R, d, c);
    const Vec10 m = random_mvector();
    const double lhs = m.dot(GT * m);
    const double rhs = direct_energy(R, c, m);
    const double scale = std::max(std::abs(rhs), 1.0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("pseudo symmetry GT^T = J GT J") {
  const Mat10 GT =
      assemble_global_tensor(random_elastic(), random_piezo(), random_permittivity());
  const Mat10 J = pseudo_symmetry_J();
  CHECK((GT.transpose() - J * GT * J).norm() <= 1e-13 * GT.norm());
}

TEST_CASE("material validation") {
  SUBCASE("isotropic passes with margin 2 mu") {
    const auto rep = validate_material(Material::isotropic_elastic(1.0, 1.0));
    CHECK(rep.ok);
    CHECK_FALSE(rep.electric);
    CHECK(rep.elastic_margin == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("index symmetry violation is reported") {
    ElasticTensor R = ElasticTensor::isotropic(1.0, 1.0);
    R(0, 1, 0, 1) += 0.25;  // breaks R_1212 = R_2112
    const auto rep = validate_material(R, PiezoTensor{}, Mat3::Zero());
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.symmetry_violations.empty());
  }
  SUBCASE("indefinite permittivity fails") {
    Mat3 c = Mat3::Identity();
    c(2, 2) = -1.0;
    const auto rep = validate_material(ElasticTensor::isotropic(1, 1), PiezoTensor{}, c);
    CHECK_FALSE(rep.ok);
    CHECK(rep.permittivity_margin < 0.0);
  }
  SUBCASE("piezo coupling without permittivity fails") {
    std::array<double, 18> rows{};
    rows[14] = 1.0;
    const auto rep =
        validate_material(ElasticTensor::isotropic(1, 1), PiezoTensor::from_rows(rows), Mat3::Zero());
    CHECK_FALSE(rep.ok);
  }
  SUBCASE("phase pairing") {
    const auto passive = validate_material(Material::isotropic_elastic(1, 1));
    const Material active_m{ElasticTensor::isotropic(1, 1), PiezoTensor{}, Mat3::Identity()};
    const auto active = validate_material(active_m);
    CHECK(phase_consistency(passive, active).empty());
    CHECK_FALSE(phase_consistency(active, active).empty());
    CHECK_FALSE(phase_consistency(passive, passive).empty());
  }
}

TEST_CASE("condensation of the isotropic cell") {
  const Material m{ElasticTensor::isotropic(1.0, 1.0), PiezoTensor{}, Mat3::Identity()};
  const Mat10 GT = assemble_global_tensor(m);
  const CondensedTensors ct = condense(GT, 0.0);

  const Tensor4 RN = ct.RN_inplane();
  CHECK(RN(0, 0, 0, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(RN(0, 0, 1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(RN(0, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ct.cM33() == doctest::Approx(1.0).epsilon(1e-12));

  // d = 0: membrane and flexion condensations agree in plane
  CHECK((ct.RM_inplane() - RN).max_abs() <= 1e-13);

  // eliminated rows and columns are exact zeros
  for (int s : {sK13, sK23, sK33, sL3}) {
    CHECK(ct.RN.row(s).norm() == 0.0);
    CHECK(ct.RN.col(s).norm() == 0.0);
  }
  for (int s : {sK13, sK23, sK33}) {
    CHECK(ct.RM.row(s).norm() == 0.0);
    CHECK(ct.RM.col(s).norm() == 0.0);
  }

  SUBCASE("admittance shifts only the electric entry") {
    const CondensedTensors ctg = condense(GT, 2.0);
    CHECK(ctg.cM33() == doctest::Approx(5.0).epsilon(1e-12));  // 1 + 2G
    CHECK((ctg.RM_inplane() - ct.RM_inplane()).max_abs() <= 1e-13);
    double prev = -1.0;
    for (double G : {0.0, 0.5, 1.0, 4.0}) {
      const double c = condense(GT, G).cM33();
      CHECK(c > prev);
      prev = c;
    }
  }
}

TEST_CASE("piezo transverse elimination stiffens the cell") {
  // single coupling entry d_333 = 1, lambda = mu = 1, c = I
  PiezoTensor d;
  d(2, 2, 2) = 1.0;
  const Mat10 GT = assemble_global_tensor(ElasticTensor::isotropic(1, 1), d, Mat3::Identity());
  const CondensedTensors ct = condense(GT, 0.0);
  // flexion: eliminating (K33, L3) against pivot [[3, 1], [-1, 1]]
  CHECK(ct.RN_inplane()(0, 0, 0, 0) == doctest::Approx(3.0 - 1.0 / 4.0).epsilon(1e-12));
  // membrane keeps L3: c_M33 = 1 + d^2/(lambda+2mu)
  CHECK(ct.cM33() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(ct.dM()(0, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  // transverse electric response raises the flexion stiffness above the
  // purely elastic plane-stress value
  CHECK(ct.RN_inplane()(0, 0, 0, 0) > 8.0 / 3.0);
}

TEST_CASE("condensation matches the dense slice oracle") {
  for (int trial = 0; trial < 25; ++trial) {
    const Mat10 GT =
        assemble_global_tensor(random_elastic(), random_piezo(), random_permittivity());
    const CondensedTensors ct = condense(GT, 0.0);
    const Mat10 oracleN = dense_condense(GT, {sK13, sK23, sK33, sL3});
    const Mat10 oracleM = dense_condense(GT, {sK13, sK23, sK33});
    CHECK((ct.RN - oracleN).norm() <= 1e-11 * GT.norm());
    CHECK((ct.RM - oracleM).norm() <= 1e-11 * GT.norm());
  }
}

TEST_CASE("annihilation identities of the elimination maps") {
  const double G = 0.7;
  const Mat10 GT =
      assemble_global_tensor(random_elastic(), random_piezo(), random_permittivity());
  const CondensedTensors ct = condense(GT, G);
  Mat10 P = Mat10::Zero(), P2 = Mat10::Zero(), P1 = Mat10::Zero();
  for (int s : {sK13, sK23, sK33, sL3}) P(s, s) = 1.0;
  for (int s : {sK13, sK23, sK33}) P2(s, s) = 1.0;
  P1(sL3, sL3) = 1.0;
  const Mat10 I = Mat10::Identity();
  // the maps complete kept components, so test against kept columns
  CHECK((P * GT * (I + ct.TN) * (I - P)).norm() <= 1e-11 * GT.norm());
  CHECK((P2 * (GT + 2.0 * G * P1) * (I + ct.TM) * (I - P2)).norm() <= 1e-11 * GT.norm());
}

TEST_CASE("condensation is idempotent") {
  const Mat10 GT =
      assemble_global_tensor(random_elastic(), random_piezo(), random_permittivity());
  const CondensedTensors once = condense(GT, 0.0);
  const CondensedTensors twice = condense(once.RN, 0.0);
  CHECK((twice.RN - once.RN).norm() <= 1e-12 * once.RN.norm());
}

TEST_CASE("passive phase condenses without an electric block") {
  const Mat10 GT = assemble_global_tensor(Material::isotropic_elastic(2.0, 0.5));
  const CondensedTensors ct = condense(GT, 0.0);
  CHECK(ct.cM33() == 0.0);
  CHECK(ct.dM().norm() == 0.0);
  CHECK(ct.RN_inplane()(0, 0, 0, 0) > 0.0);
}

TEST_CASE("condensed energy is the transverse minimum when d = 0") {
  for (int trial = 0; trial < 10; ++trial) {
    const Mat10 GT =
        assemble_global_tensor(random_elastic(), PiezoTensor{}, random_permittivity());
    const CondensedTensors ct = condense(GT, 0.0);
    Vec10 kbar = random_mvector();
    for (int s : {sK13, sK23, sK33, sL3}) kbar[s] = 0.0;
    const double condensed = kbar.dot(ct.RN * kbar);

    // minimizer from the elimination map
    const Vec10 vstar = kbar + ct.TN * kbar;
    CHECK(vstar.dot(GT * vstar) == doctest::Approx(condensed).epsilon(1e-10));

    // any transverse trial has at least this energy
    for (int t = 0; t < 20; ++t) {
      Vec10 v = vstar;
      for (int s : {sK13, sK23, sK33, sL3}) v[s] += runif();
      CHECK(v.dot(GT * v) >= condensed - 1e-10 * std::abs(condensed));
    }
  }
}

TEST_CASE("local reduction of the membrane tensor") {
  SUBCASE("scalar example") {
    Tensor4 R;
    R(0, 0, 0, 0) = 1.0;
    const Mat2 ones = Mat2::Ones();
    const Tensor4 red = local_reduction(R, ones, ones, 1.0, 1.0, 0.25);
    CHECK(red(0, 0, 0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("no coupling, no change") {
    const Tensor4 R = Tensor4::isotropic(1.2, 0.8);
    const Tensor4 red = local_reduction(R, Mat2::Zero(), Mat2::Zero(), 2.0, 0.3, 0.2);
    CHECK((red - R).max_abs() == 0.0);
  }
  SUBCASE("degenerate denominator") {
    CHECK_THROWS_AS(local_reduction(Tensor4::isotropic(1, 1), Mat2::Zero(), Mat2::Zero(),
                                    0.0, 0.0, 0.25),
                    DegenerateCircuitError);
  }
  SUBCASE("coercive symmetric inputs keep the reduction positive definite") {
    for (int trial = 0; trial < 50; ++trial) {
      // random SPD coupled 4x4 in the (Mandel, electric) basis
      Eigen::Matrix4d A;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) A(i, j) = runif();
      const Eigen::Matrix4d S = A.transpose() * A + 0.1 * Eigen::Matrix4d::Identity();
      const Tensor4 R = Tensor4::from_mandel(S.topLeftCorner<3, 3>());
      Mat2 dh;
      const double s2 = std::sqrt(2.0);
      dh << S(0, 3), S(2, 3) / s2, S(2, 3) / s2, S(1, 3);
      const double ch = S(3, 3);
      const Tensor4 red = local_reduction(R, dh, dh.transpose(), ch, 0.0, 0.25);
      const Eigen::Vector3d eig =
          Eigen::SelfAdjointEigenSolver<Mat3>(red.mandel()).eigenvalues();
      CHECK(eig.minCoeff() > 0.0);
    }
  }
}
