#include "criteria.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <iomanip>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pzp/cell2d.hpp"
#include "pzp/cell3d.hpp"
#include "pzp/condense.hpp"
#include "pzp/plate.hpp"

namespace pzp::verify {
namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double now_ms() {
  using clk = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clk::now().time_since_epoch()).count();
}

double rel_gap(double a, double ref) { return std::abs(a - ref) / std::max(1.0, std::abs(ref)); }

Material piezo_iso() {
  PiezoTensor d;
  d(2, 2, 2) = 1.0;
  return Material{ElasticTensor::isotropic(1.0, 1.0), d, Mat3::Identity()};
}

Material scale_material(const Material& m, double t) {
  Material s = m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        s.d(i, j, k) = t * m.d(i, j, k);
        for (int l = 0; l < 3; ++l) s.R(i, j, k, l) = t * m.R(i, j, k, l);
      }
    }
  s.c = t * m.c;
  return s;
}

// Homogeneous thin-plate data used by the plate-level criteria: isotropic
// in-plane tensors, unit permittivity, quarter-cell inclusion.
EffectiveTensorsThin plate_data_elastic() {
  EffectiveTensorsThin E;
  E.RM = Tensor4::isotropic(2.0 / 3.0, 1.0);
  E.RN = Tensor4::isotropic(2.0 / 3.0, 1.0);
  E.cM33 = 1.0;
  E.vol_Y1 = 0.25;
  return E;
}

EffectiveTensorsThin plate_data_coupled() {
  EffectiveTensorsThin E = plate_data_elastic();
  Mat2 d;
  d << 0.3, 0.1, 0.1, 0.25;
  E.dM3 = d;
  E.eM3 = -d;
  return E;
}

Poly3 affine(double c0, double c1, double c2) {
  return Poly3::parse("1") * c0 + Poly3::parse("x1") * c1 + Poly3::parse("x2") * c2;
}

double maxdiff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// random coercive material, same recipe as the unit suite: Mandel A^T A + I
ElasticTensor random_elastic(std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix<double, 6, 6> A;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) A(i, j) = u(gen);
  const Eigen::Matrix<double, 6, 6> M =
      A.transpose() * A + Eigen::Matrix<double, 6, 6>::Identity();
  const double w[6] = {1, 1, 1, std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0)};
  std::array<double, 21> upper{};
  int k = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = a; b < 6; ++b) upper[k++] = M(a, b) / (w[a] * w[b]);
  return ElasticTensor::from_voigt(upper);
}

PiezoTensor random_piezo(std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<double, 18> rows{};
  for (double& x : rows) x = u(gen);
  return PiezoTensor::from_rows(rows);
}

Permittivity random_permittivity(std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat3 A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = u(gen);
  return A.transpose() * A + 0.5 * Mat3::Identity();
}

// 1. Transverse condensation: closed-form entries of the unit isotropic
// phase and agreement with a dense slice-elimination oracle, under 1 ms.
Result criterion_condensation() {
  const Material m = piezo_iso();
  Material plain = m;
  plain.d = PiezoTensor{};
  const Mat10 GT = assemble_global_tensor(plain);
  const CondensedTensors ct = condense(GT, 0.0);

  const Tensor4 RN = ct.RN_inplane();
  double dev_entries = std::abs(RN(0, 0, 0, 0) - 8.0 / 3.0);
  dev_entries = std::max(dev_entries, std::abs(RN(0, 0, 1, 1) - 2.0 / 3.0));
  dev_entries = std::max(dev_entries, std::abs(RN(0, 1, 0, 1) - 1.0));
  dev_entries = std::max(dev_entries, std::abs(ct.cM33() - 1.0));

  const Mat10 oracleN = dense_condense_oracle(GT, {sK13, sK23, sK33, sL3});
  const Mat10 oracleM = dense_condense_oracle(GT, {sK13, sK23, sK33});
  double dev_oracle = (ct.RN - oracleN).cwiseAbs().maxCoeff();
  dev_oracle = std::max(dev_oracle, (ct.RM - oracleM).cwiseAbs().maxCoeff());

  // the coupled phase against the oracle as well, so the piezo blocks are
  // exercised and not just the elastic shortcut
  const Mat10 GTc = assemble_global_tensor(m);
  const CondensedTensors ctc = condense(GTc, 0.0);
  dev_oracle = std::max(
      dev_oracle,
      (ctc.RN - dense_condense_oracle(GTc, {sK13, sK23, sK33, sL3})).cwiseAbs().maxCoeff());
  dev_oracle = std::max(
      dev_oracle,
      (ctc.RM - dense_condense_oracle(GTc, {sK13, sK23, sK33})).cwiseAbs().maxCoeff());

  const int reps = 2000;
  double sink = 0.0;
  const double t0 = now_ms();
  for (int r = 0; r < reps; ++r) sink += condense(GTc, 0.0).cM33();
  const double per_call = (now_ms() - t0) / reps;

  Result res;
  res.pass = dev_entries <= 1e-12 && dev_oracle <= 1e-12 && per_call < 1.0 &&
             std::isfinite(sink);
  res.detail = fmt("entry dev %.1e, oracle dev %.1e, %.4f ms/call", dev_entries,
                   dev_oracle, per_call);
  return res;
}

// 2. Constant coefficients: the cell pipeline returns vanishing correctors
// and pointwise (condensed) effective tensors.
Result criterion_constant_identity() {
  const Material m = piezo_iso();
  const CellMesh2D mesh = CellMesh2D::build(16, {Shape::Disk, 0.25});
  const CondensedFieldY field(mesh, m, m);
  const Correctors2D c = solve_cell2d(field);

  double cn = c.uM.cwiseAbs().maxCoeff();
  cn = std::max(cn, c.uN.cwiseAbs().maxCoeff());
  cn = std::max(cn, c.uM3.cwiseAbs().maxCoeff());

  const EffectiveTensorsThin H = effective_tensors_thin(c, field);
  const CondensedPhase ph = CondensedPhase::from_material(m);
  double dev = (H.RM.mandel() - ph.RM.mandel()).cwiseAbs().maxCoeff();
  dev = std::max(dev, (H.RN.mandel() - ph.RN.mandel()).cwiseAbs().maxCoeff());
  dev = std::max(dev, (H.dM3 - ph.dM).cwiseAbs().maxCoeff());
  dev = std::max(dev, (H.eM3 + ph.dM).cwiseAbs().maxCoeff());
  dev = std::max(dev, std::abs(H.cM33 - ph.cM33));

  Result res;
  res.pass = cn <= 1e-10 && dev <= 1e-10;
  res.detail = fmt("corrector norm %.1e, tensor dev %.1e", cn, dev);
  return res;
}

// 3. Mesh-aligned shear laminate: harmonic-mean effective shear 1.6 and the
// arithmetic (Voigt) bound 2.5.
Result criterion_laminate() {
  const CellMesh2D mesh = CellMesh2D::build(64, {Shape::Laminate, 0.5});
  const EffectiveTensorsThin H = homogenize_thin(
      mesh, Material::isotropic_elastic(0.0, 1.0), Material::isotropic_elastic(0.0, 4.0));
  const double shear = H.RM(0, 1, 0, 1);
  Result res;
  res.pass = std::abs(shear - 1.6) <= 1e-6 && shear <= 2.5 + 1e-12;
  res.detail = fmt("shear %.12f, harmonic gap %.1e, Voigt bound 2.5", shear,
                   std::abs(shear - 1.6));
  return res;
}

// 4. Arithmetic/harmonic sandwich on random pixel microstructures with
// proportional phases, where both bounds hold entrywise: the discrete energy
// minimum is below the zero-corrector (Voigt) energy and above the exact
// minimum, which the harmonic mean bounds from below.
Result criterion_bounds() {
  std::mt19937 gen(424242);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> ul(0.2, 2.0);
  std::uniform_real_distribution<double> um(0.5, 2.0);
  std::uniform_real_distribution<double> ut(0.125, 8.0);

  Mat2 E[3];
  E[0] << 1, 0, 0, 0;
  E[1] << 0, 0, 0, 1;
  E[2] << 0, 0.5, 0.5, 0;

  double min_margin = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint8_t> tags(64);
    for (auto& t : tags) t = static_cast<std::uint8_t>(bit(gen));
    tags[0] = 0;
    tags[63] = 1;

    const double lambda0 = ul(gen), mu0 = um(gen), t = ut(gen);
    const Material m0 = Material::isotropic_elastic(lambda0, mu0);
    const Material m1 = Material::isotropic_elastic(t * lambda0, t * mu0);

    const CellMesh2D mesh = CellMesh2D::from_tags(8, tags);
    const double th1 = mesh.vol_Y1();
    const EffectiveTensorsThin H = homogenize_thin(mesh, m0, m1);
    const Tensor4 R0 = CondensedPhase::from_material(m0).RM;
    const Tensor4 R1 = CondensedPhase::from_material(m1).RM;

    for (const Mat2& e : E) {
      const double v = H.RM.contract(e, e);
      const double a0 = R0.contract(e, e);
      const double a1 = R1.contract(e, e);
      const double harm = 1.0 / ((1.0 - th1) / a0 + th1 / a1);
      const double arith = (1.0 - th1) * a0 + th1 * a1;
      const double scale = std::max(1.0, arith);
      min_margin = std::min(min_margin, (v - harm) / scale);
      min_margin = std::min(min_margin, (arith - v) / scale);
    }
  }

  Result res;
  res.pass = min_margin >= -1e-8;
  res.detail = fmt("60 entries over 20 microstructures, smallest margin %+.2e", min_margin);
  return res;
}

// 5. Regime consistency at constant coefficients: the coupled cell on the
// extruded mesh reproduces the thin tensors with factors 2 and 2/3 and no
// cross blocks, within the 60 s budget. Constant coefficients means the
// active phase fills the cell, so both regimes carry the electric response
// on all of Y.
Result criterion_regimes() {
  const double t0 = now_ms();
  const Material m = piezo_iso();
  const std::vector<std::uint8_t> ones(64, 1);
  const EffectiveTensorsComparable C =
      homogenize_comparable(CellMesh3D::from_tags(8, 8, ones), m, m);
  const EffectiveTensorsThin T = homogenize_thin(CellMesh2D::from_tags(8, ones), m, m);

  const double sM = std::max(1.0, T.RM.max_abs());
  const double sN = std::max(1.0, T.RN.max_abs());
  double dev = (C.RMM.mandel() - 2.0 * T.RM.mandel()).cwiseAbs().maxCoeff() / sM;
  dev = std::max(dev,
                 (C.RNN.mandel() - (2.0 / 3.0) * T.RN.mandel()).cwiseAbs().maxCoeff() / sN);
  dev = std::max(dev, (C.dMM3 - 2.0 * T.dM3).cwiseAbs().maxCoeff());
  dev = std::max(dev, (C.eMM3 - 2.0 * T.eM3).cwiseAbs().maxCoeff());
  dev = std::max(dev, std::abs(C.cMM33 - 2.0 * T.cM33));
  const double cross =
      std::max({C.RMN.max_abs(), C.RNM.max_abs(), C.dNM3.cwiseAbs().maxCoeff(),
                C.eMN3.cwiseAbs().maxCoeff()});
  const double secs = (now_ms() - t0) / 1e3;

  Result res;
  res.pass = dev <= 1e-8 && cross <= 1e-8 && secs < 60.0;
  res.detail = fmt("factor-2 and 2/3 dev %.1e, cross blocks %.1e, %.1f s", dev, cross, secs);
  return res;
}

// 6. Clamped square plate under uniform transverse load against the beam
// eigenfunction series; self-convergence rate over three mesh levels.
Result criterion_clamped_plate() {
  // F3 = 2 after thickness reduction; isotropic bending stiffness
  // (2/3)(lambda + 2 mu) = 16/9 for the unit data set.
  const double wser = clamped_plate_series_coefficient(13) * 2.0 / (16.0 / 9.0);

  const EffectiveTensorsThin E = plate_data_elastic();
  PlateLoads raw;
  raw.f[2] = Poly3::parse("1");
  const ReducedLoads L = reduce_loads(raw);

  double w[3] = {0, 0, 0};
  const int levels[3] = {16, 32, 64};
  for (int k = 0; k < 3; ++k) {
    const PlateMesh mesh(levels[k], levels[k], 1.0, 1.0, {true, true, true, true});
    const KLSpace space(mesh);
    w[k] = solve_dirichlet_thin(E, L, space).max_deflection;
  }
  const double err = std::abs(w[2] - wser) / wser;
  const double rate = std::log2(std::abs(w[0] - w[1]) / std::abs(w[1] - w[2]));

  Result res;
  res.pass = err < 1e-2 && rate >= 1.8;
  res.detail = fmt("w64 %.10e vs series %.10e (gap %.1e), rate %.2f", w[2], wser, err, rate);
  return res;
}

// 7. The eliminated-voltage model equals the kept-voltage model at zero
// gradient admittance, and the kept model approaches it monotonically as the
// gradient admittance vanishes.
Result criterion_circuit_equivalence() {
  const EffectiveTensorsThin E = plate_data_coupled();
  ReducedLoads L;
  L.F[0] = Poly3::parse("1");
  L.F[1] = Poly3::parse("0.5");
  L.h = affine(0.2, 0.5, 0.3);
  const PlateMesh mesh(16, 16, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  const double G = 0.5;

  const PlateSolution loc = solve_local_mixed_thin(E, G, L, space);
  const PlateSolution nl0 = solve_nonlocal_mixed_thin(E, G, 0.0, L, space);
  const double deq = std::max({maxdiff(nl0.ubar, loc.ubar), maxdiff(nl0.u3, loc.u3),
                               maxdiff(nl0.L30, loc.L30)});

  bool monotone = true;
  double prev_du = 1e300, prev_dm = 1e300, du = 0.0;
  for (double G1 : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    const PlateSolution nl = solve_nonlocal_mixed_thin(E, G, G1, L, space);
    du = maxdiff(nl.ubar, loc.ubar);
    const double dm = std::abs(nl.mean_voltage - loc.mean_voltage);
    monotone = monotone && du < prev_du && dm < prev_dm;
    prev_du = du;
    prev_dm = dm;
  }

  Result res;
  res.pass = deq <= 1e-8 && monotone && du < 1e-4;
  res.detail = fmt("gap at G1=0 %.1e, ladder %s, du at G1=1e-8 %.1e", deq,
                   monotone ? "monotone" : "NOT monotone", du);
  return res;
}

// 8. Voltage recovery: the pointwise formula on an exactly representable
// example and random samples, and the constant-source circuit solved by both
// voltage representations.
Result criterion_voltage_recovery() {
  // dyadic data: L30 = (0.25*2 - 0.25) / (0.75 + 2*0.25*0.5) = 0.25 exactly
  EffectiveTensorsThin Ex = plate_data_elastic();
  Ex.cM33 = 0.75;
  Ex.eM3 << 0.5, 0.0, 0.0, 0.5;
  Mat2 s;
  s << 0.25, 0.0, 0.0, 0.25;
  const double dev_example = std::abs(recover_voltage_local(Ex, 0.5, s, 2.0) - 0.25);

  std::mt19937 gen(1234);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double dev_rand = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    EffectiveTensorsThin T = plate_data_elastic();
    T.cM33 = 0.5 + std::abs(u(gen));
    T.vol_Y1 = 0.1 + 0.4 * std::abs(u(gen));
    Mat2 e, st;
    e << u(gen), u(gen), u(gen), u(gen);
    st << u(gen), u(gen), u(gen), u(gen);
    T.eM3 = e;
    T.dM3 = -e;
    const double G = std::abs(u(gen));
    const double h = u(gen);
    const long double num =
        static_cast<long double>(T.vol_Y1) * h -
        (static_cast<long double>(e(0, 0)) * st(0, 0) + static_cast<long double>(e(0, 1)) * st(0, 1) +
         static_cast<long double>(e(1, 0)) * st(1, 0) + static_cast<long double>(e(1, 1)) * st(1, 1));
    const long double den = static_cast<long double>(T.cM33) + 2.0L * T.vol_Y1 * G;
    const double ref = static_cast<double>(num / den);
    dev_rand = std::max(dev_rand, rel_gap(recover_voltage_local(T, G, st, h), ref));
  }

  // decoupled constant source: every representation returns the constant
  const EffectiveTensorsThin E = plate_data_elastic();
  ReducedLoads L;
  L.h = Poly3::parse("0.8");
  const PlateMesh mesh(8, 8, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  const double G = 0.7;
  const double Lref = E.vol_Y1 * 0.8 / (E.cM33 + 2.0 * E.vol_Y1 * G);
  double dev_solver = 0.0;
  for (double G1 : {0.0, 0.6}) {
    const PlateSolution sol = solve_nonlocal_mixed_thin(E, G, G1, L, space);
    dev_solver = std::max(dev_solver, (sol.L30.array() - Lref).abs().maxCoeff());
  }
  const PlateSolution locs = solve_local_mixed_thin(E, G, L, space);
  dev_solver = std::max(dev_solver, (locs.L30.array() - Lref).abs().maxCoeff());

  Result res;
  res.pass = dev_example == 0.0 && dev_rand <= 1e-12 && dev_solver <= 1e-10;
  res.detail = fmt("example dev %.1e, random dev %.1e, constant source dev %.1e",
                   dev_example, dev_rand, dev_solver);
  return res;
}

// 9. The quadratic form of the assembled global tensor is the elastic plus
// dielectric energy: the coupling blocks cancel for every argument.
Result criterion_energy_form() {
  std::mt19937 gen(20240817);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ElasticTensor R = random_elastic(gen);
    const Permittivity c = random_permittivity(gen);
    const Mat10 GT = assemble_global_tensor(R, random_piezo(gen), c);
    Vec10 m;
    for (int i = 0; i < 10; ++i) m[i] = u(gen);
    m[sK21] = m[sK12];

    Mat3 st;
    st << m[sK11], m[sK12], m[sK13], m[sK12], m[sK22], m[sK23], m[sK13], m[sK23], m[sK33];
    const Vec3 Lv(m[sL1], m[sL2], m[sL3]);
    double direct = Lv.dot(c * Lv);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) direct += st(i, j) * R(i, j, k, l) * st(k, l);

    worst = std::max(worst, rel_gap(m.dot(GT * m), direct));
  }
  Result res;
  res.pass = worst <= 1e-12;
  res.detail = fmt("1000 samples, worst relative gap %.1e", worst);
  return res;
}

// 10. Plate solutions are linear in the loads, and the homogenization map is
// homogeneous of degree 1 in the constitutive tensors with unchanged
// correctors (checked at t = 3 on a two-phase cell).
Result criterion_superposition() {
  const EffectiveTensorsThin E = plate_data_coupled();
  const PlateMesh mesh(12, 12, 1.0, 1.0, {true, false, true, false});
  const KLSpace space(mesh);

  ReducedLoads A, B;
  A.F[0] = affine(0.3, -0.2, 0.1);
  A.F[1] = affine(-0.1, 0.4, 0.0);
  A.F3 = affine(1.0, 0.4, -0.3);
  A.M[0] = affine(0.2, 0.0, -0.1);
  A.h = affine(0.1, 0.2, -0.1);
  B.F[0] = affine(-0.5, 0.1, 0.3);
  B.F[1] = affine(0.2, -0.3, 0.2);
  B.F3 = affine(-0.4, 0.1, 0.5);
  B.M[1] = affine(0.0, 0.3, 0.1);
  B.h = affine(-0.2, 0.1, 0.4);
  const double a = 0.7, b = -1.3;
  ReducedLoads AB;
  for (int i = 0; i < 2; ++i) {
    AB.F[i] = A.F[i] * a + B.F[i] * b;
    AB.M[i] = A.M[i] * a + B.M[i] * b;
  }
  AB.F3 = A.F3 * a + B.F3 * b;
  AB.h = A.h * a + B.h * b;

  const double G = 0.5, G1 = 1e-3;
  const PlateSolution sA = solve_nonlocal_mixed_thin(E, G, G1, A, space);
  const PlateSolution sB = solve_nonlocal_mixed_thin(E, G, G1, B, space);
  const PlateSolution sAB = solve_nonlocal_mixed_thin(E, G, G1, AB, space);
  double dev_lin = maxdiff(sAB.ubar, a * sA.ubar + b * sB.ubar);
  dev_lin = std::max(dev_lin, maxdiff(sAB.u3, a * sA.u3 + b * sB.u3));
  dev_lin = std::max(dev_lin, maxdiff(sAB.L30, a * sA.L30 + b * sB.L30));
  const double scale_lin =
      std::max({1.0, sAB.ubar.cwiseAbs().maxCoeff(), sAB.u3.cwiseAbs().maxCoeff()});

  // degree-1 homogeneity: scaling both phases by t scales every effective
  // tensor by t and leaves the correctors untouched
  Material m0 = piezo_iso();
  PiezoTensor d1;
  d1(2, 0, 0) = 0.5;
  d1(2, 2, 2) = -0.3;
  const Material m1{ElasticTensor::isotropic(2.0, 0.5), d1, 2.0 * Mat3::Identity()};
  const CellMesh2D cmesh = CellMesh2D::build(8, {Shape::Disk, 0.25});
  const double t = 3.0;

  const CondensedFieldY f1(cmesh, m0, m1);
  const CondensedFieldY ft(cmesh, scale_material(m0, t), scale_material(m1, t));
  const Correctors2D c1 = solve_cell2d(f1);
  const Correctors2D ct = solve_cell2d(ft);
  const EffectiveTensorsThin H1 = effective_tensors_thin(c1, f1);
  const EffectiveTensorsThin Ht = effective_tensors_thin(ct, ft);

  double drift = (ct.uM - c1.uM).cwiseAbs().maxCoeff();
  drift = std::max(drift, (ct.uN - c1.uN).cwiseAbs().maxCoeff());
  drift = std::max(drift, (ct.uM3 - c1.uM3).cwiseAbs().maxCoeff());

  double dev_hom = (Ht.RM.mandel() - t * H1.RM.mandel()).cwiseAbs().maxCoeff() /
                   std::max(1.0, t * H1.RM.max_abs());
  dev_hom = std::max(dev_hom, (Ht.RN.mandel() - t * H1.RN.mandel()).cwiseAbs().maxCoeff() /
                                  std::max(1.0, t * H1.RN.max_abs()));
  dev_hom = std::max(dev_hom, (Ht.dM3 - t * H1.dM3).cwiseAbs().maxCoeff());
  dev_hom = std::max(dev_hom, (Ht.eM3 - t * H1.eM3).cwiseAbs().maxCoeff());
  dev_hom = std::max(dev_hom, std::abs(Ht.cM33 - t * H1.cM33));

  Result res;
  res.pass = dev_lin / scale_lin <= 1e-10 && dev_hom <= 1e-10 && drift <= 1e-10;
  res.detail = fmt("linearity %.1e, homogeneity at t=3 %.1e, corrector drift %.1e",
                   dev_lin / scale_lin, dev_hom, drift);
  return res;
}

}  // namespace

bool run_all_criteria(std::ostream& out) {
  struct Entry {
    const char* name;
    Result (*fn)();
  };
  const Entry entries[] = {
      {"transverse condensation", criterion_condensation},
      {"constant-coefficient identity", criterion_constant_identity},
      {"laminate shear oracle", criterion_laminate},
      {"arithmetic/harmonic sandwich", criterion_bounds},
      {"regime consistency", criterion_regimes},
      {"clamped plate benchmark", criterion_clamped_plate},
      {"circuit model equivalence", criterion_circuit_equivalence},
      {"voltage recovery", criterion_voltage_recovery},
      {"energy-form identity", criterion_energy_form},
      {"superposition and homogeneity", criterion_superposition},
  };

  bool all = true;
  int idx = 0;
  for (const Entry& e : entries) {
    const double t0 = now_ms();
    const Result r = e.fn();
    const double ms = now_ms() - t0;
    all = all && r.pass;
    out << "[" << std::setw(2) << ++idx << "] " << (r.pass ? "pass" : "FAIL") << "  "
        << std::left << std::setw(32) << e.name << std::right << " " << r.detail << "  ["
        << fmt("%.0f ms", ms) << "]\n";
  }
  out << (all ? "acceptance: 10/10 criteria passed" : "acceptance: FAILED") << "\n";
  return all;
}

}  // namespace pzp::verify
