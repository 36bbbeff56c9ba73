#include <doctest.h>

#include <cmath>
#include <random>

#include "pzp/errors.hpp"
#include "pzp/fem.hpp"
#include "pzp/plate.hpp"

using namespace pzp;

namespace {

EffectiveTensorsThin elastic_thin() {
  EffectiveTensorsThin E;
  E.RM = Tensor4::isotropic(2.0 / 3.0, 1.0);
  E.RN = Tensor4::isotropic(2.0 / 3.0, 1.0);
  E.cM33 = 1.0;
  E.vol_Y1 = 0.25;
  return E;
}

EffectiveTensorsThin piezo_thin() {
  EffectiveTensorsThin E = elastic_thin();
  Mat2 d;
  d << 0.3, 0.1, 0.1, 0.25;
  E.dM3 = d;
  E.eM3 = -d;
  return E;
}

// comparable-regime tensors a constant-coefficient cell produces from the
// same thin data: membrane x2, flexion x2/3, couplings x2, no cross blocks
EffectiveTensorsComparable scale_to_comparable(const EffectiveTensorsThin& E) {
  EffectiveTensorsComparable C;
  C.RMM = E.RM;
  C.RMM *= 2.0;
  C.RNN = E.RN;
  C.RNN *= 2.0 / 3.0;
  C.dMM3 = 2.0 * E.dM3;
  C.eMM3 = 2.0 * E.eM3;
  C.cMM33 = 2.0 * E.cM33;
  C.vol_Y1 = E.vol_Y1;
  return C;
}

double maxdiff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  REQUIRE(a.size() == b.size());
  return (a - b).cwiseAbs().maxCoeff();
}

double energy_gap(const PlateSolution& s) {
  return std::abs(s.form_value - s.load_value) / std::max(1.0, std::abs(s.load_value));
}

Poly3 affine(double c0, double c1, double c2) {
  return Poly3::parse("1") * c0 + Poly3::parse("x1") * c1 + Poly3::parse("x2") * c2;
}

ReducedLoads lin_comb(const ReducedLoads& A, double a, const ReducedLoads& B, double b) {
  ReducedLoads r;
  for (int i = 0; i < 2; ++i) {
    r.F[i] = A.F[i] * a + B.F[i] * b;
    r.M[i] = A.M[i] * a + B.M[i] * b;
  }
  r.F3 = A.F3 * a + B.F3 * b;
  r.phi_c = A.phi_c * a + B.phi_c * b;
  r.h = A.h * a + B.h * b;
  for (int e = 0; e < 4; ++e) {
    for (int i = 0; i < 2; ++i) {
      r.edge[e].F[i] = A.edge[e].F[i] * a + B.edge[e].F[i] * b;
      r.edge[e].M[i] = A.edge[e].M[i] * a + B.edge[e].M[i] * b;
    }
    r.edge[e].F3 = A.edge[e].F3 * a + B.edge[e].F3 * b;
  }
  return r;
}

ReducedLoads random_loads(std::mt19937& rng, bool with_edges) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto p = [&] { return affine(u(rng), u(rng), u(rng)); };
  ReducedLoads L;
  L.F = {p(), p()};
  L.M = {p(), p()};
  L.F3 = p();
  L.phi_c = p();
  L.h = p();
  if (with_edges)
    for (int e = 0; e < 4; ++e) {
      L.edge[e].F = {p(), p()};
      L.edge[e].M = {p(), p()};
      L.edge[e].F3 = p();
    }
  return L;
}

}  // namespace

TEST_CASE("load reduction takes the right thickness moments") {
  SUBCASE("constant transverse body force") {
    PlateLoads raw;
    raw.f[2] = Poly3::parse("1");
    const ReducedLoads r = reduce_loads(raw);
    CHECK(r.F3.eval2(0.3, 0.7) == doctest::Approx(2.0));
    CHECK(r.F[0].is_zero());
    CHECK(r.F[1].is_zero());
    CHECK(r.M[0].is_zero());
    CHECK(r.M[1].is_zero());
  }
  SUBCASE("odd in-plane body force feeds only the moment") {
    PlateLoads raw;
    raw.f[0] = Poly3::parse("x3");
    const ReducedLoads r = reduce_loads(raw);
    CHECK(r.F[0].is_zero());
    CHECK(r.M[0].eval2(0.1, 0.9) == doctest::Approx(-2.0 / 3.0));
  }
  SUBCASE("x-dependent moment arm") {
    PlateLoads raw;
    raw.f[0] = Poly3::parse("x1*x3");
    const ReducedLoads r = reduce_loads(raw);
    CHECK(r.M[0].eval2(2.0, 0.0) == doctest::Approx(-4.0 / 3.0));
  }
  SUBCASE("face tractions") {
    PlateLoads raw;
    raw.g_top[2] = Poly3::parse("0.7");
    raw.g_top[0] = Poly3::parse("0.5");
    raw.g_bot[0] = Poly3::parse("0.2");
    const ReducedLoads r = reduce_loads(raw);
    CHECK(r.F3.eval2(0, 0) == doctest::Approx(0.7));
    CHECK(r.F[0].eval2(0, 0) == doctest::Approx(0.7));
    CHECK(r.M[0].eval2(0, 0) == doctest::Approx(-0.3));
    CHECK(r.M[1].is_zero());
  }
  SUBCASE("edge density gets the same moments") {
    PlateLoads raw;
    raw.g_edge[2] = Poly3::parse("1.5");
    raw.g_edge[0] = Poly3::parse("x3");
    const ReducedLoads r = reduce_loads(raw);
    for (int e = 0; e < 4; ++e) {
      CHECK(r.edge[e].F3.eval2(0.4, 0.6) == doctest::Approx(3.0));
      CHECK(r.edge[e].F[0].is_zero());
      CHECK(r.edge[e].M[0].eval2(0, 0) == doctest::Approx(-2.0 / 3.0));
    }
  }
  SUBCASE("electric data must live on the midsurface") {
    PlateLoads raw;
    raw.phi_c = Poly3::parse("x3");
    CHECK_THROWS_AS(reduce_loads(raw), ValidationError);
    PlateLoads raw2;
    raw2.h = Poly3::parse("x1*x3");
    CHECK_THROWS_AS(reduce_loads(raw2), ValidationError);
  }
  SUBCASE("mesh-taking overload agrees") {
    PlateLoads raw;
    raw.f[0] = Poly3::parse("x3 + x1");
    raw.g_top[1] = Poly3::parse("x2");
    const PlateMesh mesh(4, 4, 1.0, 1.0, {true, false, false, false});
    const ReducedLoads a = reduce_loads(raw);
    const ReducedLoads b = reduce_loads(raw, mesh);
    CHECK(a.F[0].eval2(0.3, 0.5) == b.F[0].eval2(0.3, 0.5));
    CHECK(a.M[0].eval2(0.3, 0.5) == b.M[0].eval2(0.3, 0.5));
    CHECK(a.F[1].eval2(0.3, 0.5) == b.F[1].eval2(0.3, 0.5));
  }
}

TEST_CASE("clamped square plate reproduces the reference deflection") {
  const EffectiveTensorsThin E = elastic_thin();
  ReducedLoads L;
  L.F3 = Poly3::parse("2");
  const double D = (2.0 / 3.0) * E.RN(0, 0, 0, 0);
  const double wref = 0.0012653191 * 2.0 / D;

  double wc[3];
  int k = 0;
  for (int n : {8, 16, 32}) {
    const PlateMesh mesh(n, n, 1.0, 1.0, {true, true, true, true});
    const KLSpace space(mesh);
    const PlateSolution sol = solve_dirichlet_thin(E, L, space);
    wc[k++] = sol.u3[4 * mesh.node(n / 2, n / 2)];
    CHECK(energy_gap(sol) < 1e-10);
    CHECK(sol.max_deflection == sol.u3[4 * mesh.node(n / 2, n / 2)]);
  }
  CHECK(std::abs(wc[2] - wref) / wref < 2e-6);
  // center-value self-convergence is better than the a-priori O(h^2)
  const double rate = std::log2(std::abs(wc[1] - wc[0]) / std::abs(wc[2] - wc[1]));
  CHECK(rate > 1.8);
}

TEST_CASE("dirichlet thin model decouples membrane and flexion") {
  const EffectiveTensorsThin E = piezo_thin();
  const PlateMesh mesh(8, 8, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);

  SUBCASE("constant potential bends nothing") {
    ReducedLoads L;
    L.phi_c = Poly3::parse("0.4");
    const PlateSolution sol = solve_dirichlet_thin(E, L, space);
    CHECK(sol.u3.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.max_deflection == 0.0);
    CHECK(sol.ubar.cwiseAbs().maxCoeff() > 1e-6);
    // the voltage moment is the imposed potential
    CHECK(sol.L30.cwiseAbs().maxCoeff() == doctest::Approx(0.4));
    CHECK(sol.mean_voltage == doctest::Approx(0.4));
  }
  SUBCASE("potential and transverse load act on separate blocks") {
    ReducedLoads L;
    L.phi_c = affine(0.2, 0.1, 0.0);
    L.F3 = Poly3::parse("1");
    const PlateSolution a = solve_dirichlet_thin(E, L, space);
    L.phi_c = affine(-0.5, 0.0, 0.3);
    const PlateSolution b = solve_dirichlet_thin(E, L, space);
    CHECK(maxdiff(a.u3, b.u3) == 0.0);
    L.F3 = Poly3::parse("-2");
    const PlateSolution c = solve_dirichlet_thin(E, L, space);
    CHECK(maxdiff(b.ubar, c.ubar) == 0.0);
    CHECK(maxdiff(b.u3, c.u3) > 1e-8);
  }
  SUBCASE("nodal voltage moment samples the potential") {
    ReducedLoads L;
    L.phi_c = affine(0.2, 0.0, 0.3);
    const PlateSolution sol = solve_dirichlet_thin(E, L, space);
    const int node = mesh.node(4, 6);
    CHECK(sol.L30[node] == doctest::Approx(L.phi_c.eval2(mesh.x(4), mesh.y(6))));
    CHECK(sol.mean_voltage == doctest::Approx(0.2 + 0.3 * 0.5));
  }
}

TEST_CASE("zero loads give the zero solution in every model") {
  const EffectiveTensorsThin E = piezo_thin();
  const EffectiveTensorsComparable C = scale_to_comparable(E);
  const PlateMesh mesh(6, 6, 1.0, 1.0, {true, false, true, false});
  const KLSpace space(mesh);
  const ReducedLoads L;

  auto all_zero = [](const PlateSolution& s) {
    CHECK(s.ubar.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.u3.cwiseAbs().maxCoeff() == 0.0);
    if (s.L30.size()) CHECK(s.L30.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.max_deflection == 0.0);
    CHECK(s.elastic_energy == 0.0);
    CHECK(s.mean_voltage == 0.0);
  };
  all_zero(solve_dirichlet_thin(E, L, space));
  all_zero(solve_local_mixed_thin(E, 0.5, L, space));
  all_zero(solve_nonlocal_mixed_thin(E, 0.5, 0.0, L, space));
  all_zero(solve_nonlocal_mixed_thin(E, 0.5, 1e-3, L, space));
  all_zero(solve_dirichlet_comparable(C, L, space));
  all_zero(solve_mixed_comparable(C, 0.5, 1e-3, L, space));
}

TEST_CASE("a plate with no clamped edge is rejected") {
  const EffectiveTensorsThin E = elastic_thin();
  const EffectiveTensorsComparable C = scale_to_comparable(E);
  const PlateMesh mesh(4, 4, 1.0, 1.0, {false, false, false, false});
  const KLSpace space(mesh);
  ReducedLoads L;
  L.F3 = Poly3::parse("1");
  CHECK_THROWS_AS(solve_dirichlet_thin(E, L, space), BoundaryConditionError);
  CHECK_THROWS_AS(solve_local_mixed_thin(E, 0.0, L, space), BoundaryConditionError);
  CHECK_THROWS_AS(solve_mixed_comparable(C, 0.0, 0.0, L, space), BoundaryConditionError);
}

TEST_CASE("solvers reject reduced loads with thickness dependence") {
  const EffectiveTensorsThin E = elastic_thin();
  const PlateMesh mesh(4, 4, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  ReducedLoads L;
  L.F[0] = Poly3::parse("x3");
  CHECK_THROWS_AS(solve_dirichlet_thin(E, L, space), ValidationError);
  ReducedLoads L2;
  L2.edge[1].F3 = Poly3::parse("x3^2");
  CHECK_THROWS_AS(solve_dirichlet_thin(E, L2, space), ValidationError);
}

TEST_CASE("membrane displacement converges at second order in L2") {
  const EffectiveTensorsThin E = elastic_thin();
  const double la = 2.0 / 3.0, mu = 1.0;
  // manufactured u1 = x^3, u2 = x^2 y on the unit square, left edge clamped
  ReducedLoads L;
  L.F[0] = Poly3::parse("x1") * (-(16 * la + 28 * mu));
  L.F[1] = Poly3::parse("x2") * (-4 * mu);
  L.edge[1].F[0] = Poly3::parse("1") * (8 * la + 12 * mu);
  L.edge[1].F[1] = Poly3::parse("x2") * (4 * mu);
  L.edge[3].F[0] = Poly3::parse("x1") * (4 * mu);
  L.edge[3].F[1] = Poly3::parse("x1^2") * (8 * la + 4 * mu);
  L.edge[2].F[1] = Poly3::parse("x1^2") * (-(8 * la + 4 * mu));

  double err[4];
  int k = 0;
  for (int n : {4, 8, 16, 32}) {
    const PlateMesh mesh(n, n, 1.0, 1.0, {true, false, false, false});
    const KLSpace space(mesh);
    const PlateSolution sol = solve_dirichlet_thin(E, L, space);
    CHECK(energy_gap(sol) < 1e-10);
    const auto tab = fem::Q1Tables2D::make(mesh.hx(), mesh.hy(), 4);
    double err2 = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int nn[4] = {mesh.node(i, j), mesh.node(i + 1, j), mesh.node(i, j + 1),
                           mesh.node(i + 1, j + 1)};
        for (int q = 0; q < tab.nq; ++q) {
          const double x = mesh.x(i) + tab.xq[q], y = mesh.y(j) + tab.yq[q];
          double u1 = 0, u2 = 0;
          for (int l = 0; l < 4; ++l) {
            u1 += sol.ubar[2 * nn[l]] * tab.N[q][l];
            u2 += sol.ubar[2 * nn[l] + 1] * tab.N[q][l];
          }
          const double e1 = u1 - x * x * x, e2 = u2 - x * x * y;
          err2 += tab.w[q] * (e1 * e1 + e2 * e2);
        }
      }
    err[k++] = std::sqrt(err2);
  }
  for (int s = 1; s < 4; ++s) CHECK(std::log2(err[s - 1] / err[s]) > 1.9);
  CHECK(err[3] < 4e-4);
}

TEST_CASE("deflection converges at second order in the energy norm") {
  const EffectiveTensorsThin E = elastic_thin();
  const double la = 2.0 / 3.0, mu = 1.0;
  // manufactured u3 = x^4, left edge clamped; moments on the free edges
  ReducedLoads L;
  L.F3 = Poly3::parse("1") * (16 * (la + 2 * mu));
  L.edge[1].M[0] = Poly3::parse("1") * (8 * la + 16 * mu);
  L.edge[1].F3 = Poly3::parse("1") * (-(16 * la + 32 * mu));
  L.edge[3].M[1] = Poly3::parse("x1^2") * (8 * la);
  L.edge[2].M[1] = Poly3::parse("x1^2") * (-8 * la);

  double err[4];
  int k = 0;
  for (int n : {4, 8, 16, 32}) {
    const PlateMesh mesh(n, n, 1.0, 1.0, {true, false, false, false});
    const KLSpace space(mesh);
    const PlateSolution sol = solve_dirichlet_thin(E, L, space);
    CHECK(energy_gap(sol) < 1e-10);
    const auto tab = fem::BFSTables::make(mesh.hx(), mesh.hy(), 4);
    double err2 = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int nn[4] = {mesh.node(i, j), mesh.node(i + 1, j), mesh.node(i, j + 1),
                           mesh.node(i + 1, j + 1)};
        for (int q = 0; q < tab.nq; ++q) {
          const double x = mesh.x(i) + tab.xq[q];
          Mat2 he = Mat2::Zero();
          for (int t = 0; t < 16; ++t) {
            const double c = sol.u3[4 * nn[t >> 2] + (t & 3)];
            he(0, 0) += c * tab.Nxx[q][t];
            he(1, 1) += c * tab.Nyy[q][t];
            he(0, 1) += c * tab.Nxy[q][t];
          }
          he(1, 0) = he(0, 1);
          he(0, 0) -= 12 * x * x;
          err2 += tab.w[q] * (2.0 / 3.0) * E.RN.contract(he, he);
        }
      }
    err[k++] = std::sqrt(err2);
  }
  for (int s = 1; s < 4; ++s) CHECK(std::log2(err[s - 1] / err[s]) > 1.95);
  CHECK(err[3] < 1.3e-3);
}

TEST_CASE("pointwise voltage recovery") {
  EffectiveTensorsThin E;
  E.RM = Tensor4::isotropic(1, 1);
  E.RN = Tensor4::isotropic(1, 1);
  E.cM33 = 1.0;
  E.vol_Y1 = 0.25;

  SUBCASE("uncoupled unit source") {
    CHECK(recover_voltage_local(E, 0.0, Mat2::Zero(), 1.0) == 0.25);
  }
  SUBCASE("no source, no strain, no voltage") {
    CHECK(recover_voltage_local(E, 2.0, Mat2::Zero(), 0.0) == 0.0);
  }
  SUBCASE("linearity in strain and source") {
    EffectiveTensorsThin P = piezo_thin();
    Mat2 s;
    s << 0.3, -0.1, -0.1, 0.2;
    const double v = recover_voltage_local(P, 0.5, s, 0.7);
    CHECK(recover_voltage_local(P, 0.5, 2.0 * s, 1.4) == 2.0 * v);
    Mat2 s2;
    s2 << -0.2, 0.05, 0.05, 0.6;
    const double v2 = recover_voltage_local(P, 0.5, s2, -0.3);
    const double vs = recover_voltage_local(P, 0.5, s + s2, 0.4);
    CHECK(vs == doctest::Approx(v + v2).epsilon(1e-13));
  }
  SUBCASE("degenerate circuits are rejected") {
    CHECK_THROWS_AS(recover_voltage_local(E, -1.0, Mat2::Zero(), 1.0),
                    DegenerateCircuitError);
    EffectiveTensorsThin Z = E;
    Z.cM33 = 0.0;
    CHECK_THROWS_AS(recover_voltage_local(Z, 0.0, Mat2::Zero(), 1.0),
                    DegenerateCircuitError);
  }
}

TEST_CASE("local mixed model without coupling is the grounded dirichlet model") {
  const EffectiveTensorsThin E = elastic_thin();
  const PlateMesh mesh(10, 10, 1.0, 1.0, {true, false, false, true});
  const KLSpace space(mesh);
  ReducedLoads L;
  L.F[0] = Poly3::parse("1");
  L.F3 = Poly3::parse("0.5 + x1");
  const PlateSolution mixed = solve_local_mixed_thin(E, 0.7, L, space);
  const PlateSolution dir = solve_dirichlet_thin(E, L, space);
  CHECK(maxdiff(mixed.ubar, dir.ubar) < 1e-14);
  CHECK(maxdiff(mixed.u3, dir.u3) < 1e-14);
}

TEST_CASE("growing admittance grounds the circuit monotonically") {
  const EffectiveTensorsThin E = piezo_thin();
  ReducedLoads L;
  L.F[0] = Poly3::parse("1");
  L.F[1] = Poly3::parse("0.5");
  L.h = affine(0.2, 0.5, 0.3);
  const PlateMesh mesh(16, 16, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);

  // G -> infinity shorts the circuit: the membrane tensor returns to the
  // purely elastic one and the current source dies out
  const EffectiveTensorsThin E0 = elastic_thin();
  ReducedLoads L0 = L;
  L0.h = Poly3{};
  const PlateSolution ref = solve_dirichlet_thin(E0, L0, space);

  double prev_du = 1e300, prev_energy = -1e300;
  for (double G : {1.0, 10.0, 100.0, 1000.0}) {
    const PlateSolution s = solve_local_mixed_thin(E, G, L, space);
    CHECK(energy_gap(s) < 1e-10);
    const double du = maxdiff(s.ubar, ref.ubar);
    CHECK(du < prev_du);
    CHECK(s.elastic_energy > prev_energy);
    CHECK(s.elastic_energy < ref.elastic_energy);
    prev_du = du;
    prev_energy = s.elastic_energy;
  }
  CHECK(prev_du < 1e-4);

  CHECK_THROWS_AS(solve_local_mixed_thin(E, -1.0, L, space), DegenerateCircuitError);
  EffectiveTensorsThin Z = E;
  Z.cM33 = 0.0;
  CHECK_THROWS_AS(solve_local_mixed_thin(Z, 0.0, L, space), DegenerateCircuitError);
}

TEST_CASE("kept voltage at zero gradient penalty matches the eliminated voltage") {
  const EffectiveTensorsThin E = piezo_thin();
  ReducedLoads L;
  L.F[0] = Poly3::parse("1");
  L.F[1] = Poly3::parse("0.5");
  L.h = affine(0.2, 0.5, 0.3);
  const PlateMesh mesh(16, 16, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  const PlateSolution loc = solve_local_mixed_thin(E, 0.5, L, space);
  const PlateSolution nl = solve_nonlocal_mixed_thin(E, 0.5, 0.0, L, space);
  CHECK(maxdiff(nl.ubar, loc.ubar) < 1e-10);
  CHECK(maxdiff(nl.u3, loc.u3) < 1e-10);
  CHECK(maxdiff(nl.L30, loc.L30) < 1e-10);
  CHECK(std::abs(nl.mean_voltage - loc.mean_voltage) < 1e-10);
  CHECK_THROWS_AS(solve_nonlocal_mixed_thin(E, 0.5, -1e-6, L, space),
                  DegenerateCircuitError);
}

TEST_CASE("vanishing gradient penalty approaches the local model monotonically") {
  const EffectiveTensorsThin E = piezo_thin();
  ReducedLoads L;
  L.F[0] = Poly3::parse("1");
  L.F[1] = Poly3::parse("0.5");
  L.h = affine(0.2, 0.5, 0.3);
  const PlateMesh mesh(16, 16, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  const PlateSolution loc = solve_local_mixed_thin(E, 0.5, L, space);

  double prev_du = 1e300, prev_dmean = 1e300;
  for (double G1 : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    const PlateSolution nl = solve_nonlocal_mixed_thin(E, 0.5, G1, L, space);
    const double du = maxdiff(nl.ubar, loc.ubar);
    const double dmean = std::abs(nl.mean_voltage - loc.mean_voltage);
    CHECK(du < prev_du);
    CHECK(dmean < prev_dmean);
    prev_du = du;
    prev_dmean = dmean;
  }
  CHECK(prev_du < 5e-5);
}

TEST_CASE("constant current source gives the constant circuit voltage") {
  // d = e = 0 turns the voltage equation into a scalar reaction(-diffusion)
  // problem whose constant solution both representations hit exactly
  const EffectiveTensorsThin E = elastic_thin();
  ReducedLoads L;
  L.h = Poly3::parse("0.8");
  const PlateMesh mesh(8, 8, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  const double G = 0.5;
  const double Lref = E.vol_Y1 * 0.8 / (E.cM33 + 2 * E.vol_Y1 * G);
  for (double G1 : {1.0, 0.0}) {
    const PlateSolution s = solve_nonlocal_mixed_thin(E, G, G1, L, space);
    CHECK((s.L30.array() - Lref).abs().maxCoeff() < 1e-12);
    CHECK(std::abs(s.mean_voltage - Lref) < 1e-12);
    CHECK(s.ubar.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.u3.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("solutions superpose and satisfy the energy identity") {
  const EffectiveTensorsThin E = piezo_thin();
  const EffectiveTensorsComparable C = scale_to_comparable(E);
  const PlateMesh mesh(8, 8, 1.0, 1.0, {true, false, true, false});
  const KLSpace space(mesh);
  std::mt19937 rng(7);
  const ReducedLoads A = random_loads(rng, true);
  const ReducedLoads B = random_loads(rng, true);
  const double a = 0.7, b = -1.3;
  const ReducedLoads AB = lin_comb(A, a, B, b);

  auto check_super = [&](auto&& solve) {
    const PlateSolution sa = solve(A);
    const PlateSolution sb = solve(B);
    const PlateSolution sab = solve(AB);
    CHECK(energy_gap(sa) < 1e-10);
    CHECK(energy_gap(sb) < 1e-10);
    CHECK(energy_gap(sab) < 1e-10);
    const double scale =
        std::max(1.0, std::max(sab.ubar.cwiseAbs().maxCoeff(), sab.u3.cwiseAbs().maxCoeff()));
    CHECK(maxdiff(sab.ubar, a * sa.ubar + b * sb.ubar) / scale < 1e-10);
    CHECK(maxdiff(sab.u3, a * sa.u3 + b * sb.u3) / scale < 1e-10);
    if (sab.L30.size())
      CHECK(maxdiff(sab.L30, a * sa.L30 + b * sb.L30) / scale < 1e-10);
    CHECK(std::abs(sab.mean_voltage - (a * sa.mean_voltage + b * sb.mean_voltage)) / scale <
          1e-10);
  };
  // the dirichlet models read phi_c, the mixed ones read h
  check_super([&](const ReducedLoads& L) { return solve_dirichlet_thin(E, L, space); });
  check_super(
      [&](const ReducedLoads& L) { return solve_nonlocal_mixed_thin(E, 0.3, 1e-3, L, space); });
  check_super([&](const ReducedLoads& L) { return solve_mixed_comparable(C, 0.3, 0.0, L, space); });
}

TEST_CASE("comparable dirichlet model at constant coefficients is the thin model") {
  const EffectiveTensorsThin E = piezo_thin();
  const EffectiveTensorsComparable C = scale_to_comparable(E);
  ReducedLoads L;
  L.F[0] = Poly3::parse("1");
  L.F[1] = Poly3::parse("0.5");
  L.F3 = Poly3::parse("2");
  L.phi_c = Poly3::parse("0.3");
  const PlateMesh mesh(12, 12, 1.0, 1.0, {true, true, true, true});
  const KLSpace space(mesh);
  const PlateSolution thin = solve_dirichlet_thin(E, L, space);
  const PlateSolution comp = solve_dirichlet_comparable(C, L, space);
  CHECK(maxdiff(comp.ubar, thin.ubar) < 1e-10);
  CHECK(maxdiff(comp.u3, thin.u3) < 1e-10);
  CHECK(maxdiff(comp.L30, thin.L30) == 0.0);
  CHECK(energy_gap(comp) < 1e-10);
}

TEST_CASE("comparable mixed model at constant coefficients matches the thin models") {
  const EffectiveTensorsThin E = piezo_thin();
  const EffectiveTensorsComparable C = scale_to_comparable(E);
  ReducedLoads L;
  L.F[0] = Poly3::parse("1");
  L.F[1] = Poly3::parse("0.5");
  L.F3 = Poly3::parse("2");
  L.h = affine(0.2, 0.5, 0.0);
  const PlateMesh mesh(12, 12, 1.0, 1.0, {true, true, true, true});
  const KLSpace space(mesh);

  SUBCASE("zero gradient penalty against the eliminated thin model") {
    const PlateSolution tloc = solve_local_mixed_thin(E, 0.5, L, space);
    const PlateSolution cmix = solve_mixed_comparable(C, 0.5, 0.0, L, space);
    CHECK(maxdiff(cmix.ubar, tloc.ubar) < 1e-10);
    CHECK(maxdiff(cmix.u3, tloc.u3) < 1e-10);
    CHECK(maxdiff(cmix.L30, tloc.L30) < 1e-10);
    CHECK(std::abs(cmix.mean_voltage - tloc.mean_voltage) < 1e-10);
  }
  SUBCASE("positive gradient penalty against the thin nonlocal model") {
    const PlateSolution tnl = solve_nonlocal_mixed_thin(E, 0.5, 1e-3, L, space);
    const PlateSolution cmix = solve_mixed_comparable(C, 0.5, 1e-3, L, space);
    CHECK(maxdiff(cmix.ubar, tnl.ubar) < 1e-12);
    CHECK(maxdiff(cmix.u3, tnl.u3) < 1e-12);
    CHECK(maxdiff(cmix.L30, tnl.L30) < 1e-12);
  }
  SUBCASE("degenerate circuit is rejected") {
    EffectiveTensorsComparable Z = C;
    Z.cMM33 = 0.0;
    CHECK_THROWS_AS(solve_mixed_comparable(Z, 0.0, 0.0, L, space), DegenerateCircuitError);
    CHECK_THROWS_AS(solve_mixed_comparable(C, -0.5, 0.0, L, space), DegenerateCircuitError);
  }
}

TEST_CASE("uncoupled comparable mixed model leaves the mechanics alone") {
  EffectiveTensorsComparable C = scale_to_comparable(elastic_thin());
  ReducedLoads L;
  L.F[0] = Poly3::parse("0.2");
  L.F3 = Poly3::parse("1");
  L.h = Poly3::parse("0.9");
  const PlateMesh mesh(8, 8, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  const double G = 0.4;
  const PlateSolution mix = solve_mixed_comparable(C, G, 0.0, L, space);
  ReducedLoads L0 = L;
  L0.h = Poly3{};
  const PlateSolution dir = solve_dirichlet_comparable(C, L0, space);
  CHECK(maxdiff(mix.ubar, dir.ubar) < 1e-10);
  CHECK(maxdiff(mix.u3, dir.u3) < 1e-10);
  const double Lref = 2 * C.vol_Y1 * 0.9 / (C.cMM33 + 4 * C.vol_Y1 * G);
  CHECK((mix.L30.array() - Lref).abs().maxCoeff() < 1e-12);
}

TEST_CASE("flexion row coupling choice is observable when the tensors differ") {
  EffectiveTensorsComparable C = scale_to_comparable(piezo_thin());
  Mat2 dn;
  dn << 0.15, 0.05, 0.05, -0.1;
  C.dNM3 = dn;
  C.eMN3 = -dn;
  ReducedLoads L;
  L.phi_c = Poly3::parse("x1");
  L.F3 = Poly3::parse("1");
  const PlateMesh mesh(16, 16, 1.0, 1.0, {true, false, false, false});
  const KLSpace space(mesh);
  const PlateSolution a =
      solve_dirichlet_comparable(C, L, space, DirichletFlexionCoupling::kDMM3);
  const PlateSolution b =
      solve_dirichlet_comparable(C, L, space, DirichletFlexionCoupling::kDNM3);
  CHECK(maxdiff(a.u3, b.u3) > 1e-2);

  // with equal tensors the choice cannot matter
  C.dNM3 = C.dMM3;
  const PlateSolution c =
      solve_dirichlet_comparable(C, L, space, DirichletFlexionCoupling::kDMM3);
  const PlateSolution d =
      solve_dirichlet_comparable(C, L, space, DirichletFlexionCoupling::kDNM3);
  CHECK(maxdiff(c.u3, d.u3) == 0.0);
  CHECK(maxdiff(c.ubar, d.ubar) == 0.0);
}
