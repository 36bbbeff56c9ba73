#pragma once

// Homogenized Kirchhoff-Love plate solvers on the rectangular midsurface
// omega = (0, lx) x (0, ly). The unknowns are the membrane displacement
// (Q1 vector field), the deflection (BFS bicubic), and, in the nonlocal
// circuit models, the zeroth-order voltage moment L30.
//
// Boundary conditions: on the clamped part gamma_D the full Kirchhoff-Love
// constraint holds (ubar = 0, u3 = du3/dn = 0, realized by fixing all four
// BFS dof kinds); the remaining edges are free and carry optional line loads.
// The voltage never sees essential boundary conditions.

#include <Eigen/Dense>
#include <array>

#include "pzp/cell2d.hpp"
#include "pzp/cell3d.hpp"
#include "pzp/mesh.hpp"
#include "pzp/polynomial.hpp"
#include "pzp/spaces.hpp"

namespace pzp {

// Loads on the three-dimensional plate before thickness reduction: body
// force f(x1,x2,x3), surface tractions on the top face x3 = +1 and bottom
// face x3 = -1, a lateral traction applied on every free edge, the imposed
// boundary potential phi_c(x1,x2) of the Dirichlet circuit and the current
// source h(x1,x2) of the mixed circuits. Components are polynomials of
// total degree <= 3; phi_c and h must not depend on x3.
struct PlateLoads {
  std::array<Poly3, 3> f{};
  std::array<Poly3, 3> g_top{};
  std::array<Poly3, 3> g_bot{};
  std::array<Poly3, 3> g_edge{};
  Poly3 phi_c{};
  Poly3 h{};
};

// Line load on one free edge: in-plane force density F, moment density M
// paired with the deflection gradient, and transverse force density F3.
struct EdgeLoad {
  std::array<Poly3, 2> F{};
  std::array<Poly3, 2> M{};
  Poly3 F3{};
};

// Thickness-reduced loads on the midsurface. The weak forms pair F with the
// membrane test field, M with the gradient of the deflection and F3 with the
// deflection itself; edge entries are line densities in the order left,
// right, bottom, top and are applied on free edges only.
struct ReducedLoads {
  std::array<Poly3, 2> F{};
  std::array<Poly3, 2> M{};
  Poly3 F3{};
  std::array<EdgeLoad, 4> edge{};
  Poly3 phi_c{};
  Poly3 h{};
};

// Thickness moments of the raw loads:
//   F_a  = int f_a dx3 + g_a(top) + g_a(bot),        a = 1, 2
//   M_a  = -int x3 f_a dx3 - g_a(top) + g_a(bot)
//   F3   = int f3 dx3 + g3(top) + g3(bot)
// and the same moments of g_edge for the edge densities. Throws
// ValidationError when phi_c or h depends on x3.
ReducedLoads reduce_loads(const PlateLoads& loads);

// The clamped/free edge split decides where edge densities apply; that
// happens at assembly time from the mesh, so the reduction itself does not
// consume the mesh.
inline ReducedLoads reduce_loads(const PlateLoads& loads, const PlateMesh&) {
  return reduce_loads(loads);
}

// Discrete Kirchhoff-Love space bundle on one plate mesh: membrane map with
// gamma_D nodes fixed, clamped BFS space, and the free voltage node map.
class KLSpace {
public:
  explicit KLSpace(const PlateMesh& mesh)
      : mesh_(mesh), membrane_(mesh_, true), flexion_(mesh_), voltage_(mesh_, false) {}

  const PlateMesh& mesh() const { return mesh_; }
  const PlateNodeMap& membrane() const { return membrane_; }
  const PlateBFSSpace& flexion() const { return flexion_; }
  const PlateNodeMap& voltage() const { return voltage_; }

private:
  PlateMesh mesh_;
  PlateNodeMap membrane_;
  PlateBFSSpace flexion_;
  PlateNodeMap voltage_;
};

// Solution fields in full nodal storage (fixed dofs present as zeros):
//   ubar : 2 per node (u1, u2)
//   u3   : 4 per node (v, v_x, v_y, v_xy)
//   L30  : 1 per node; the imposed phi_c in the Dirichlet models
// and scalar summaries. form_value and load_value are the bilinear form and
// the load functional evaluated on the computed solution; they agree to the
// solver tolerance and give the energy identity a(U,U) = l(U).
struct PlateSolution {
  Eigen::VectorXd ubar;
  Eigen::VectorXd u3;
  Eigen::VectorXd L30;
  double max_deflection = 0.0;
  double elastic_energy = 0.0;
  double mean_voltage = 0.0;
  double form_value = 0.0;
  double load_value = 0.0;
};

// Thin regime. The membrane block carries the factor 2 and the flexion
// block 2/3; the two problems decouple and phi_c / h enter the membrane
// problem only. Every solver requires at least one clamped edge
// (BoundaryConditionError otherwise).
PlateSolution solve_dirichlet_thin(const EffectiveTensorsThin& tensors,
                                   const ReducedLoads& loads, const KLSpace& space);

// Local mixed model: the voltage is eliminated pointwise, leaving the
// reduced membrane tensor R_loc and the source -2 d_M3 (c + 2|Y1| G)^{-1}
// |Y1| h. G >= 0; c_M33 + 2 |Y1| G must be positive.
PlateSolution solve_local_mixed_thin(const EffectiveTensorsThin& tensors, double G,
                                     const ReducedLoads& loads, const KLSpace& space);

// Nonlocal mixed model with the voltage kept as an unknown. For G1 > 0 the
// voltage is a conforming Q1 field with the gradient penalty 4 |Y1| G1; for
// G1 = 0 the form has no voltage gradient and the voltage is carried per
// quadrature point, which makes the discrete solution match the local model
// exactly after elimination.
PlateSolution solve_nonlocal_mixed_thin(const EffectiveTensorsThin& tensors, double G,
                                        double G1, const ReducedLoads& loads,
                                        const KLSpace& space);

// Pointwise voltage recovery of the local mixed model:
//   L30 = (|Y1| h - e_M3 : s) / (c_M33 + 2 |Y1| G).
double recover_voltage_local(const EffectiveTensorsThin& tensors, double G,
                             const Mat2& strain, double h_value);

// Which coupling tensor multiplies phi_c in the flexion row of the
// comparable Dirichlet model. The symmetric-looking choice pairs the
// membrane tensor d_MM3 with both test fields; the alternative uses the
// flexion coupling d_NM3 in the flexion row.
enum class DirichletFlexionCoupling { kDMM3, kDNM3 };

// Comparable regime, Dirichlet circuit: fully coupled membrane/flexion
// system with unit prefactors and the cross blocks R_MN, R_NM.
PlateSolution solve_dirichlet_comparable(
    const EffectiveTensorsComparable& tensors, const ReducedLoads& loads,
    const KLSpace& space,
    DirichletFlexionCoupling coupling = DirichletFlexionCoupling::kDMM3);

// Comparable regime, mixed circuit: membrane, voltage and flexion coupled;
// voltage diagonal c_MM33 + 4 |Y1| G, gradient penalty 4 |Y1| G1, source
// 2 |Y1| h. Voltage representation as in solve_nonlocal_mixed_thin.
PlateSolution solve_mixed_comparable(const EffectiveTensorsComparable& tensors,
                                     double G, double G1, const ReducedLoads& loads,
                                     const KLSpace& space);

}  // namespace pzp
