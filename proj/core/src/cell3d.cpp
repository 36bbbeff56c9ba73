#include "pzp/cell3d.hpp"

#include <vector>

#include "pzp/errors.hpp"

namespace pzp {

namespace {

constexpr int kNU = 36;  // 12 nodes x 3 components
constexpr int kNE = 12;
constexpr int kNL = kNU + kNE;

using BMat = Eigen::Matrix<double, 10, kNL>;
using KLoc = Eigen::Matrix<double, kNL, kNL>;
using RLoc = Eigen::Matrix<double, kNL, 1>;

// M1 columns of all local dofs at one quadrature point
BMat bmatrix(const fem::Q1Q2Tables3D& tab, int q) {
  BMat B = BMat::Zero();
  for (int m = 0; m < 12; ++m) {
    const double gx = tab.Nx[q][m], gy = tab.Ny[q][m], gz = tab.Nz[q][m];
    // u1
    B(sK11, 3 * m + 0) = gx;
    B(sK12, 3 * m + 0) = 0.5 * gy;
    B(sK21, 3 * m + 0) = 0.5 * gy;
    B(sK13, 3 * m + 0) = 0.5 * gz;
    // u2
    B(sK22, 3 * m + 1) = gy;
    B(sK12, 3 * m + 1) = 0.5 * gx;
    B(sK21, 3 * m + 1) = 0.5 * gx;
    B(sK23, 3 * m + 1) = 0.5 * gz;
    // u3
    B(sK33, 3 * m + 2) = gz;
    B(sK13, 3 * m + 2) = 0.5 * gx;
    B(sK23, 3 * m + 2) = 0.5 * gy;
    // psi
    B(sL1, kNU + m) = gx;
    B(sL2, kNU + m) = gy;
    B(sL3, kNU + m) = gz;
  }
  return B;
}

struct ElementData {
  KLoc K = KLoc::Zero();
  // loadings with a constant base: columns M11 M22 M12 E3 hold -int B^t R base;
  // the flexion ones are z0 * sM + sZ, assembled per layer
  Eigen::Matrix<double, kNL, 3> sM = Eigen::Matrix<double, kNL, 3>::Zero();
  Eigen::Matrix<double, kNL, 3> sZ = Eigen::Matrix<double, kNL, 3>::Zero();
  RLoc sB = RLoc::Zero();
};

ElementData element_data(const Mat10& GT, const fem::Q1Q2Tables3D& tab) {
  ElementData el;
  for (int q = 0; q < tab.nq; ++q) {
    const BMat B = bmatrix(tab, q);
    const Eigen::Matrix<double, kNL, 10> BtR = B.transpose() * GT;
    el.K += tab.w[q] * (BtR * B);
    for (int k = 0; k < 3; ++k) {
      const Vec10 e = loading_base_3d(k, 0.0);
      el.sM.col(k) += tab.w[q] * (BtR * e);
      el.sZ.col(k) += tab.w[q] * tab.zq[q] * (BtR * e);
    }
    el.sB += tab.w[q] * (BtR * loading_base_3d(6, 0.0));
  }
  return el;
}

void scatter(std::vector<fem::Triplet>& trips, Eigen::MatrixXd& Bg, const ElementData& el,
             const std::array<int, 12>& unodes, const std::array<int, 12>& edofs,
             double z0) {
  int g[kNL];
  for (int m = 0; m < 12; ++m) {
    for (int c = 0; c < 3; ++c) g[3 * m + c] = 3 * unodes[m] + c;
    g[kNU + m] = edofs[m];
  }
  for (int a = 0; a < kNL; ++a) {
    if (g[a] < 0) continue;
    for (int b = 0; b < kNL; ++b) {
      if (g[b] < 0) continue;
      trips.emplace_back(g[a], g[b], el.K(a, b));
    }
    for (int k = 0; k < 3; ++k) {
      Bg(g[a], k) -= el.sM(a, k);
      Bg(g[a], 3 + k) += z0 * el.sM(a, k) + el.sZ(a, k);
    }
    Bg(g[a], 6) -= el.sB(a);
  }
}

}  // namespace

FieldZ::FieldZ(CellMesh3D mesh, const Material& matrix, const Material& inclusion)
    : mesh_(std::move(mesh)),
      space_(mesh_),
      mats_{matrix, inclusion},
      GT_{assemble_global_tensor(matrix), assemble_global_tensor(inclusion)} {
  // Electric unknowns exist wherever the mesh is tagged inclusion, so a
  // singular permittivity there would make the coupled operator singular.
  if (space_.num_edofs() > 0 && !validate_material(inclusion).electric)
    throw DegenerateMaterialError(
        "inclusion phase carries electric unknowns but its permittivity is not "
        "positive definite");
}

Vec10 loading_base_3d(int col, double x3) {
  Vec10 b = Vec10::Zero();
  if (col == 6) {
    b[sL3] = 1.0;
    return b;
  }
  const int pair = col % 3;
  const double s = col < 3 ? 1.0 : -x3;
  switch (pair) {
    case 0: b[sK11] = s; break;
    case 1: b[sK22] = s; break;
    default: b[sK12] = b[sK21] = 0.5 * s; break;
  }
  return b;
}

void assemble_cell3d_system(const FieldZ& field, fem::SpMat& A, Eigen::MatrixXd& B) {
  const CellMesh3D& mesh = field.mesh();
  const CellSpace3D& space = field.space();
  const auto tab = fem::Q1Q2Tables3D::make(mesh.h(), mesh.h(), mesh.hz());
  const ElementData el[2] = {element_data(field.GT(0), tab),
                             element_data(field.GT(1), tab)};

  std::vector<fem::Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.num_elements()) * kNL * kNL);
  B = Eigen::MatrixXd::Zero(space.ndof(), kNumLoadings3D);
  for (int k = 0; k < mesh.nz(); ++k)
    for (int j = 0; j < mesh.n(); ++j)
      for (int i = 0; i < mesh.n(); ++i)
        scatter(trips, B, el[mesh.tag(i, j)], space.element_unodes(i, j, k),
                space.element_edofs(i, j, k), mesh.z0(k));
  A.resize(space.ndof(), space.ndof());
  A.setFromTriplets(trips.begin(), trips.end());
}

Correctors3D solve_cell3d(const FieldZ& field) {
  fem::SpMat A;
  Eigen::MatrixXd B;
  assemble_cell3d_system(field, A, B);
  const Eigen::MatrixXd C = cell3d_mean_constraints(field.mesh(), field.space());
  return Correctors3D{fem::solve_constrained(A, C, B)};
}

Eigen::VectorXd solve_corrector_3d(const FieldZ& field, int loading) {
  fem::SpMat A;
  Eigen::MatrixXd B;
  assemble_cell3d_system(field, A, B);
  const Eigen::MatrixXd C = cell3d_mean_constraints(field.mesh(), field.space());
  return fem::solve_constrained(A, C, B.col(loading));
}

EffectiveTensorsComparable effective_tensors_comparable(const Correctors3D& correctors,
                                                        const FieldZ& field) {
  const CellMesh3D& mesh = field.mesh();
  const CellSpace3D& space = field.space();
  const auto tab = fem::Q1Q2Tables3D::make(mesh.h(), mesh.h(), mesh.hz());

  Mat3 rMM = Mat3::Zero(), rMN = Mat3::Zero(), rNM = Mat3::Zero(), rNN = Mat3::Zero();
  Vec3 dMM = Vec3::Zero(), dNM = Vec3::Zero(), eMM = Vec3::Zero(), eMN = Vec3::Zero();
  double c33 = 0.0;

  for (int k = 0; k < mesh.nz(); ++k) {
    for (int j = 0; j < mesh.n(); ++j) {
      for (int i = 0; i < mesh.n(); ++i) {
        const Mat10& GT = field.at(i, j);
        const auto unodes = space.element_unodes(i, j, k);
        const auto edofs = space.element_edofs(i, j, k);
        Eigen::Matrix<double, kNL, kNumLoadings3D> Ul;
        for (int m = 0; m < 12; ++m) {
          for (int c = 0; c < 3; ++c) Ul.row(3 * m + c) = correctors.U.row(3 * unodes[m] + c);
          if (edofs[m] >= 0)
            Ul.row(kNU + m) = correctors.U.row(edofs[m]);
          else
            Ul.row(kNU + m).setZero();
        }
        for (int q = 0; q < tab.nq; ++q) {
          const double x3 = mesh.z0(k) + tab.zq[q];
          const BMat B = bmatrix(tab, q);
          Eigen::Matrix<double, 10, kNumLoadings3D> W = B * Ul;
          for (int f = 0; f < kNumLoadings3D; ++f) W.col(f) += loading_base_3d(f, x3);
          const Eigen::Matrix<double, 10, kNumLoadings3D> GW = GT * W;
          const double w = tab.w[q];
          for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
              rMM(a, b) += w * W.col(a).dot(GW.col(b));
              rMN(a, b) += w * W.col(a).dot(GW.col(3 + b));
              rNM(a, b) += w * W.col(3 + a).dot(GW.col(b));
              rNN(a, b) += w * W.col(3 + a).dot(GW.col(3 + b));
            }
            dMM[a] += w * W.col(a).dot(GW.col(6));
            eMM[a] += w * W.col(6).dot(GW.col(a));
            dNM[a] += w * W.col(3 + a).dot(GW.col(6));
            eMN[a] += w * W.col(6).dot(GW.col(3 + a));
          }
          c33 += w * W.col(6).dot(GW.col(6));
        }
      }
    }
  }

  const auto pair_index = [](int a, int b) { return a == b ? a : 2; };
  EffectiveTensorsComparable out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int e = 0; e < 2; ++e) {
          const int p = pair_index(a, b), r = pair_index(g, e);
          out.RMM(a, b, g, e) = rMM(p, r);
          out.RMN(a, b, g, e) = rMN(p, r);
          out.RNM(a, b, g, e) = rNM(p, r);
          out.RNN(a, b, g, e) = rNN(p, r);
        }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int p = pair_index(a, b);
      out.dMM3(a, b) = dMM[p];
      out.dNM3(a, b) = dNM[p];
      out.eMM3(a, b) = eMM[p];
      out.eMN3(a, b) = eMN[p];
    }
  out.cMM33 = c33;
  out.vol_Y1 = mesh.vol_Y1();
  return out;
}

EffectiveTensorsComparable homogenize_comparable(const CellMesh3D& mesh,
                                                 const Material& matrix,
                                                 const Material& inclusion) {
  const FieldZ field(mesh, matrix, inclusion);
  return effective_tensors_comparable(solve_cell3d(field), field);
}

}  // namespace pzp
