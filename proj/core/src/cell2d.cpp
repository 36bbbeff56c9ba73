#include "pzp/cell2d.hpp"

#include <vector>

#include "pzp/errors.hpp"
#include "pzp/fem.hpp"
#include "pzp/spaces.hpp"

namespace pzp {

namespace {

// S(phi e_c) for one scalar shape function with physical gradient (gx, gy)
Mat2 strain_basis(double gx, double gy, int c) {
  Mat2 s;
  if (c == 0)
    s << gx, 0.5 * gy, 0.5 * gy, 0.0;
  else
    s << 0.0, 0.5 * gx, 0.5 * gx, gy;
  return s;
}

struct MembraneElement {
  Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 3> bE = Eigen::Matrix<double, 8, 3>::Zero();
  Eigen::Matrix<double, 8, 1> bd = Eigen::Matrix<double, 8, 1>::Zero();
};

// One uniform element per phase covers the whole mesh.
MembraneElement membrane_element(const CondensedPhase& ph, const fem::Q1Tables2D& tab) {
  MembraneElement el;
  for (int q = 0; q < tab.nq; ++q) {
    Mat2 S[8];
    for (int l = 0; l < 4; ++l)
      for (int c = 0; c < 2; ++c)
        S[2 * l + c] = strain_basis(tab.Nx[q][l], tab.Ny[q][l], c);
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b)
        el.K(a, b) += tab.w[q] * ph.RM.contract(S[a], S[b]);
      for (int k = 0; k < kNumLoadings; ++k)
        el.bE(a, k) -= tab.w[q] * ph.RM.contract(S[a], unit_loading(k));
      el.bd(a) -= tab.w[q] * ph.dM.cwiseProduct(S[a]).sum();
    }
  }
  return el;
}

struct FlexionElement {
  Eigen::Matrix<double, 16, 16> K = Eigen::Matrix<double, 16, 16>::Zero();
  Eigen::Matrix<double, 16, 3> bE = Eigen::Matrix<double, 16, 3>::Zero();
};

FlexionElement flexion_element(const CondensedPhase& ph, const fem::BFSTables& tab) {
  FlexionElement el;
  for (int q = 0; q < tab.nq; ++q) {
    Mat2 H[16];
    for (int L = 0; L < 16; ++L) {
      H[L] << tab.Nxx[q][L], tab.Nxy[q][L], tab.Nxy[q][L], tab.Nyy[q][L];
    }
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b)
        el.K(a, b) += tab.w[q] * ph.RN.contract(H[a], H[b]);
      for (int k = 0; k < kNumLoadings; ++k)
        el.bE(a, k) -= tab.w[q] * ph.RN.contract(H[a], unit_loading(k));
    }
  }
  return el;
}

void check_coercive(const CondensedPhase& ph, const char* name) {
  const auto eM = Eigen::SelfAdjointEigenSolver<Mat3>(ph.RM.mandel()).eigenvalues();
  const auto eN = Eigen::SelfAdjointEigenSolver<Mat3>(ph.RN.mandel()).eigenvalues();
  if (eM.minCoeff() <= 0.0 || eN.minCoeff() <= 0.0)
    throw DegenerateMaterialError(std::string("condensed in-plane tensors of the ") + name +
                                  " phase are not positive definite");
}

// membrane stiffness and all four right-hand sides (3 strain loadings + d_M)
void assemble_membrane(const CondensedFieldY& field, fem::SpMat& A, Eigen::MatrixXd& B) {
  const CellMesh2D& mesh = field.mesh();
  const PeriodicQ1Space space(mesh);
  const auto tab = fem::Q1Tables2D::make(mesh.h(), mesh.h());
  const MembraneElement el[2] = {membrane_element(field.phase(0), tab),
                                 membrane_element(field.phase(1), tab)};
  const int ndof = 2 * space.ndof();
  std::vector<fem::Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.num_elements()) * 64);
  B = Eigen::MatrixXd::Zero(ndof, 4);
  for (int j = 0; j < mesh.n(); ++j) {
    for (int i = 0; i < mesh.n(); ++i) {
      const MembraneElement& e = el[mesh.tag(i, j)];
      const auto nodes = space.element_nodes(i, j);
      int g[8];
      for (int l = 0; l < 4; ++l)
        for (int c = 0; c < 2; ++c) g[2 * l + c] = 2 * nodes[l] + c;
      for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) trips.emplace_back(g[a], g[b], e.K(a, b));
        B.row(g[a]).head<3>() += e.bE.row(a);
        B(g[a], 3) += e.bd(a);
      }
    }
  }
  A.resize(ndof, ndof);
  A.setFromTriplets(trips.begin(), trips.end());
}

void assemble_flexion(const CondensedFieldY& field, fem::SpMat& A, Eigen::MatrixXd& B) {
  const CellMesh2D& mesh = field.mesh();
  const PeriodicBFSSpace space(mesh);
  const auto tab = fem::BFSTables::make(mesh.h(), mesh.h());
  const FlexionElement el[2] = {flexion_element(field.phase(0), tab),
                                flexion_element(field.phase(1), tab)};
  std::vector<fem::Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.num_elements()) * 256);
  B = Eigen::MatrixXd::Zero(space.ndof(), 3);
  for (int j = 0; j < mesh.n(); ++j) {
    for (int i = 0; i < mesh.n(); ++i) {
      const FlexionElement& e = el[mesh.tag(i, j)];
      const auto dofs = space.element_dofs(i, j);
      for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) trips.emplace_back(dofs[a], dofs[b], e.K(a, b));
        B.row(dofs[a]) += e.bE.row(a);
      }
    }
  }
  A.resize(space.ndof(), space.ndof());
  A.setFromTriplets(trips.begin(), trips.end());
}

Eigen::MatrixXd solve_membrane_block(const CondensedFieldY& field) {
  fem::SpMat A;
  Eigen::MatrixXd B;
  assemble_membrane(field, A, B);
  const Eigen::MatrixXd C = cell2d_mean_constraints_q1(field.mesh(), 2);
  return fem::solve_constrained(A, C, B);
}

}  // namespace

CondensedPhase CondensedPhase::from_material(const Material& m) {
  const CondensedTensors ct = condense(assemble_global_tensor(m), 0.0);
  return CondensedPhase{ct.RM_inplane(), ct.RN_inplane(), ct.dM(), ct.cM33()};
}

CondensedFieldY::CondensedFieldY(CellMesh2D mesh, const Material& matrix,
                                 const Material& inclusion)
    : CondensedFieldY(std::move(mesh), CondensedPhase::from_material(matrix),
                      CondensedPhase::from_material(inclusion)) {}

CondensedFieldY::CondensedFieldY(CellMesh2D mesh, CondensedPhase matrix,
                                 CondensedPhase inclusion)
    : mesh_(std::move(mesh)), phases_{std::move(matrix), std::move(inclusion)} {
  check_coercive(phases_[0], "matrix");
  check_coercive(phases_[1], "inclusion");
}

Mat2 unit_loading(int col) {
  Mat2 e = Mat2::Zero();
  switch (col) {
    case 0: e(0, 0) = 1.0; break;
    case 1: e(1, 1) = 1.0; break;
    default: e(0, 1) = e(1, 0) = 0.5; break;
  }
  return e;
}

Eigen::MatrixXd solve_membrane_correctors(const CondensedFieldY& field) {
  return solve_membrane_block(field).leftCols<3>();
}

Eigen::VectorXd solve_piezo_corrector(const CondensedFieldY& field) {
  return solve_membrane_block(field).col(3);
}

Eigen::MatrixXd solve_flexion_correctors(const CondensedFieldY& field) {
  fem::SpMat A;
  Eigen::MatrixXd B;
  assemble_flexion(field, A, B);
  const Eigen::VectorXd w = cell2d_mean_constraint_bfs(field.mesh());
  return fem::solve_constrained(A, w, B);
}

Correctors2D solve_cell2d(const CondensedFieldY& field) {
  Correctors2D c;
  const Eigen::MatrixXd block = solve_membrane_block(field);
  c.uM = block.leftCols<3>();
  c.uM3 = block.col(3);
  c.uN = solve_flexion_correctors(field);
  return c;
}

EffectiveTensorsThin effective_tensors_thin(const Correctors2D& correctors,
                                            const CondensedFieldY& field) {
  const CellMesh2D& mesh = field.mesh();
  const PeriodicQ1Space q1(mesh);
  const PeriodicBFSSpace bfs(mesh);
  const auto tabM = fem::Q1Tables2D::make(mesh.h(), mesh.h());
  const auto tabN = fem::BFSTables::make(mesh.h(), mesh.h());

  Mat3 rm = Mat3::Zero(), rn = Mat3::Zero();
  Vec3 dv = Vec3::Zero(), ev = Vec3::Zero();
  double c33 = 0.0;

  for (int j = 0; j < mesh.n(); ++j) {
    for (int i = 0; i < mesh.n(); ++i) {
      const CondensedPhase& ph = field.at(i, j);
      const auto nodes = q1.element_nodes(i, j);
      const auto bdofs = bfs.element_dofs(i, j);

      for (int q = 0; q < tabM.nq; ++q) {
        Mat2 X[3], S3 = Mat2::Zero();
        for (int k = 0; k < 3; ++k) X[k] = unit_loading(k);
        for (int l = 0; l < 4; ++l) {
          for (int c = 0; c < 2; ++c) {
            const Mat2 S = strain_basis(tabM.Nx[q][l], tabM.Ny[q][l], c);
            const int g = 2 * nodes[l] + c;
            for (int k = 0; k < 3; ++k) X[k] += correctors.uM(g, k) * S;
            S3 += correctors.uM3[g] * S;
          }
        }
        const double w = tabM.w[q];
        for (int k = 0; k < 3; ++k) {
          for (int m = k; m < 3; ++m) rm(k, m) += w * ph.RM.contract(X[k], X[m]);
          dv[k] += w * (ph.RM.contract(X[k], S3) + ph.dM.cwiseProduct(X[k]).sum());
          ev[k] += w * (ph.RM.contract(S3, X[k]) - ph.dM.cwiseProduct(X[k]).sum());
        }
        c33 += w * (ph.RM.contract(S3, S3) + ph.cM33);
      }

      for (int q = 0; q < tabN.nq; ++q) {
        Mat2 X[3];
        for (int k = 0; k < 3; ++k) X[k] = unit_loading(k);
        for (int L = 0; L < 16; ++L) {
          Mat2 H;
          H << tabN.Nxx[q][L], tabN.Nxy[q][L], tabN.Nxy[q][L], tabN.Nyy[q][L];
          for (int k = 0; k < 3; ++k) X[k] += correctors.uN(bdofs[L], k) * H;
        }
        for (int k = 0; k < 3; ++k)
          for (int m = k; m < 3; ++m) rn(k, m) += tabN.w[q] * ph.RN.contract(X[k], X[m]);
      }
    }
  }
  rm = rm.selfadjointView<Eigen::Upper>();
  rn = rn.selfadjointView<Eigen::Upper>();

  // spread the loading-pair matrices onto full minor-symmetric tensors
  const auto pair_index = [](int a, int b) { return a == b ? a : 2; };
  EffectiveTensorsThin out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 2; ++g)
        for (int e = 0; e < 2; ++e) {
          out.RM(a, b, g, e) = rm(pair_index(a, b), pair_index(g, e));
          out.RN(a, b, g, e) = rn(pair_index(a, b), pair_index(g, e));
        }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      out.dM3(a, b) = dv[pair_index(a, b)];
      out.eM3(a, b) = ev[pair_index(a, b)];
    }
  out.cM33 = c33;
  out.vol_Y1 = mesh.vol_Y1();
  return out;
}

EffectiveTensorsThin homogenize_thin(const CellMesh2D& mesh, const Material& matrix,
                                     const Material& inclusion) {
  const CondensedFieldY field(mesh, matrix, inclusion);
  return effective_tensors_thin(solve_cell2d(field), field);
}

}  // namespace pzp
