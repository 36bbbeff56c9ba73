#include "pzp/spaces.hpp"

#include "pzp/fem.hpp"

namespace pzp {

PlateNodeMap::PlateNodeMap(const PlateMesh& mesh, bool clamp_boundary)
    : nx_(mesh.nx()), ny_(mesh.ny()) {
  map_.assign(static_cast<size_t>(nx_ + 1) * (ny_ + 1), -1);
  for (int j = 0; j <= ny_; ++j) {
    for (int i = 0; i <= nx_; ++i) {
      if (clamp_boundary && mesh.node_clamped(i, j)) continue;
      map_[j * (nx_ + 1) + i] = nfree_++;
    }
  }
}

CellSpace3D::CellSpace3D(const CellMesh3D& mesh) : n_(mesh.n()), nz_(mesh.nz()) {
  const int nn = n_ * n_;
  // in-plane node is electric-active iff it touches an inclusion element
  std::vector<char> active(nn, 0);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < n_; ++i) {
      if (!mesh.tag(i, j)) continue;
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a)
          active[((j + b) % n_) * n_ + (i + a) % n_] = 1;
    }
  }
  emap_.assign(static_cast<size_t>(nlevels()) * nn, -1);
  const int base = num_udofs();
  for (int lz = 1; lz < nlevels() - 1; ++lz) {  // faces lz = 0 and 2*nz grounded
    for (int p = 0; p < nn; ++p) {
      if (active[p]) emap_[static_cast<size_t>(lz) * nn + p] = base + nedof_++;
    }
  }
}

std::array<int, 12> CellSpace3D::element_unodes(int i, int j, int k) const {
  std::array<int, 12> out{};
  for (int c = 0; c < 3; ++c)
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) out[4 * c + 2 * b + a] = unode(i + a, j + b, 2 * k + c);
  return out;
}

std::array<int, 12> CellSpace3D::element_edofs(int i, int j, int k) const {
  std::array<int, 12> out{};
  for (int c = 0; c < 3; ++c)
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) out[4 * c + 2 * b + a] = edof(i + a, j + b, 2 * k + c);
  return out;
}

Eigen::MatrixXd cell2d_mean_constraints_q1(const CellMesh2D& mesh, int ncomp) {
  const PeriodicQ1Space space(mesh);
  const auto tab = fem::Q1Tables2D::make(mesh.h(), mesh.h());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(space.ndof());
  for (int j = 0; j < mesh.n(); ++j) {
    for (int i = 0; i < mesh.n(); ++i) {
      const auto nodes = space.element_nodes(i, j);
      for (int q = 0; q < tab.nq; ++q)
        for (int l = 0; l < 4; ++l) w[nodes[l]] += tab.w[q] * tab.N[q][l];
    }
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(ncomp * space.ndof(), ncomp);
  for (int node = 0; node < space.ndof(); ++node)
    for (int c = 0; c < ncomp; ++c) C(ncomp * node + c, c) = w[node];
  return C;
}

Eigen::VectorXd cell2d_mean_constraint_bfs(const CellMesh2D& mesh) {
  const PeriodicBFSSpace space(mesh);
  const auto tab = fem::BFSTables::make(mesh.h(), mesh.h());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(space.ndof());
  for (int j = 0; j < mesh.n(); ++j) {
    for (int i = 0; i < mesh.n(); ++i) {
      const auto dofs = space.element_dofs(i, j);
      for (int q = 0; q < tab.nq; ++q)
        for (int l = 0; l < 16; ++l) w[dofs[l]] += tab.w[q] * tab.N[q][l];
    }
  }
  return w;
}

Eigen::MatrixXd cell3d_mean_constraints(const CellMesh3D& mesh, const CellSpace3D& space) {
  const auto tab = fem::Q1Q2Tables3D::make(mesh.h(), mesh.h(), mesh.hz());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(space.num_unodes());
  for (int k = 0; k < mesh.nz(); ++k) {
    for (int j = 0; j < mesh.n(); ++j) {
      for (int i = 0; i < mesh.n(); ++i) {
        const auto nodes = space.element_unodes(i, j, k);
        for (int q = 0; q < tab.nq; ++q)
          for (int m = 0; m < 12; ++m) w[nodes[m]] += tab.w[q] * tab.N[q][m];
      }
    }
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(space.ndof(), 3);
  for (int node = 0; node < space.num_unodes(); ++node)
    for (int c = 0; c < 3; ++c) C(3 * node + c, c) = w[node];
  return C;
}

}  // namespace pzp
