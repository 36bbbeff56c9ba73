#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "pzp/mesh.hpp"

namespace pzp {

// Periodic spaces on the unit cell identify opposite-edge nodes, so a dof is
// a logical node (i mod n, j mod n). There is no master/slave bookkeeping:
// identified dofs ARE the same dof, which makes periodicity exact by
// construction.

class PeriodicQ1Space {
public:
  explicit PeriodicQ1Space(const CellMesh2D& mesh) : n_(mesh.n()) {}

  int n() const { return n_; }
  int ndof() const { return n_ * n_; }
  int node(int i, int j) const { return ((j % n_ + n_) % n_) * n_ + ((i % n_ + n_) % n_); }
  // Q1 corner order: l = 2*b + a
  std::array<int, 4> element_nodes(int i, int j) const {
    return {node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1)};
  }

private:
  int n_;
};

// Four dofs per logical node (v, v_x, v_y, v_xy); periodic identification
// pairs all four kinds. Global dof = 4*node + type.
class PeriodicBFSSpace {
public:
  explicit PeriodicBFSSpace(const CellMesh2D& mesh) : q1_(mesh) {}

  int ndof() const { return 4 * q1_.ndof(); }
  std::array<int, 16> element_dofs(int i, int j) const {
    const auto nodes = q1_.element_nodes(i, j);
    std::array<int, 16> d{};
    for (int l = 0; l < 4; ++l)
      for (int t = 0; t < 4; ++t) d[4 * l + t] = 4 * nodes[l] + t;
    return d;
  }
  const PeriodicQ1Space& nodes() const { return q1_; }

private:
  PeriodicQ1Space q1_;
};

// Plate nodal space with homogeneous Dirichlet elimination on clamped edges.
// Fixed dofs are simply absent: node_index() returns -1 there and assembly
// skips them, which keeps the reduced system coercive.
class PlateNodeMap {
public:
  PlateNodeMap(const PlateMesh& mesh, bool clamp_boundary);

  int nfree() const { return nfree_; }
  int index(int i, int j) const { return map_[j * (nx_ + 1) + i]; }
  std::array<int, 4> element_nodes(int i, int j) const {
    return {index(i, j), index(i + 1, j), index(i, j + 1), index(i + 1, j + 1)};
  }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

private:
  int nx_, ny_, nfree_ = 0;
  std::vector<int> map_;
};

// Clamped BFS space for the deflection. On a straight clamped edge the exact
// solution has v = v_x = v_y = v_xy = 0, so all four dof kinds are fixed on
// gamma_D nodes; this is the strongest conforming realization.
class PlateBFSSpace {
public:
  explicit PlateBFSSpace(const PlateMesh& mesh) : nodes_(mesh, true) {}

  int ndof() const { return 4 * nodes_.nfree(); }
  std::array<int, 16> element_dofs(int i, int j) const {
    const auto nn = nodes_.element_nodes(i, j);
    std::array<int, 16> d{};
    for (int l = 0; l < 4; ++l)
      for (int t = 0; t < 4; ++t) d[4 * l + t] = nn[l] < 0 ? -1 : 4 * nn[l] + t;
    return d;
  }
  const PlateNodeMap& nodes() const { return nodes_; }

private:
  PlateNodeMap nodes_;
};

// Coupled dof layout for the comparable-regime cell problems on Z.
// Displacement: Q1 in plane (periodic), quadratic through the thickness,
// free top and bottom; dof = 3*node + comp, nodes on 2*nz+1 z-levels.
// Electric: same scalar basis restricted to inclusion columns, grounded on
// the top and bottom electrode faces; its dofs follow the displacement block.
class CellSpace3D {
public:
  explicit CellSpace3D(const CellMesh3D& mesh);

  int n() const { return n_; }
  int nz() const { return nz_; }
  int nlevels() const { return 2 * nz_ + 1; }
  int num_unodes() const { return n_ * n_ * nlevels(); }
  int num_udofs() const { return 3 * num_unodes(); }
  int num_edofs() const { return nedof_; }
  int ndof() const { return num_udofs() + nedof_; }

  int unode(int i, int j, int lz) const {
    return lz * n_ * n_ + ((j % n_ + n_) % n_) * n_ + ((i % n_ + n_) % n_);
  }
  // electric dof of the node, or -1 (matrix phase or grounded face);
  // already offset into the global coupled numbering
  int edof(int i, int j, int lz) const {
    return emap_[static_cast<size_t>(lz) * n_ * n_ + ((j % n_ + n_) % n_) * n_ +
                 ((i % n_ + n_) % n_)];
  }

  // local order matches Q1Q2Tables3D: m = 4*c + 2*b + a, element (i,j,k)
  std::array<int, 12> element_unodes(int i, int j, int k) const;
  std::array<int, 12> element_edofs(int i, int j, int k) const;

private:
  int n_, nz_, nedof_ = 0;
  std::vector<int> emap_;
};

// Mean-value weights w with w_i = int phi_i, one column per displacement
// component, used as mean-zero constraints to remove the rigid translations.
Eigen::MatrixXd cell2d_mean_constraints_q1(const CellMesh2D& mesh, int ncomp);
Eigen::VectorXd cell2d_mean_constraint_bfs(const CellMesh2D& mesh);
Eigen::MatrixXd cell3d_mean_constraints(const CellMesh3D& mesh, const CellSpace3D& space);

}  // namespace pzp
