#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <vector>

namespace pzp::fem {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Gauss-Legendre rule mapped to [0,1]. Supported sizes: 1..4.
struct GaussRule {
  std::vector<double> pts, wts;
  static GaussRule make(int npts);
};

// Shape tables for one uniform element. All meshes here are translates of a
// single reference element, so the tables bake in the physical element size
// and are computed once per mesh. Derivatives are physical.
struct Q1Tables2D {
  int nq = 0;
  std::vector<double> w, xq, yq;  // weight and in-element offsets per point
  std::vector<std::array<double, 4>> N, Nx, Ny;
  // local node l = 2*b + a for corner (a, b) in {0,1}^2
  static Q1Tables2D make(double hx, double hy, int n1d = 2);
};

// Bogner-Fox-Schmit bicubic with 4 dofs per node: (v, v_x, v_y, v_xy),
// local dof = 4*node + type, node as in Q1Tables2D, type = 2*q + p meaning
// d^p_x d^q_y. Derivative dofs carry physical derivative values (the element
// size is baked into the Hermite polynomials).
struct BFSTables {
  int nq = 0;
  std::vector<double> w, xq, yq;
  std::vector<std::array<double, 16>> N, Nx, Ny, Nxx, Nyy, Nxy;
  static BFSTables make(double hx, double hy, int n1d = 4);
};

// 1D Hermite data on [0, h] for the two-node cubic with (value, slope) dofs;
// index 2*a + p: node a in {0,1}, p = derivative order of the dof.
void hermite1d(double h, double x, double val[4], double d1[4], double d2[4]);

// Trilinear in plane, quadratic through the thickness. 12 nodes per element,
// local node m = 4*c + l with z-level c in {0: bottom, 1: mid, 2: top} and
// in-plane corner l as in Q1Tables2D.
struct Q1Q2Tables3D {
  int nq = 0;
  std::vector<double> w, xq, yq, zq;
  std::vector<std::array<double, 12>> N, Nx, Ny, Nz;
  static Q1Q2Tables3D make(double hx, double hy, double hz);
};

double rel_residual(const SpMat& A, const Eigen::MatrixXd& X, const Eigen::MatrixXd& B);

// Direct solves. Every right-hand-side column must reach a relative residual
// of 1e-10 or SolverError is thrown; callers rely on this gate instead of
// checking convergence themselves.
Eigen::MatrixXd solve_spd(const SpMat& A, const Eigen::MatrixXd& B);
Eigen::MatrixXd solve_general(const SpMat& A, const Eigen::MatrixXd& B);

// Saddle formulation [A C; C^T 0] for linear equality constraints C^T x = 0
// (mean-zero conditions). Returns the primal block. A need not be symmetric.
Eigen::MatrixXd solve_constrained(const SpMat& A, const Eigen::MatrixXd& C,
                                  const Eigen::MatrixXd& B);

inline constexpr double kResidualTol = 1e-10;

}  // namespace pzp::fem
