#include "pzp/fem.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "pzp/errors.hpp"

namespace pzp::fem {

GaussRule GaussRule::make(int npts) {
  // abscissae/weights on [-1,1]
  std::vector<double> a, w;
  switch (npts) {
    case 1:
      a = {0.0};
      w = {2.0};
      break;
    case 2:
      a = {-0.5773502691896257645091488, 0.5773502691896257645091488};
      w = {1.0, 1.0};
      break;
    case 3:
      a = {-0.7745966692414833770358531, 0.0, 0.7745966692414833770358531};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4:
      a = {-0.8611363115940525752239465, -0.3399810435848562648026658,
           0.3399810435848562648026658, 0.8611363115940525752239465};
      w = {0.3478548451374538573730639, 0.6521451548625461426269461,
           0.6521451548625461426269461, 0.3478548451374538573730639};
      break;
    default:
      throw Error("unsupported Gauss rule size");
  }
  GaussRule g;
  for (int i = 0; i < npts; ++i) {
    g.pts.push_back(0.5 * (a[i] + 1.0));
    g.wts.push_back(0.5 * w[i]);
  }
  return g;
}

Q1Tables2D Q1Tables2D::make(double hx, double hy, int n1d) {
  const GaussRule g = GaussRule::make(n1d);
  Q1Tables2D t;
  for (int qy = 0; qy < n1d; ++qy) {
    for (int qx = 0; qx < n1d; ++qx) {
      const double xi = g.pts[qx], eta = g.pts[qy];
      const double sx[2] = {1.0 - xi, xi}, sy[2] = {1.0 - eta, eta};
      const double dx[2] = {-1.0 / hx, 1.0 / hx}, dy[2] = {-1.0 / hy, 1.0 / hy};
      std::array<double, 4> N, Nx, Ny;
      for (int b = 0; b < 2; ++b) {
        for (int a = 0; a < 2; ++a) {
          const int l = 2 * b + a;
          N[l] = sx[a] * sy[b];
          Nx[l] = dx[a] * sy[b];
          Ny[l] = sx[a] * dy[b];
        }
      }
      t.N.push_back(N);
      t.Nx.push_back(Nx);
      t.Ny.push_back(Ny);
      t.w.push_back(g.wts[qx] * g.wts[qy] * hx * hy);
      t.xq.push_back(xi * hx);
      t.yq.push_back(eta * hy);
    }
  }
  t.nq = n1d * n1d;
  return t;
}

void hermite1d(double h, double x, double val[4], double d1[4], double d2[4]) {
  const double s = x / h, s2 = s * s, s3 = s2 * s;
  // index 2*a + p
  val[0] = 1.0 - 3.0 * s2 + 2.0 * s3;
  val[1] = h * (s - 2.0 * s2 + s3);
  val[2] = 3.0 * s2 - 2.0 * s3;
  val[3] = h * (s3 - s2);
  d1[0] = (-6.0 * s + 6.0 * s2) / h;
  d1[1] = 1.0 - 4.0 * s + 3.0 * s2;
  d1[2] = (6.0 * s - 6.0 * s2) / h;
  d1[3] = 3.0 * s2 - 2.0 * s;
  d2[0] = (-6.0 + 12.0 * s) / (h * h);
  d2[1] = (-4.0 + 6.0 * s) / h;
  d2[2] = (6.0 - 12.0 * s) / (h * h);
  d2[3] = (6.0 * s - 2.0) / h;
}

BFSTables BFSTables::make(double hx, double hy, int n1d) {
  const GaussRule g = GaussRule::make(n1d);
  BFSTables t;
  for (int qy = 0; qy < n1d; ++qy) {
    for (int qx = 0; qx < n1d; ++qx) {
      const double x = g.pts[qx] * hx, y = g.pts[qy] * hy;
      double fx[4], fx1[4], fx2[4], fy[4], fy1[4], fy2[4];
      hermite1d(hx, x, fx, fx1, fx2);
      hermite1d(hy, y, fy, fy1, fy2);
      std::array<double, 16> N, Nx, Ny, Nxx, Nyy, Nxy;
      for (int b = 0; b < 2; ++b) {
        for (int a = 0; a < 2; ++a) {
          for (int q = 0; q < 2; ++q) {
            for (int p = 0; p < 2; ++p) {
              const int L = 4 * (2 * b + a) + (2 * q + p);
              const int ix = 2 * a + p, iy = 2 * b + q;
              N[L] = fx[ix] * fy[iy];
              Nx[L] = fx1[ix] * fy[iy];
              Ny[L] = fx[ix] * fy1[iy];
              Nxx[L] = fx2[ix] * fy[iy];
              Nyy[L] = fx[ix] * fy2[iy];
              Nxy[L] = fx1[ix] * fy1[iy];
            }
          }
        }
      }
      t.N.push_back(N);
      t.Nx.push_back(Nx);
      t.Ny.push_back(Ny);
      t.Nxx.push_back(Nxx);
      t.Nyy.push_back(Nyy);
      t.Nxy.push_back(Nxy);
      t.w.push_back(g.wts[qx] * g.wts[qy] * hx * hy);
      t.xq.push_back(x);
      t.yq.push_back(y);
    }
  }
  t.nq = n1d * n1d;
  return t;
}

Q1Q2Tables3D Q1Q2Tables3D::make(double hx, double hy, double hz) {
  const GaussRule g2 = GaussRule::make(2), g3 = GaussRule::make(3);
  Q1Q2Tables3D t;
  for (int qz = 0; qz < 3; ++qz) {
    for (int qy = 0; qy < 2; ++qy) {
      for (int qx = 0; qx < 2; ++qx) {
        const double xi = g2.pts[qx], eta = g2.pts[qy], ze = g3.pts[qz];
        const double sx[2] = {1.0 - xi, xi}, sy[2] = {1.0 - eta, eta};
        const double dx[2] = {-1.0 / hx, 1.0 / hx}, dy[2] = {-1.0 / hy, 1.0 / hy};
        const double sz[3] = {1.0 - 3.0 * ze + 2.0 * ze * ze, 4.0 * ze * (1.0 - ze),
                              ze * (2.0 * ze - 1.0)};
        const double dz[3] = {(-3.0 + 4.0 * ze) / hz, (4.0 - 8.0 * ze) / hz,
                              (4.0 * ze - 1.0) / hz};
        std::array<double, 12> N, Nx, Ny, Nz;
        for (int c = 0; c < 3; ++c) {
          for (int b = 0; b < 2; ++b) {
            for (int a = 0; a < 2; ++a) {
              const int m = 4 * c + 2 * b + a;
              N[m] = sx[a] * sy[b] * sz[c];
              Nx[m] = dx[a] * sy[b] * sz[c];
              Ny[m] = sx[a] * dy[b] * sz[c];
              Nz[m] = sx[a] * sy[b] * dz[c];
            }
          }
        }
        t.N.push_back(N);
        t.Nx.push_back(Nx);
        t.Ny.push_back(Ny);
        t.Nz.push_back(Nz);
        t.w.push_back(g2.wts[qx] * g2.wts[qy] * g3.wts[qz] * hx * hy * hz);
        t.xq.push_back(xi * hx);
        t.yq.push_back(eta * hy);
        t.zq.push_back(ze * hz);
      }
    }
  }
  t.nq = 12;
  return t;
}

// B - A*X accumulated in extended precision: the plain double evaluation has
// a cancellation floor near eps*|A||X| that can sit above the residual gate
// on stiff systems, stalling refinement on noise instead of true error.
Eigen::MatrixXd residual_matrix(const SpMat& A, const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& B) {
  Eigen::MatrixXd R(B.rows(), B.cols());
  std::vector<long double> acc(B.rows());
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    acc.assign(B.rows(), 0.0L);
    for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
      const long double xk = X(k, c);
      for (SpMat::InnerIterator it(A, k); it; ++it)
        acc[it.row()] += static_cast<long double>(it.value()) * xk;
    }
    for (Eigen::Index i = 0; i < B.rows(); ++i)
      R(i, c) = static_cast<double>(static_cast<long double>(B(i, c)) - acc[i]);
  }
  return R;
}

double rel_residual(const SpMat& A, const Eigen::MatrixXd& X, const Eigen::MatrixXd& B) {
  const Eigen::MatrixXd R = residual_matrix(A, X, B);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    const double nb = B.col(c).norm();
    worst = std::max(worst, R.col(c).norm() / std::max(nb, 1e-300));
  }
  return worst;
}

namespace {

[[noreturn]] void fail_residual(const char* what, double res) {
  std::ostringstream os;
  os << what << ": relative residual " << res << " exceeds " << kResidualTol;
  throw SolverError(os.str());
}

double worst_ratio(const Eigen::MatrixXd& R, const Eigen::MatrixXd& B) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < B.cols(); ++c)
    worst = std::max(worst, R.col(c).norm() / std::max(B.col(c).norm(), 1e-300));
  return worst;
}

// Refinement sweeps with the existing factorization recover the digits the
// factorization loses on stiff systems (BFS at fine meshes).
template <class Solver>
Eigen::MatrixXd solve_refined(const Solver& solver, const SpMat& A,
                              const Eigen::MatrixXd& B, const char* what) {
  Eigen::MatrixXd X = solver.solve(B);
  if (solver.info() != Eigen::Success) throw SolverError(std::string(what) + " solve failed");
  double res = 0.0;
  for (int sweep = 0; sweep < 4; ++sweep) {
    const Eigen::MatrixXd R = residual_matrix(A, X, B);
    res = worst_ratio(R, B);
    if (res <= kResidualTol) return X;
    X += solver.solve(R);
  }
  res = rel_residual(A, X, B);
  if (res > kResidualTol) fail_residual(what, res);
  return X;
}

}  // namespace

Eigen::MatrixXd solve_spd(const SpMat& A, const Eigen::MatrixXd& B) {
  Eigen::SimplicialLDLT<SpMat> solver(A);
  if (solver.info() != Eigen::Success) throw SolverError("LDLT factorization failed");
  return solve_refined(solver, A, B, "LDLT");
}

Eigen::MatrixXd solve_general(const SpMat& A, const Eigen::MatrixXd& B) {
  Eigen::SparseLU<SpMat> solver;
  solver.analyzePattern(A);
  solver.factorize(A);
  if (solver.info() != Eigen::Success) throw SolverError("sparse LU factorization failed");
  return solve_refined(solver, A, B, "sparse LU");
}

Eigen::MatrixXd solve_constrained(const SpMat& A, const Eigen::MatrixXd& C,
                                  const Eigen::MatrixXd& B) {
  const Eigen::Index n = A.rows(), m = C.cols();

  // Dof scalings in one stiffness matrix span several orders of magnitude
  // (value vs derivative dofs carry different powers of h) and the
  // constraint columns are integral weights of order h^2, so the raw saddle
  // matrix can reach condition numbers where a direct factorization loses
  // every digit. Factor a Jacobi-equilibrated copy and use it as the
  // preconditioner in a refinement loop on the original system.
  Eigen::VectorXd scale(n + m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double aii = A.coeff(i, i);
    scale[i] = aii > 0.0 ? std::sqrt(aii) : 1.0;
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double nc = (C.col(j).array() / scale.head(n).array()).matrix().norm();
    scale[n + j] = nc > 0.0 ? nc : 1.0;
  }

  std::vector<Triplet> trips, strips;
  trips.reserve(static_cast<size_t>(A.nonZeros()) + 2 * n * m);
  strips.reserve(trips.capacity());
  for (Eigen::Index k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      trips.emplace_back(it.row(), it.col(), it.value());
      strips.emplace_back(it.row(), it.col(),
                          it.value() / (scale[it.row()] * scale[it.col()]));
    }
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = C(i, j);
      if (v != 0.0) {
        trips.emplace_back(i, n + j, v);
        trips.emplace_back(n + j, i, v);
        const double vs = v / (scale[i] * scale[n + j]);
        strips.emplace_back(i, n + j, vs);
        strips.emplace_back(n + j, i, vs);
      }
    }
  SpMat Aug(n + m, n + m), Scaled(n + m, n + m);
  Aug.setFromTriplets(trips.begin(), trips.end());
  Scaled.setFromTriplets(strips.begin(), strips.end());

  Eigen::SparseLU<SpMat> solver;
  solver.analyzePattern(Scaled);
  solver.factorize(Scaled);
  if (solver.info() != Eigen::Success) throw SolverError("sparse LU factorization failed");
  const auto apply = [&](const Eigen::MatrixXd& R) -> Eigen::MatrixXd {
    const Eigen::MatrixXd Y = solver.solve((R.array().colwise() / scale.array()).matrix());
    if (solver.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
    return (Y.array().colwise() / scale.array()).matrix();
  };

  Eigen::MatrixXd Baug = Eigen::MatrixXd::Zero(n + m, B.cols());
  Baug.topRows(n) = B;
  Eigen::MatrixXd X = apply(Baug);
  double res = 0.0;
  for (int sweep = 0; sweep < 5; ++sweep) {
    const Eigen::MatrixXd R = residual_matrix(Aug, X, Baug);
    res = worst_ratio(R, Baug);
    if (res <= kResidualTol) return X.topRows(n);
    X += apply(R);
  }
  res = rel_residual(Aug, X, Baug);
  if (res > kResidualTol) fail_residual("constrained sparse LU", res);
  return X.topRows(n);
}

}  // namespace pzp::fem
