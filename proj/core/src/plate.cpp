#include "pzp/plate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pzp/condense.hpp"
#include "pzp/errors.hpp"
#include "pzp/fem.hpp"

namespace pzp {
namespace {

using fem::SpMat;
using fem::Triplet;

// Single n1d = 4 tensor-product rule for every volume term: exact for the
// bicubic flexion energy and for degree <= 3 polynomial loads. Q1Tables2D
// and BFSTables built with the same n1d enumerate the same points in the
// same order, which the coupled blocks below rely on.
constexpr int kQuad1D = 4;

Mat2 strain_basis(double gx, double gy, int c) {
  Mat2 s = Mat2::Zero();
  s(c, 0) += 0.5 * gx;
  s(0, c) += 0.5 * gx;
  s(c, 1) += 0.5 * gy;
  s(1, c) += 0.5 * gy;
  return s;
}

struct Tables {
  fem::Q1Tables2D m;
  fem::BFSTables f;
  std::vector<std::array<Mat2, 8>> S;   // membrane strain, local dof 2*l+c
  std::vector<std::array<Mat2, 16>> H;  // deflection hessian, local dof 4*l+t
};

Tables make_tables(const PlateMesh& mesh) {
  Tables t;
  t.m = fem::Q1Tables2D::make(mesh.hx(), mesh.hy(), kQuad1D);
  t.f = fem::BFSTables::make(mesh.hx(), mesh.hy(), kQuad1D);
  t.S.resize(t.m.nq);
  t.H.resize(t.f.nq);
  for (int q = 0; q < t.m.nq; ++q)
    for (int l = 0; l < 4; ++l)
      for (int c = 0; c < 2; ++c)
        t.S[q][2 * l + c] = strain_basis(t.m.Nx[q][l], t.m.Ny[q][l], c);
  for (int q = 0; q < t.f.nq; ++q)
    for (int k = 0; k < 16; ++k)
      t.H[q][k] << t.f.Nxx[q][k], t.f.Nxy[q][k], t.f.Nxy[q][k], t.f.Nyy[q][k];
  return t;
}

// Q1 basis with physical gradients at an in-element point (edge and corner
// evaluations; the volume tables bake in the quadrature points only).
void q1_at(double hx, double hy, double x, double y, double N[4], double Nx[4],
           double Ny[4]) {
  const double sx[2] = {1.0 - x / hx, x / hx};
  const double sy[2] = {1.0 - y / hy, y / hy};
  const double dx[2] = {-1.0 / hx, 1.0 / hx};
  const double dy[2] = {-1.0 / hy, 1.0 / hy};
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a) {
      N[2 * b + a] = sx[a] * sy[b];
      Nx[2 * b + a] = dx[a] * sy[b];
      Ny[2 * b + a] = sx[a] * dy[b];
    }
}

void bfs_at(double hx, double hy, double x, double y, double N[16], double Nx[16],
            double Ny[16], double Nxx[16], double Nyy[16], double Nxy[16]) {
  double vx[4], d1x[4], d2x[4], vy[4], d1y[4], d2y[4];
  fem::hermite1d(hx, x, vx, d1x, d2x);
  fem::hermite1d(hy, y, vy, d1y, d2y);
  for (int l = 0; l < 4; ++l) {
    const int a = l & 1, b = l >> 1;
    for (int t = 0; t < 4; ++t) {
      const int p = t & 1, q = t >> 1;
      const int k = 4 * l + t;
      const int ix = 2 * a + p, iy = 2 * b + q;
      N[k] = vx[ix] * vy[iy];
      Nx[k] = d1x[ix] * vy[iy];
      Ny[k] = vx[ix] * d1y[iy];
      Nxx[k] = d2x[ix] * vy[iy];
      Nyy[k] = vx[ix] * d2y[iy];
      Nxy[k] = d1x[ix] * d1y[iy];
    }
  }
}

std::array<int, 8> membrane_dofs(const PlateNodeMap& map, int i, int j) {
  const auto nn = map.element_nodes(i, j);
  std::array<int, 8> g;
  for (int l = 0; l < 4; ++l)
    for (int c = 0; c < 2; ++c) g[2 * l + c] = nn[l] < 0 ? -1 : 2 * nn[l] + c;
  return g;
}

std::array<int, 16> flexion_dofs(const PlateBFSSpace& bfs, int i, int j, int off) {
  auto d = bfs.element_dofs(i, j);
  for (int& v : d)
    if (v >= 0) v += off;
  return d;
}

template <std::size_t NR, std::size_t NC>
void scatter(const std::array<int, NR>& gi, const std::array<int, NC>& gj,
             const Eigen::Matrix<double, static_cast<int>(NR), static_cast<int>(NC)>& el,
             std::vector<Triplet>& trips) {
  for (int a = 0; a < static_cast<int>(NR); ++a) {
    if (gi[a] < 0) continue;
    for (int b = 0; b < static_cast<int>(NC); ++b)
      if (gj[b] >= 0) trips.emplace_back(gi[a], gj[b], el(a, b));
  }
}

// The element blocks are identical on every element: uniform mesh, constant
// tensors. Row index is always the test field.
Eigen::Matrix<double, 8, 8> membrane_element(const Tensor4& R, const Tables& t) {
  Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
  for (int q = 0; q < t.m.nq; ++q)
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) K(a, b) += t.m.w[q] * R.contract(t.S[q][a], t.S[q][b]);
  return K;
}

Eigen::Matrix<double, 16, 16> flexion_element(const Tensor4& R, const Tables& t) {
  Eigen::Matrix<double, 16, 16> K = Eigen::Matrix<double, 16, 16>::Zero();
  for (int q = 0; q < t.f.nq; ++q)
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) K(a, b) += t.m.w[q] * R.contract(t.H[q][a], t.H[q][b]);
  return K;
}

Eigen::Matrix<double, 8, 16> cross_mf_element(const Tensor4& R, const Tables& t) {
  Eigen::Matrix<double, 8, 16> K = Eigen::Matrix<double, 8, 16>::Zero();
  for (int q = 0; q < t.m.nq; ++q)
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 16; ++b) K(a, b) += t.m.w[q] * R.contract(t.S[q][a], t.H[q][b]);
  return K;
}

Eigen::Matrix<double, 16, 8> cross_fm_element(const Tensor4& R, const Tables& t) {
  Eigen::Matrix<double, 16, 8> K = Eigen::Matrix<double, 16, 8>::Zero();
  for (int q = 0; q < t.m.nq; ++q)
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 8; ++b) K(a, b) += t.m.w[q] * R.contract(t.H[q][a], t.S[q][b]);
  return K;
}

enum class VoltageKind { kNone, kPerPoint, kQ1 };

// One linear system with block layout [membrane | voltage | flexion]; absent
// blocks have size zero. Tensors and coupling matrices are passed already
// carrying their model prefactors. The voltage is either a conforming Q1
// field (gradient penalty active) or one unknown per quadrature point, whose
// elimination reproduces the pointwise voltage formula exactly.
struct SystemSpec {
  bool membrane = true;
  bool flexion = false;
  Tensor4 Rm, Rf, Rmf, Rfm;
  VoltageKind vkind = VoltageKind::kNone;
  Mat2 Dm = Mat2::Zero(), Em = Mat2::Zero();  // membrane test/trial couplings
  Mat2 Df = Mat2::Zero(), Ef = Mat2::Zero();  // flexion test/trial couplings
  double mass = 0.0;                          // (Ltilde, L) coefficient
  double grad = 0.0;                          // (grad Ltilde, grad L) coefficient
  double hsrc = 0.0;                          // (Ltilde, h) coefficient
  Mat2 msrc_D = Mat2::Zero();                 // rhs: msrc_coef*(msrc_D:s(v))*field
  const Poly3* msrc_field = nullptr;
  double msrc_coef = 0.0;
  Mat2 fsrc_D = Mat2::Zero();
  const Poly3* fsrc_field = nullptr;
  double fsrc_coef = 0.0;
};

struct Assembled {
  SpMat A;
  Eigen::VectorXd b;
  int nm = 0, nv = 0, nf = 0;
};

void add_edge_loads(const KLSpace& space, const SystemSpec& spec, const ReducedLoads& loads,
                    int off_f, Eigen::VectorXd& b) {
  const PlateMesh& mesh = space.mesh();
  const ClampedEdges cl = mesh.clamped();
  const fem::GaussRule g1 = fem::GaussRule::make(kQuad1D);
  const double hx = mesh.hx(), hy = mesh.hy();
  const bool free_side[4] = {!cl.left, !cl.right, !cl.bottom, !cl.top};
  for (int side = 0; side < 4; ++side) {
    if (!free_side[side]) continue;
    const EdgeLoad& e = loads.edge[side];
    if (e.F[0].is_zero() && e.F[1].is_zero() && e.M[0].is_zero() && e.M[1].is_zero() &&
        e.F3.is_zero())
      continue;
    const bool vertical = side < 2;  // left and right edges run along y
    const int nseg = vertical ? mesh.ny() : mesh.nx();
    const double seg = vertical ? hy : hx;
    for (int s = 0; s < nseg; ++s) {
      const int i = side == 0 ? 0 : (side == 1 ? mesh.nx() - 1 : s);
      const int j = vertical ? s : (side == 2 ? 0 : mesh.ny() - 1);
      const auto gm = membrane_dofs(space.membrane(), i, j);
      const auto gf = flexion_dofs(space.flexion(), i, j, off_f);
      for (size_t q = 0; q < g1.pts.size(); ++q) {
        const double tq = g1.pts[q] * seg, w = g1.wts[q] * seg;
        const double xl = vertical ? (side == 0 ? 0.0 : hx) : tq;
        const double yl = vertical ? tq : (side == 2 ? 0.0 : hy);
        const double x = mesh.x(i) + xl, y = mesh.y(j) + yl;
        if (spec.membrane) {
          double mN[4], mNx[4], mNy[4];
          q1_at(hx, hy, xl, yl, mN, mNx, mNy);
          const double F1 = e.F[0].eval2(x, y), F2 = e.F[1].eval2(x, y);
          for (int a = 0; a < 8; ++a)
            if (gm[a] >= 0) b[gm[a]] += w * mN[a >> 1] * (a & 1 ? F2 : F1);
        }
        if (spec.flexion) {
          double fN[16], fNx[16], fNy[16], fNxx[16], fNyy[16], fNxy[16];
          bfs_at(hx, hy, xl, yl, fN, fNx, fNy, fNxx, fNyy, fNxy);
          const double M1 = e.M[0].eval2(x, y), M2 = e.M[1].eval2(x, y);
          const double F3 = e.F3.eval2(x, y);
          for (int k = 0; k < 16; ++k)
            if (gf[k] >= 0) b[gf[k]] += w * (fNx[k] * M1 + fNy[k] * M2 + fN[k] * F3);
        }
      }
    }
  }
}

Assembled assemble_system(const KLSpace& space, const Tables& t, const SystemSpec& spec,
                          const ReducedLoads& loads) {
  const PlateMesh& mesh = space.mesh();
  const int nq = t.m.nq;
  Assembled out;
  out.nm = spec.membrane ? 2 * space.membrane().nfree() : 0;
  if (spec.vkind == VoltageKind::kPerPoint) out.nv = mesh.num_elements() * nq;
  if (spec.vkind == VoltageKind::kQ1) out.nv = mesh.num_nodes();
  out.nf = spec.flexion ? space.flexion().ndof() : 0;
  const int off_v = out.nm, off_f = out.nm + out.nv;
  const int n = out.nm + out.nv + out.nf;

  Eigen::Matrix<double, 8, 8> Km;
  Eigen::Matrix<double, 16, 16> Kf;
  Eigen::Matrix<double, 8, 16> Kmf;
  Eigen::Matrix<double, 16, 8> Kfm;
  if (spec.membrane) Km = membrane_element(spec.Rm, t);
  if (spec.flexion) Kf = flexion_element(spec.Rf, t);
  const bool cross = spec.membrane && spec.flexion;
  if (cross) {
    Kmf = cross_mf_element(spec.Rmf, t);
    Kfm = cross_fm_element(spec.Rfm, t);
  }

  // pointwise coupling values, shared by both voltage representations
  std::vector<std::array<double, 8>> dmS(nq), emS(nq);
  std::vector<std::array<double, 16>> dfH(nq), efH(nq);
  if (spec.vkind != VoltageKind::kNone) {
    for (int q = 0; q < nq; ++q) {
      for (int a = 0; a < 8; ++a) {
        dmS[q][a] = spec.Dm.cwiseProduct(t.S[q][a]).sum();
        emS[q][a] = spec.Em.cwiseProduct(t.S[q][a]).sum();
      }
      for (int k = 0; k < 16; ++k) {
        dfH[q][k] = spec.Df.cwiseProduct(t.H[q][k]).sum();
        efH[q][k] = spec.Ef.cwiseProduct(t.H[q][k]).sum();
      }
    }
  }

  Eigen::Matrix4d Avv;
  Eigen::Matrix<double, 8, 4> Bmv;
  Eigen::Matrix<double, 4, 8> Bvm;
  Eigen::Matrix<double, 16, 4> Bfv;
  Eigen::Matrix<double, 4, 16> Bvf;
  if (spec.vkind == VoltageKind::kQ1) {
    Avv.setZero();
    Bmv.setZero();
    Bvm.setZero();
    Bfv.setZero();
    Bvf.setZero();
    for (int q = 0; q < nq; ++q) {
      const double w = t.m.w[q];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          Avv(a, b) += w * (spec.mass * t.m.N[q][a] * t.m.N[q][b] +
                            spec.grad * (t.m.Nx[q][a] * t.m.Nx[q][b] +
                                         t.m.Ny[q][a] * t.m.Ny[q][b]));
      for (int b = 0; b < 4; ++b) {
        for (int a = 0; a < 8; ++a) {
          Bmv(a, b) += w * dmS[q][a] * t.m.N[q][b];
          Bvm(b, a) += w * t.m.N[q][b] * emS[q][a];
        }
        for (int k = 0; k < 16; ++k) {
          Bfv(k, b) += w * dfH[q][k] * t.m.N[q][b];
          Bvf(b, k) += w * t.m.N[q][b] * efH[q][k];
        }
      }
    }
  }

  std::vector<std::array<double, 8>> msD(nq);
  std::vector<std::array<double, 16>> fsD(nq);
  if (spec.msrc_field)
    for (int q = 0; q < nq; ++q)
      for (int a = 0; a < 8; ++a) msD[q][a] = spec.msrc_D.cwiseProduct(t.S[q][a]).sum();
  if (spec.fsrc_field)
    for (int q = 0; q < nq; ++q)
      for (int k = 0; k < 16; ++k) fsD[q][k] = spec.fsrc_D.cwiseProduct(t.H[q][k]).sum();

  std::vector<Triplet> trips;
  size_t per_el = 0;
  if (spec.membrane) per_el += 64;
  if (spec.flexion) per_el += 256;
  if (cross) per_el += 256;
  if (spec.vkind == VoltageKind::kQ1) per_el += 16 + 64 + 128;
  if (spec.vkind == VoltageKind::kPerPoint)
    per_el += static_cast<size_t>(nq) * (1 + (spec.membrane ? 16 : 0) + (spec.flexion ? 32 : 0));
  trips.reserve(per_el * static_cast<size_t>(mesh.num_elements()));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const auto gm = membrane_dofs(space.membrane(), i, j);
      const auto gf = flexion_dofs(space.flexion(), i, j, off_f);
      if (spec.membrane) scatter(gm, gm, Km, trips);
      if (spec.flexion) scatter(gf, gf, Kf, trips);
      if (cross) {
        scatter(gm, gf, Kmf, trips);
        scatter(gf, gm, Kfm, trips);
      }

      const double x0 = mesh.x(i), y0 = mesh.y(j);
      for (int q = 0; q < nq; ++q) {
        const double x = x0 + t.m.xq[q], y = y0 + t.m.yq[q];
        const double w = t.m.w[q];
        if (spec.membrane) {
          const double F1 = loads.F[0].eval2(x, y), F2 = loads.F[1].eval2(x, y);
          const double sv =
              spec.msrc_field ? spec.msrc_coef * spec.msrc_field->eval2(x, y) : 0.0;
          for (int a = 0; a < 8; ++a) {
            if (gm[a] < 0) continue;
            double val = t.m.N[q][a >> 1] * (a & 1 ? F2 : F1);
            if (spec.msrc_field) val += sv * msD[q][a];
            b[gm[a]] += w * val;
          }
        }
        if (spec.flexion) {
          const double M1 = loads.M[0].eval2(x, y), M2 = loads.M[1].eval2(x, y);
          const double F3 = loads.F3.eval2(x, y);
          const double sv =
              spec.fsrc_field ? spec.fsrc_coef * spec.fsrc_field->eval2(x, y) : 0.0;
          for (int k = 0; k < 16; ++k) {
            if (gf[k] < 0) continue;
            double val = t.f.Nx[q][k] * M1 + t.f.Ny[q][k] * M2 + t.f.N[q][k] * F3;
            if (spec.fsrc_field) val += sv * fsD[q][k];
            b[gf[k]] += w * val;
          }
        }
      }

      if (spec.vkind == VoltageKind::kQ1) {
        const auto vn = space.voltage().element_nodes(i, j);
        std::array<int, 4> gv;
        for (int l = 0; l < 4; ++l) gv[l] = off_v + vn[l];
        scatter(gv, gv, Avv, trips);
        if (spec.membrane) {
          scatter(gm, gv, Bmv, trips);
          scatter(gv, gm, Bvm, trips);
        }
        if (spec.flexion) {
          scatter(gf, gv, Bfv, trips);
          scatter(gv, gf, Bvf, trips);
        }
        for (int q = 0; q < nq; ++q) {
          const double hv = spec.hsrc * loads.h.eval2(x0 + t.m.xq[q], y0 + t.m.yq[q]);
          for (int l = 0; l < 4; ++l) b[gv[l]] += t.m.w[q] * hv * t.m.N[q][l];
        }
      } else if (spec.vkind == VoltageKind::kPerPoint) {
        const int base = off_v + (j * mesh.nx() + i) * nq;
        for (int q = 0; q < nq; ++q) {
          const int vd = base + q;
          const double w = t.m.w[q];
          trips.emplace_back(vd, vd, w * spec.mass);
          if (spec.membrane)
            for (int a = 0; a < 8; ++a)
              if (gm[a] >= 0) {
                trips.emplace_back(gm[a], vd, w * dmS[q][a]);
                trips.emplace_back(vd, gm[a], w * emS[q][a]);
              }
          if (spec.flexion)
            for (int k = 0; k < 16; ++k)
              if (gf[k] >= 0) {
                trips.emplace_back(gf[k], vd, w * dfH[q][k]);
                trips.emplace_back(vd, gf[k], w * efH[q][k]);
              }
          b[vd] += w * spec.hsrc * loads.h.eval2(x0 + t.m.xq[q], y0 + t.m.yq[q]);
        }
      }
    }

  if (spec.membrane || spec.flexion) add_edge_loads(space, spec, loads, off_f, b);

  out.A = SpMat(n, n);
  out.A.setFromTriplets(trips.begin(), trips.end());
  out.b = std::move(b);
  return out;
}

void require_clamped(const KLSpace& space) {
  if (!space.mesh().clamped().any())
    throw BoundaryConditionError("plate problem needs at least one clamped edge");
}

void check_surface_poly(const Poly3& p, const char* name) {
  if (p.degree_x3() > 0)
    throw ValidationError(std::string(name) + " must not depend on x3");
}

void validate_reduced(const ReducedLoads& loads) {
  check_surface_poly(loads.F[0], "F1");
  check_surface_poly(loads.F[1], "F2");
  check_surface_poly(loads.M[0], "M1");
  check_surface_poly(loads.M[1], "M2");
  check_surface_poly(loads.F3, "F3");
  check_surface_poly(loads.phi_c, "phi_c");
  check_surface_poly(loads.h, "h");
  static const char* side[4] = {"left", "right", "bottom", "top"};
  for (int s = 0; s < 4; ++s) {
    const EdgeLoad& e = loads.edge[s];
    const std::string tag = std::string("edge load (") + side[s] + ")";
    check_surface_poly(e.F[0], tag.c_str());
    check_surface_poly(e.F[1], tag.c_str());
    check_surface_poly(e.M[0], tag.c_str());
    check_surface_poly(e.M[1], tag.c_str());
    check_surface_poly(e.F3, tag.c_str());
  }
}

Eigen::VectorXd solve_sized(const SpMat& A, const Eigen::VectorXd& b) {
  if (A.rows() == 0) return Eigen::VectorXd(0);
  return fem::solve_general(A, b);
}

double quad_form(const Assembled& S, const Eigen::VectorXd& x) {
  return x.size() ? x.dot(S.A * x) : 0.0;
}

double load_form(const Assembled& S, const Eigen::VectorXd& x) {
  return x.size() ? x.dot(S.b) : 0.0;
}

Eigen::VectorXd expand_membrane(const KLSpace& space, const Eigen::VectorXd& xm) {
  const PlateMesh& mesh = space.mesh();
  Eigen::VectorXd full = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  for (int j = 0; j <= mesh.ny(); ++j)
    for (int i = 0; i <= mesh.nx(); ++i) {
      const int idx = space.membrane().index(i, j);
      if (idx < 0) continue;
      full[2 * mesh.node(i, j)] = xm[2 * idx];
      full[2 * mesh.node(i, j) + 1] = xm[2 * idx + 1];
    }
  return full;
}

Eigen::VectorXd expand_bfs(const KLSpace& space, const Eigen::VectorXd& xf) {
  const PlateMesh& mesh = space.mesh();
  const PlateNodeMap& nodes = space.flexion().nodes();
  Eigen::VectorXd full = Eigen::VectorXd::Zero(4 * mesh.num_nodes());
  for (int j = 0; j <= mesh.ny(); ++j)
    for (int i = 0; i <= mesh.nx(); ++i) {
      const int idx = nodes.index(i, j);
      if (idx < 0) continue;
      for (int t = 0; t < 4; ++t) full[4 * mesh.node(i, j) + t] = xf[4 * idx + t];
    }
  return full;
}

double max_deflection_of(const PlateMesh& mesh, const Eigen::VectorXd& u3) {
  double m = 0.0;
  for (int n = 0; n < mesh.num_nodes(); ++n) m = std::max(m, std::abs(u3[4 * n]));
  return m;
}

void gather_fields(const PlateMesh& mesh, const Eigen::VectorXd& ubar,
                   const Eigen::VectorXd& u3, int i, int j, double um[8], double uf[16]) {
  const int nn[4] = {mesh.node(i, j), mesh.node(i + 1, j), mesh.node(i, j + 1),
                     mesh.node(i + 1, j + 1)};
  for (int l = 0; l < 4; ++l) {
    um[2 * l] = ubar[2 * nn[l]];
    um[2 * l + 1] = ubar[2 * nn[l] + 1];
    for (int t = 0; t < 4; ++t) uf[4 * l + t] = u3[4 * nn[l] + t];
  }
}

// One half of the mechanical quadratic form at the computed solution, with
// the tensors already carrying the model prefactors.
double mech_energy(const KLSpace& space, const Tables& t, const Tensor4& Rm,
                   const Tensor4& Rf, const Tensor4* Rmf, const Tensor4* Rfm,
                   const Eigen::VectorXd& ubar, const Eigen::VectorXd& u3) {
  const PlateMesh& mesh = space.mesh();
  double acc = 0.0;
  double um[8], uf[16];
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      gather_fields(mesh, ubar, u3, i, j, um, uf);
      for (int q = 0; q < t.m.nq; ++q) {
        Mat2 s = Mat2::Zero(), hs = Mat2::Zero();
        for (int a = 0; a < 8; ++a) s += um[a] * t.S[q][a];
        for (int k = 0; k < 16; ++k) hs += uf[k] * t.H[q][k];
        double e = Rm.contract(s, s) + Rf.contract(hs, hs);
        if (Rmf) e += Rmf->contract(s, hs) + Rfm->contract(hs, s);
        acc += t.m.w[q] * e;
      }
    }
  return 0.5 * acc;
}

// Averaged element-corner values of (hcoef*h - Em:s - Ef:hess) / denom; the
// discrete strain is element-wise, so shared nodes average the one-sided
// limits.
Eigen::VectorXd corner_voltage(const KLSpace& space, const Eigen::VectorXd& ubar,
                               const Eigen::VectorXd& u3, const Mat2& Em, const Mat2* Ef,
                               double hcoef, const Poly3& h, double denom) {
  const PlateMesh& mesh = space.mesh();
  Eigen::VectorXd L = Eigen::VectorXd::Zero(mesh.num_nodes());
  Eigen::VectorXd cnt = Eigen::VectorXd::Zero(mesh.num_nodes());
  const double hx = mesh.hx(), hy = mesh.hy();
  double um[8], uf[16];
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      gather_fields(mesh, ubar, u3, i, j, um, uf);
      for (int cb = 0; cb < 2; ++cb)
        for (int ca = 0; ca < 2; ++ca) {
          const double xl = ca * hx, yl = cb * hy;
          double mN[4], mNx[4], mNy[4];
          q1_at(hx, hy, xl, yl, mN, mNx, mNy);
          Mat2 s = Mat2::Zero();
          for (int l = 0; l < 4; ++l)
            for (int c = 0; c < 2; ++c)
              s += um[2 * l + c] * strain_basis(mNx[l], mNy[l], c);
          double val = hcoef * h.eval2(mesh.x(i) + xl, mesh.y(j) + yl) -
                       Em.cwiseProduct(s).sum();
          if (Ef) {
            double fN[16], fNx[16], fNy[16], fNxx[16], fNyy[16], fNxy[16];
            bfs_at(hx, hy, xl, yl, fN, fNx, fNy, fNxx, fNyy, fNxy);
            Mat2 hs = Mat2::Zero();
            for (int k = 0; k < 16; ++k) {
              Mat2 Hk;
              Hk << fNxx[k], fNxy[k], fNxy[k], fNyy[k];
              hs += uf[k] * Hk;
            }
            val -= Ef->cwiseProduct(hs).sum();
          }
          const int node = mesh.node(i + ca, j + cb);
          L[node] += val / denom;
          cnt[node] += 1.0;
        }
    }
  L.array() /= cnt.array();
  return L;
}

// Integral mean of the pointwise voltage formula over omega.
double mean_voltage_formula(const KLSpace& space, const Tables& t,
                            const Eigen::VectorXd& ubar, const Eigen::VectorXd& u3,
                            const Mat2& Em, const Mat2* Ef, double hcoef, const Poly3& h,
                            double denom) {
  const PlateMesh& mesh = space.mesh();
  double acc = 0.0;
  double um[8], uf[16];
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      gather_fields(mesh, ubar, u3, i, j, um, uf);
      for (int q = 0; q < t.m.nq; ++q) {
        Mat2 s = Mat2::Zero();
        for (int a = 0; a < 8; ++a) s += um[a] * t.S[q][a];
        double val = hcoef * h.eval2(mesh.x(i) + t.m.xq[q], mesh.y(j) + t.m.yq[q]) -
                     Em.cwiseProduct(s).sum();
        if (Ef) {
          Mat2 hs = Mat2::Zero();
          for (int k = 0; k < 16; ++k) hs += uf[k] * t.H[q][k];
          val -= Ef->cwiseProduct(hs).sum();
        }
        acc += t.m.w[q] * val / denom;
      }
    }
  return acc / (mesh.lx() * mesh.ly());
}

double mean_voltage_per_point(const KLSpace& space, const Tables& t,
                              const Eigen::VectorXd& xv) {
  const PlateMesh& mesh = space.mesh();
  double acc = 0.0;
  int idx = 0;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int q = 0; q < t.m.nq; ++q, ++idx) acc += t.m.w[q] * xv[idx];
  return acc / (mesh.lx() * mesh.ly());
}

double mean_voltage_q1(const KLSpace& space, const Tables& t, const Eigen::VectorXd& L) {
  const PlateMesh& mesh = space.mesh();
  double acc = 0.0;
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const int nn[4] = {mesh.node(i, j), mesh.node(i + 1, j), mesh.node(i, j + 1),
                         mesh.node(i + 1, j + 1)};
      for (int q = 0; q < t.m.nq; ++q)
        for (int l = 0; l < 4; ++l) acc += t.m.w[q] * t.m.N[q][l] * L[nn[l]];
    }
  return acc / (mesh.lx() * mesh.ly());
}

// Nodal copy of a Q1 voltage block (the voltage map is never clamped, so the
// map is a bijection onto the mesh nodes).
Eigen::VectorXd q1_voltage_nodal(const KLSpace& space, const Eigen::VectorXd& xv) {
  const PlateMesh& mesh = space.mesh();
  Eigen::VectorXd L(mesh.num_nodes());
  for (int j = 0; j <= mesh.ny(); ++j)
    for (int i = 0; i <= mesh.nx(); ++i)
      L[mesh.node(i, j)] = xv[space.voltage().index(i, j)];
  return L;
}

void check_admittances(double G, double G1) {
  if (G < 0.0 || G1 < 0.0)
    throw DegenerateCircuitError("circuit admittances must be nonnegative");
}

Eigen::VectorXd nodal_poly(const PlateMesh& mesh, const Poly3& p) {
  Eigen::VectorXd L(mesh.num_nodes());
  for (int j = 0; j <= mesh.ny(); ++j)
    for (int i = 0; i <= mesh.nx(); ++i) L[mesh.node(i, j)] = p.eval2(mesh.x(i), mesh.y(j));
  return L;
}

double poly_mean(const KLSpace& space, const Tables& t, const Poly3& p) {
  const PlateMesh& mesh = space.mesh();
  double acc = 0.0;
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i)
      for (int q = 0; q < t.m.nq; ++q)
        acc += t.m.w[q] * p.eval2(mesh.x(i) + t.m.xq[q], mesh.y(j) + t.m.yq[q]);
  return acc / (mesh.lx() * mesh.ly());
}

}  // namespace

ReducedLoads reduce_loads(const PlateLoads& loads) {
  check_surface_poly(loads.phi_c, "phi_c");
  check_surface_poly(loads.h, "h");
  ReducedLoads r;
  for (int a = 0; a < 2; ++a) {
    r.F[a] = loads.f[a].thickness_moment(0) + loads.g_top[a].at_x3(1.0) +
             loads.g_bot[a].at_x3(-1.0);
    r.M[a] = loads.f[a].thickness_moment(1) * -1.0 + loads.g_top[a].at_x3(1.0) * -1.0 +
             loads.g_bot[a].at_x3(-1.0);
  }
  r.F3 = loads.f[2].thickness_moment(0) + loads.g_top[2].at_x3(1.0) +
         loads.g_bot[2].at_x3(-1.0);
  EdgeLoad e;
  for (int a = 0; a < 2; ++a) {
    e.F[a] = loads.g_edge[a].thickness_moment(0);
    e.M[a] = loads.g_edge[a].thickness_moment(1) * -1.0;
  }
  e.F3 = loads.g_edge[2].thickness_moment(0);
  r.edge = {e, e, e, e};
  r.phi_c = loads.phi_c;
  r.h = loads.h;
  return r;
}

double recover_voltage_local(const EffectiveTensorsThin& tensors, double G,
                             const Mat2& strain, double h_value) {
  check_admittances(G, 0.0);
  const double ct = tensors.cM33 + 2.0 * tensors.vol_Y1 * G;
  if (!(ct > 0.0))
    throw DegenerateCircuitError("voltage coefficient c_M33 + 2 |Y1| G must be positive");
  return (tensors.vol_Y1 * h_value - tensors.eM3.cwiseProduct(strain).sum()) / ct;
}

PlateSolution solve_dirichlet_thin(const EffectiveTensorsThin& tensors,
                                   const ReducedLoads& loads, const KLSpace& space) {
  require_clamped(space);
  validate_reduced(loads);
  const Tables t = make_tables(space.mesh());

  SystemSpec ms;
  ms.Rm = tensors.RM;
  ms.Rm *= 2.0;
  ms.msrc_D = tensors.dM3;
  ms.msrc_field = &loads.phi_c;
  ms.msrc_coef = -2.0;
  const Assembled Sm = assemble_system(space, t, ms, loads);
  const Eigen::VectorXd xm = solve_sized(Sm.A, Sm.b);

  SystemSpec fs;
  fs.membrane = false;
  fs.flexion = true;
  fs.Rf = tensors.RN;
  fs.Rf *= 2.0 / 3.0;
  const Assembled Sf = assemble_system(space, t, fs, loads);
  const Eigen::VectorXd xf = solve_sized(Sf.A, Sf.b);

  PlateSolution sol;
  sol.ubar = expand_membrane(space, xm);
  sol.u3 = expand_bfs(space, xf);
  sol.L30 = nodal_poly(space.mesh(), loads.phi_c);
  sol.mean_voltage = poly_mean(space, t, loads.phi_c);
  sol.max_deflection = max_deflection_of(space.mesh(), sol.u3);
  sol.form_value = quad_form(Sm, xm) + quad_form(Sf, xf);
  sol.load_value = load_form(Sm, xm) + load_form(Sf, xf);
  sol.elastic_energy =
      mech_energy(space, t, ms.Rm, fs.Rf, nullptr, nullptr, sol.ubar, sol.u3);
  return sol;
}

PlateSolution solve_local_mixed_thin(const EffectiveTensorsThin& tensors, double G,
                                     const ReducedLoads& loads, const KLSpace& space) {
  require_clamped(space);
  validate_reduced(loads);
  check_admittances(G, 0.0);
  const double ct = tensors.cM33 + 2.0 * tensors.vol_Y1 * G;
  if (!(ct > 0.0))
    throw DegenerateCircuitError("voltage coefficient c_M33 + 2 |Y1| G must be positive");
  const Tables t = make_tables(space.mesh());

  SystemSpec ms;
  ms.Rm = local_reduction(tensors.RM, tensors.dM3, tensors.eM3, tensors.cM33, G,
                          tensors.vol_Y1);
  ms.Rm *= 2.0;
  ms.msrc_D = tensors.dM3;
  ms.msrc_field = &loads.h;
  ms.msrc_coef = -2.0 * tensors.vol_Y1 / ct;
  const Assembled Sm = assemble_system(space, t, ms, loads);
  const Eigen::VectorXd xm = solve_sized(Sm.A, Sm.b);

  SystemSpec fs;
  fs.membrane = false;
  fs.flexion = true;
  fs.Rf = tensors.RN;
  fs.Rf *= 2.0 / 3.0;
  const Assembled Sf = assemble_system(space, t, fs, loads);
  const Eigen::VectorXd xf = solve_sized(Sf.A, Sf.b);

  PlateSolution sol;
  sol.ubar = expand_membrane(space, xm);
  sol.u3 = expand_bfs(space, xf);
  sol.L30 = corner_voltage(space, sol.ubar, sol.u3, tensors.eM3, nullptr, tensors.vol_Y1,
                           loads.h, ct);
  sol.max_deflection = max_deflection_of(space.mesh(), sol.u3);
  sol.mean_voltage = mean_voltage_formula(space, t, sol.ubar, sol.u3, tensors.eM3,
                                          nullptr, tensors.vol_Y1, loads.h, ct);
  sol.form_value = quad_form(Sm, xm) + quad_form(Sf, xf);
  sol.load_value = load_form(Sm, xm) + load_form(Sf, xf);
  sol.elastic_energy =
      mech_energy(space, t, ms.Rm, fs.Rf, nullptr, nullptr, sol.ubar, sol.u3);
  return sol;
}

PlateSolution solve_nonlocal_mixed_thin(const EffectiveTensorsThin& tensors, double G,
                                        double G1, const ReducedLoads& loads,
                                        const KLSpace& space) {
  require_clamped(space);
  validate_reduced(loads);
  check_admittances(G, G1);
  const double ct = tensors.cM33 + 2.0 * tensors.vol_Y1 * G;
  if (!(ct > 0.0))
    throw DegenerateCircuitError("voltage coefficient c_M33 + 2 |Y1| G must be positive");
  const Tables t = make_tables(space.mesh());

  SystemSpec ms;
  ms.Rm = tensors.RM;
  ms.Rm *= 2.0;
  ms.vkind = G1 > 0.0 ? VoltageKind::kQ1 : VoltageKind::kPerPoint;
  ms.Dm = 2.0 * tensors.dM3;
  ms.Em = 2.0 * tensors.eM3;
  ms.mass = 2.0 * ct;
  ms.grad = 4.0 * tensors.vol_Y1 * G1;
  ms.hsrc = 2.0 * tensors.vol_Y1;
  const Assembled Sm = assemble_system(space, t, ms, loads);
  const Eigen::VectorXd X = solve_sized(Sm.A, Sm.b);
  const Eigen::VectorXd xm = X.head(Sm.nm);
  const Eigen::VectorXd xv = X.segment(Sm.nm, Sm.nv);

  SystemSpec fs;
  fs.membrane = false;
  fs.flexion = true;
  fs.Rf = tensors.RN;
  fs.Rf *= 2.0 / 3.0;
  const Assembled Sf = assemble_system(space, t, fs, loads);
  const Eigen::VectorXd xf = solve_sized(Sf.A, Sf.b);

  PlateSolution sol;
  sol.ubar = expand_membrane(space, xm);
  sol.u3 = expand_bfs(space, xf);
  if (ms.vkind == VoltageKind::kQ1) {
    sol.L30 = q1_voltage_nodal(space, xv);
    sol.mean_voltage = mean_voltage_q1(space, t, sol.L30);
  } else {
    sol.L30 = corner_voltage(space, sol.ubar, sol.u3, tensors.eM3, nullptr,
                             tensors.vol_Y1, loads.h, ct);
    sol.mean_voltage = mean_voltage_per_point(space, t, xv);
  }
  sol.max_deflection = max_deflection_of(space.mesh(), sol.u3);
  sol.form_value = quad_form(Sm, X) + quad_form(Sf, xf);
  sol.load_value = load_form(Sm, X) + load_form(Sf, xf);
  Tensor4 Rm2 = tensors.RM;
  Rm2 *= 2.0;
  sol.elastic_energy =
      mech_energy(space, t, Rm2, fs.Rf, nullptr, nullptr, sol.ubar, sol.u3);
  return sol;
}

PlateSolution solve_dirichlet_comparable(const EffectiveTensorsComparable& tensors,
                                         const ReducedLoads& loads, const KLSpace& space,
                                         DirichletFlexionCoupling coupling) {
  require_clamped(space);
  validate_reduced(loads);
  const Tables t = make_tables(space.mesh());

  SystemSpec s;
  s.flexion = true;
  s.Rm = tensors.RMM;
  s.Rf = tensors.RNN;
  s.Rmf = tensors.RMN;
  s.Rfm = tensors.RNM;
  s.msrc_D = tensors.dMM3;
  s.msrc_field = &loads.phi_c;
  s.msrc_coef = -1.0;
  s.fsrc_D = coupling == DirichletFlexionCoupling::kDMM3 ? tensors.dMM3 : tensors.dNM3;
  s.fsrc_field = &loads.phi_c;
  s.fsrc_coef = -1.0;
  const Assembled S = assemble_system(space, t, s, loads);
  const Eigen::VectorXd X = solve_sized(S.A, S.b);
  const Eigen::VectorXd xm = X.head(S.nm);
  const Eigen::VectorXd xf = X.tail(S.nf);

  PlateSolution sol;
  sol.ubar = expand_membrane(space, xm);
  sol.u3 = expand_bfs(space, xf);
  sol.L30 = nodal_poly(space.mesh(), loads.phi_c);
  sol.mean_voltage = poly_mean(space, t, loads.phi_c);
  sol.max_deflection = max_deflection_of(space.mesh(), sol.u3);
  sol.form_value = quad_form(S, X);
  sol.load_value = load_form(S, X);
  sol.elastic_energy = mech_energy(space, t, tensors.RMM, tensors.RNN, &tensors.RMN,
                                   &tensors.RNM, sol.ubar, sol.u3);
  return sol;
}

PlateSolution solve_mixed_comparable(const EffectiveTensorsComparable& tensors, double G,
                                     double G1, const ReducedLoads& loads,
                                     const KLSpace& space) {
  require_clamped(space);
  validate_reduced(loads);
  check_admittances(G, G1);
  const double cm = tensors.cMM33 + 4.0 * tensors.vol_Y1 * G;
  if (!(cm > 0.0))
    throw DegenerateCircuitError(
        "voltage coefficient c_MM33 + 4 |Y1| G must be positive");
  const Tables t = make_tables(space.mesh());

  SystemSpec s;
  s.flexion = true;
  s.Rm = tensors.RMM;
  s.Rf = tensors.RNN;
  s.Rmf = tensors.RMN;
  s.Rfm = tensors.RNM;
  s.vkind = G1 > 0.0 ? VoltageKind::kQ1 : VoltageKind::kPerPoint;
  s.Dm = tensors.dMM3;
  s.Em = tensors.eMM3;
  s.Df = tensors.dNM3;
  s.Ef = tensors.eMN3;
  s.mass = cm;
  s.grad = 4.0 * tensors.vol_Y1 * G1;
  s.hsrc = 2.0 * tensors.vol_Y1;
  const Assembled S = assemble_system(space, t, s, loads);
  const Eigen::VectorXd X = solve_sized(S.A, S.b);
  const Eigen::VectorXd xm = X.head(S.nm);
  const Eigen::VectorXd xv = X.segment(S.nm, S.nv);
  const Eigen::VectorXd xf = X.tail(S.nf);

  PlateSolution sol;
  sol.ubar = expand_membrane(space, xm);
  sol.u3 = expand_bfs(space, xf);
  if (s.vkind == VoltageKind::kQ1) {
    sol.L30 = q1_voltage_nodal(space, xv);
    sol.mean_voltage = mean_voltage_q1(space, t, sol.L30);
  } else {
    sol.L30 = corner_voltage(space, sol.ubar, sol.u3, tensors.eMM3, &tensors.eMN3,
                             2.0 * tensors.vol_Y1, loads.h, cm);
    sol.mean_voltage = mean_voltage_per_point(space, t, xv);
  }
  sol.max_deflection = max_deflection_of(space.mesh(), sol.u3);
  sol.form_value = quad_form(S, X);
  sol.load_value = load_form(S, X);
  sol.elastic_energy = mech_energy(space, t, tensors.RMM, tensors.RNN, &tensors.RMN,
                                   &tensors.RNM, sol.ubar, sol.u3);
  return sol;
}

}  // namespace pzp
