#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pzp {

enum class Shape { Disk, Square, Laminate };

Shape parse_shape(const std::string& name);

// Inclusion geometry inside the unit cell Y = (-1/2,1/2)^2, centered at the
// origin. Meaning of `size`:
//   Disk     radius; must stay strictly inside Y (size < 1/2)
//   Square   side length, axis aligned; size < 1
//   Laminate width of the slab |y1| < size/2, spanning the full y2 range.
//            The slab touches the y2 boundary by design and is exempt from
//            the strict-interior requirement.
struct InclusionSpec {
  Shape shape = Shape::Disk;
  double size = 0.25;
};

// Uniform n x n grid on Y, periodic across opposite edges. Elements are
// tagged by phase (0 matrix, 1 inclusion) using the element centroid.
// vol_Y1 is the pixelated inclusion area; every cell quadrature integrates
// over the same tagged elements, so this is the consistent |Y1|.
class CellMesh2D {
public:
  static CellMesh2D build(int n, const InclusionSpec& inc);
  static CellMesh2D from_tags(int n, std::vector<std::uint8_t> tags);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  int num_elements() const { return n_ * n_; }
  int element(int i, int j) const { return j * n_ + i; }
  std::uint8_t tag(int e) const { return tags_[e]; }
  std::uint8_t tag(int i, int j) const { return tags_[element(i, j)]; }
  const std::vector<std::uint8_t>& tags() const { return tags_; }

  // lower-left corner of element (i, j)
  double x0(int i) const { return -0.5 + i * h(); }
  double y0(int j) const { return -0.5 + j * h(); }

  int inclusion_count() const;
  double vol_Y1() const;

private:
  int n_ = 0;
  std::vector<std::uint8_t> tags_;
};

// Extrusion of the 2D cell to Z = Y x (-1,1): n x n x nz hexahedra, periodic
// in-plane only. The inclusion prism is Z1 = Y1 x (-1,1); its top and bottom
// faces are the grounded electrodes.
class CellMesh3D {
public:
  static CellMesh3D build(int n, int nz, const InclusionSpec& inc);
  static CellMesh3D from_tags(int n, int nz, std::vector<std::uint8_t> tags2d);

  int n() const { return n_; }
  int nz() const { return nz_; }
  double h() const { return 1.0 / n_; }
  double hz() const { return 2.0 / nz_; }
  int num_elements() const { return n_ * n_ * nz_; }
  int element(int i, int j, int k) const { return (k * n_ + j) * n_ + i; }
  // phase is constant along the extrusion
  std::uint8_t tag(int i, int j) const { return tags2d_[j * n_ + i]; }
  std::uint8_t tag_inplane(int e2d) const { return tags2d_[e2d]; }

  double x0(int i) const { return -0.5 + i * h(); }
  double y0(int j) const { return -0.5 + j * h(); }
  double z0(int k) const { return -1.0 + k * hz(); }

  double vol_Y1() const;

private:
  int n_ = 0, nz_ = 0;
  std::vector<std::uint8_t> tags2d_;
};

struct ClampedEdges {
  bool left = false, right = false, bottom = false, top = false;
  bool any() const { return left || right || bottom || top; }
};

// Rectangle omega = (0,lx) x (0,ly), uniform nx x ny grid. The boundary is
// split per edge into clamped (gamma_D) and free (gamma_N).
class PlateMesh {
public:
  PlateMesh(int nx, int ny, double lx, double ly, ClampedEdges clamped);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return lx_ / nx_; }
  double hy() const { return ly_ / ny_; }
  ClampedEdges clamped() const { return clamped_; }

  int num_elements() const { return nx_ * ny_; }
  int num_nodes() const { return (nx_ + 1) * (ny_ + 1); }
  int node(int i, int j) const { return j * (nx_ + 1) + i; }
  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }

  bool node_clamped(int i, int j) const;

private:
  int nx_, ny_;
  double lx_, ly_;
  ClampedEdges clamped_;
};

}  // namespace pzp
