#include "pzp/mesh.hpp"

#include <cmath>

#include "pzp/errors.hpp"

namespace pzp {

Shape parse_shape(const std::string& name) {
  if (name == "disk") return Shape::Disk;
  if (name == "square") return Shape::Square;
  if (name == "laminate") return Shape::Laminate;
  throw ConfigError("inclusion.shape must be one of disk, square, laminate (got '" + name + "')");
}

namespace {

std::vector<std::uint8_t> classify(int n, const InclusionSpec& inc) {
  if (inc.size < 0.0) throw GeometryError("inclusion.size must be nonnegative");
  switch (inc.shape) {
    case Shape::Disk:
      if (inc.size >= 0.5) throw GeometryError("disk inclusion touches the cell boundary (radius >= 1/2)");
      break;
    case Shape::Square:
      if (inc.size >= 1.0) throw GeometryError("square inclusion touches the cell boundary (side >= 1)");
      break;
    case Shape::Laminate:
      if (inc.size > 1.0) throw GeometryError("laminate width fraction exceeds 1");
      break;
  }
  std::vector<std::uint8_t> tags(static_cast<size_t>(n) * n, 0);
  const double h = 1.0 / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double cx = -0.5 + (i + 0.5) * h;
      const double cy = -0.5 + (j + 0.5) * h;
      bool inside = false;
      switch (inc.shape) {
        case Shape::Disk:
          inside = cx * cx + cy * cy < inc.size * inc.size;
          break;
        case Shape::Square:
          inside = std::max(std::abs(cx), std::abs(cy)) < 0.5 * inc.size;
          break;
        case Shape::Laminate:
          inside = std::abs(cx) < 0.5 * inc.size;
          break;
      }
      if (inside) tags[j * n + i] = 1;
    }
  }
  return tags;
}

}  // namespace

CellMesh2D CellMesh2D::build(int n, const InclusionSpec& inc) {
  if (n < 4) throw GeometryError("cell mesh needs n >= 4");
  return from_tags(n, classify(n, inc));
}

CellMesh2D CellMesh2D::from_tags(int n, std::vector<std::uint8_t> tags) {
  if (n < 1 || tags.size() != static_cast<size_t>(n) * n)
    throw GeometryError("cell tag array does not match n x n");
  CellMesh2D m;
  m.n_ = n;
  m.tags_ = std::move(tags);
  return m;
}

int CellMesh2D::inclusion_count() const {
  int c = 0;
  for (auto t : tags_) c += t;
  return c;
}

double CellMesh2D::vol_Y1() const { return inclusion_count() * h() * h(); }

CellMesh3D CellMesh3D::build(int n, int nz, const InclusionSpec& inc) {
  if (n < 4) throw GeometryError("cell mesh needs n >= 4");
  if (nz < 1) throw GeometryError("cell mesh needs nz >= 1");
  return from_tags(n, nz, classify(n, inc));
}

CellMesh3D CellMesh3D::from_tags(int n, int nz, std::vector<std::uint8_t> tags2d) {
  if (n < 1 || nz < 1 || tags2d.size() != static_cast<size_t>(n) * n)
    throw GeometryError("cell tag array does not match n x n");
  CellMesh3D m;
  m.n_ = n;
  m.nz_ = nz;
  m.tags2d_ = std::move(tags2d);
  return m;
}

double CellMesh3D::vol_Y1() const {
  int c = 0;
  for (auto t : tags2d_) c += t;
  return c * h() * h();
}

PlateMesh::PlateMesh(int nx, int ny, double lx, double ly, ClampedEdges clamped)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), clamped_(clamped) {
  if (nx < 1 || ny < 1) throw GeometryError("plate mesh needs nx, ny >= 1");
  if (lx <= 0.0 || ly <= 0.0) throw GeometryError("plate dimensions must be positive");
}

bool PlateMesh::node_clamped(int i, int j) const {
  if (clamped_.left && i == 0) return true;
  if (clamped_.right && i == nx_) return true;
  if (clamped_.bottom && j == 0) return true;
  if (clamped_.top && j == ny_) return true;
  return false;
}

}  // namespace pzp
