#pragma once

// Run configuration: a YAML document with nested sections (materials,
// geometry, circuit, loads, output). The exact schema is documented in the
// repository README. Parsing enforces the model invariants up front so that
// every later stage can assume a consistent configuration:
//   dirichlet        G = G1 = 0 and h = 0
//   local_mixed      G1 = 0 and phi_c = 0
//   nonlocal_mixed   phi_c = 0
// All parse errors name the offending field.

#include <string>

#include "pzp/mesh.hpp"
#include "pzp/plate.hpp"
#include "pzp/tensors.hpp"

namespace pzp {

enum class Regime { kThin, kComparable };
enum class CircuitType { kDirichlet, kLocalMixed, kNonlocalMixed };

const char* to_string(Regime regime);
const char* to_string(CircuitType type);

struct PlateGrid {
  int nx = 32, ny = 32;
  double lx = 1.0, ly = 1.0;
  ClampedEdges clamped{true, true, true, true};
};

struct RunConfig {
  Regime regime = Regime::kThin;
  Material matrix;
  Material inclusion;
  InclusionSpec inclusion_geom;
  int cell2d_n = 64;
  int cell3d_n = 16;
  int cell3d_nz = 8;
  PlateGrid plate;
  CircuitType bc_type = CircuitType::kDirichlet;
  double G = 0.0;
  double G1 = 0.0;
  PlateLoads loads;
  std::string output_dir = "out";
};

// Parses the file at `path`. Throws ParseError naming the field on any
// malformed entry or violated invariant, IoError when the file is missing.
RunConfig parse_config(const std::string& path);

// Same, from an in-memory document.
RunConfig parse_config_text(const std::string& text);

}  // namespace pzp
