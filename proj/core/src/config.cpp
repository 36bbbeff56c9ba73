#include "pzp/config.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "pzp/errors.hpp"

namespace pzp {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError(field + ": " + what);
}

void known_keys(const YAML::Node& node, const std::string& section,
                std::initializer_list<const char*> keys) {
  if (!node || !node.IsMap()) return;
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(section + "." + key, "unknown key");
  }
}

double number(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(field, "expected a number");
  }
}

double number_or(const YAML::Node& node, const std::string& field, double fallback) {
  return node ? number(node, field) : fallback;
}

int positive_int(const YAML::Node& node, const std::string& field, int fallback) {
  if (!node) return fallback;
  int v = 0;
  try {
    v = node.as<int>();
  } catch (const YAML::Exception&) {
    fail(field, "expected an integer");
  }
  if (v <= 0) fail(field, "must be positive");
  return v;
}

template <std::size_t N>
std::array<double, N> number_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() != N)
    fail(field, "expected a list of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(node[i], field);
  return out;
}

Poly3 poly(const YAML::Node& node, const std::string& field) {
  if (!node) return Poly3{};
  std::string text;
  try {
    text = node.as<std::string>();
  } catch (const YAML::Exception&) {
    fail(field, "expected a polynomial expression");
  }
  try {
    return Poly3::parse(text);
  } catch (const ParseError& e) {
    fail(field, e.what());
  }
}

std::array<Poly3, 3> poly_vector(const YAML::Node& node, const std::string& field) {
  std::array<Poly3, 3> out{};
  if (!node) return out;
  if (!node.IsSequence() || node.size() != 3)
    fail(field, "expected a list of 3 polynomial expressions");
  for (int i = 0; i < 3; ++i) out[i] = poly(node[i], field + "[" + std::to_string(i) + "]");
  return out;
}

Material parse_phase(const YAML::Node& node, const std::string& section) {
  if (!node || !node.IsMap()) fail(section, "missing phase definition");
  known_keys(node, section, {"lambda", "mu", "R", "d", "c"});
  Material m;
  const bool iso = node["lambda"] || node["mu"];
  if (iso && node["R"]) fail(section + ".R", "give either lambda/mu or R, not both");
  if (iso) {
    if (!node["lambda"] || !node["mu"])
      fail(section, "isotropic phase needs both lambda and mu");
    m.R = ElasticTensor::isotropic(number(node["lambda"], section + ".lambda"),
                                   number(node["mu"], section + ".mu"));
  } else if (node["R"]) {
    m.R = ElasticTensor::from_voigt(number_list<21>(node["R"], section + ".R"));
  } else {
    fail(section, "phase needs lambda/mu or R");
  }
  if (node["d"]) m.d = PiezoTensor::from_rows(number_list<18>(node["d"], section + ".d"));
  if (node["c"]) {
    const auto v = number_list<6>(node["c"], section + ".c");
    // upper triangle c11 c12 c13 c22 c23 c33
    m.c << v[0], v[1], v[2], v[1], v[3], v[4], v[2], v[4], v[5];
  }
  return m;
}

Regime parse_regime(const YAML::Node& node) {
  if (!node) return Regime::kThin;
  const std::string s = node.as<std::string>();
  if (s == "thin") return Regime::kThin;
  if (s == "comparable") return Regime::kComparable;
  fail("regime", "expected 'thin' or 'comparable', got '" + s + "'");
}

CircuitType parse_circuit_type(const YAML::Node& node) {
  if (!node) return CircuitType::kDirichlet;
  const std::string s = node.as<std::string>();
  if (s == "dirichlet") return CircuitType::kDirichlet;
  if (s == "local_mixed") return CircuitType::kLocalMixed;
  if (s == "nonlocal_mixed") return CircuitType::kNonlocalMixed;
  fail("circuit.bc_type", "expected dirichlet, local_mixed or nonlocal_mixed, got '" + s + "'");
}

ClampedEdges parse_clamped(const YAML::Node& node) {
  if (!node) return {true, true, true, true};
  if (!node.IsSequence()) fail("geometry.plate.clamped_edges", "expected a list of edge names");
  ClampedEdges c{};
  for (const auto& item : node) {
    const std::string s = item.as<std::string>();
    if (s == "left")
      c.left = true;
    else if (s == "right")
      c.right = true;
    else if (s == "bottom")
      c.bottom = true;
    else if (s == "top")
      c.top = true;
    else
      fail("geometry.plate.clamped_edges", "unknown edge '" + s + "'");
  }
  return c;
}

void parse_geometry(const YAML::Node& node, RunConfig& cfg) {
  if (!node) return;
  known_keys(node, "geometry", {"inclusion", "cell2d", "cell3d", "plate"});
  if (const YAML::Node inc = node["inclusion"]) {
    known_keys(inc, "geometry.inclusion", {"shape", "size"});
    if (inc["shape"]) {
      try {
        cfg.inclusion_geom.shape = parse_shape(inc["shape"].as<std::string>());
      } catch (const Error& e) {
        fail("geometry.inclusion.shape", e.what());
      }
    }
    cfg.inclusion_geom.size =
        number_or(inc["size"], "geometry.inclusion.size", cfg.inclusion_geom.size);
    if (cfg.inclusion_geom.size <= 0) fail("geometry.inclusion.size", "must be positive");
  }
  if (const YAML::Node c2 = node["cell2d"]) {
    known_keys(c2, "geometry.cell2d", {"n"});
    cfg.cell2d_n = positive_int(c2["n"], "geometry.cell2d.n", cfg.cell2d_n);
  }
  if (const YAML::Node c3 = node["cell3d"]) {
    known_keys(c3, "geometry.cell3d", {"n", "nz"});
    cfg.cell3d_n = positive_int(c3["n"], "geometry.cell3d.n", cfg.cell3d_n);
    cfg.cell3d_nz = positive_int(c3["nz"], "geometry.cell3d.nz", cfg.cell3d_nz);
  }
  if (const YAML::Node pl = node["plate"]) {
    known_keys(pl, "geometry.plate", {"nx", "ny", "lx", "ly", "clamped_edges"});
    cfg.plate.nx = positive_int(pl["nx"], "geometry.plate.nx", cfg.plate.nx);
    cfg.plate.ny = positive_int(pl["ny"], "geometry.plate.ny", cfg.plate.ny);
    cfg.plate.lx = number_or(pl["lx"], "geometry.plate.lx", cfg.plate.lx);
    cfg.plate.ly = number_or(pl["ly"], "geometry.plate.ly", cfg.plate.ly);
    if (cfg.plate.lx <= 0) fail("geometry.plate.lx", "must be positive");
    if (cfg.plate.ly <= 0) fail("geometry.plate.ly", "must be positive");
    cfg.plate.clamped = parse_clamped(pl["clamped_edges"]);
  }
}

void parse_loads(const YAML::Node& node, RunConfig& cfg) {
  if (!node) return;
  known_keys(node, "loads", {"f", "g_top", "g_bot", "g_edge", "phi_c", "h"});
  cfg.loads.f = poly_vector(node["f"], "loads.f");
  cfg.loads.g_top = poly_vector(node["g_top"], "loads.g_top");
  cfg.loads.g_bot = poly_vector(node["g_bot"], "loads.g_bot");
  cfg.loads.g_edge = poly_vector(node["g_edge"], "loads.g_edge");
  cfg.loads.phi_c = poly(node["phi_c"], "loads.phi_c");
  cfg.loads.h = poly(node["h"], "loads.h");
  if (cfg.loads.phi_c.degree_x3() > 0) fail("loads.phi_c", "must not depend on x3");
  if (cfg.loads.h.degree_x3() > 0) fail("loads.h", "must not depend on x3");
}

void enforce_circuit_invariants(const RunConfig& cfg) {
  if (cfg.G < 0) fail("circuit.G", "must be nonnegative");
  if (cfg.G1 < 0) fail("circuit.G1", "must be nonnegative");
  switch (cfg.bc_type) {
    case CircuitType::kDirichlet:
      if (cfg.G != 0) fail("circuit.G", "must vanish for bc_type=dirichlet");
      if (cfg.G1 != 0) fail("circuit.G1", "must vanish for bc_type=dirichlet");
      if (!cfg.loads.h.is_zero()) fail("loads.h", "must vanish for bc_type=dirichlet");
      break;
    case CircuitType::kLocalMixed:
      if (cfg.G1 != 0) fail("circuit.G1", "the local circuit has no gradient admittance");
      [[fallthrough]];
    case CircuitType::kNonlocalMixed:
      if (!cfg.loads.phi_c.is_zero())
        fail("loads.phi_c", "must vanish for the mixed circuits");
      break;
  }
}

RunConfig parse_root(const YAML::Node& root) {
  if (!root.IsMap()) throw ParseError("config: expected a mapping at the top level");
  known_keys(root, "config",
             {"regime", "materials", "geometry", "circuit", "loads", "output"});
  RunConfig cfg;
  cfg.regime = parse_regime(root["regime"]);

  const YAML::Node mats = root["materials"];
  if (!mats) throw ParseError("materials: section is required");
  known_keys(mats, "materials", {"matrix", "inclusion"});
  cfg.matrix = parse_phase(mats["matrix"], "materials.matrix");
  cfg.inclusion = parse_phase(mats["inclusion"], "materials.inclusion");

  parse_geometry(root["geometry"], cfg);

  if (const YAML::Node circ = root["circuit"]) {
    known_keys(circ, "circuit", {"bc_type", "G", "G1"});
    cfg.bc_type = parse_circuit_type(circ["bc_type"]);
    cfg.G = number_or(circ["G"], "circuit.G", 0.0);
    cfg.G1 = number_or(circ["G1"], "circuit.G1", 0.0);
  }

  parse_loads(root["loads"], cfg);
  enforce_circuit_invariants(cfg);

  if (const YAML::Node out = root["output"]) {
    known_keys(out, "output", {"dir"});
    if (out["dir"]) cfg.output_dir = out["dir"].as<std::string>();
  }
  return cfg;
}

}  // namespace

const char* to_string(Regime regime) {
  return regime == Regime::kThin ? "thin" : "comparable";
}

const char* to_string(CircuitType type) {
  switch (type) {
    case CircuitType::kDirichlet:
      return "dirichlet";
    case CircuitType::kLocalMixed:
      return "local_mixed";
    case CircuitType::kNonlocalMixed:
      return "nonlocal_mixed";
  }
  return "?";
}

RunConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return parse_root(root);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace pzp
