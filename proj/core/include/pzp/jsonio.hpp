#pragma once

// JSON serialization of effective tensors and plate solutions.
//
// Writers emit a fixed key order and 17 significant digits, so identical
// inputs produce byte-identical files and reading a written document loses
// nothing. Fourth-order tensors are flattened to 16 numbers with the first
// index outermost, 2x2 matrices to 4 numbers row-major.

#include <string>

#include "pzp/cell2d.hpp"
#include "pzp/cell3d.hpp"
#include "pzp/plate.hpp"

namespace pzp {

std::string to_json(const EffectiveTensorsThin& tensors);
std::string to_json(const EffectiveTensorsComparable& tensors);

// Throws IoError on missing keys, wrong array sizes, or malformed JSON.
EffectiveTensorsThin thin_tensors_from_json(const std::string& text);
EffectiveTensorsComparable comparable_tensors_from_json(const std::string& text);

// Nodal solution document: mesh header, flat dof arrays (ubar two per node,
// u3 four per node carrying the derivative dofs, L30 one per node), then the
// summary scalars.
std::string solution_to_json(const PlateSolution& sol, const PlateMesh& mesh);

// One row per node: x, y, u1, u2, u3, u3_x, u3_y, u3_xy, L30.
std::string solution_to_csv(const PlateSolution& sol, const PlateMesh& mesh);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace pzp
