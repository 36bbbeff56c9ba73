#pragma once

// End-to-end orchestration: material validation, cell solves, effective
// tensors, plate solve, artifact writing. Stages run in order and any stage
// error aborts the run; the CLI maps the exception type back to the stage.

#include <string>
#include <vector>

#include "pzp/config.hpp"
#include "pzp/jsonio.hpp"

namespace pzp {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PropertyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// One regime's tensors are meaningful (per config.regime); the solution and
// the checks always are. corrector_norm is the max-norm over all corrector
// dof vectors of the cell stage; for constant coefficients it vanishes.
struct RunReport {
  Regime regime = Regime::kThin;
  EffectiveTensorsThin thin;
  EffectiveTensorsComparable comparable;
  PlateSolution solution;
  double corrector_norm = 0.0;
  std::vector<StageTiming> timings;
  std::vector<PropertyCheck> checks;
  std::vector<std::string> artifacts;
  bool ok = true;
};

// Runs validate -> cell -> homogenize -> plate -> report and writes
// tensors.json, solution.json, solution.csv, report.json into
// config.output_dir. Every check must pass or the report is marked failed.
RunReport run_pipeline(const RunConfig& config);

// report.json body. Contains timings, so it is not byte-reproducible; the
// tensor and solution documents are.
std::string report_to_json(const RunReport& report);

// Effective-tensor entries and plate summary scalars per cell-mesh level,
// with Richardson rate estimates. A difference below 1e-13 relative marks
// the step "exact" instead of producing a rate.
struct ConvergenceTable {
  std::vector<std::string> columns;
  std::vector<int> levels;
  std::vector<std::vector<double>> values;  // [level][column]
  std::vector<std::vector<double>> rates;   // NaN where undefined
  std::vector<std::vector<bool>> exact;
};

// Replaces the cell mesh size (cell2d.n or cell3d.n per regime) by each
// level; the plate mesh stays fixed. Needs at least 3 levels.
ConvergenceTable convergence_study(const RunConfig& config, const std::vector<int>& levels);

std::string table_to_json(const ConvergenceTable& table);
std::string format_table(const ConvergenceTable& table);

}  // namespace pzp
