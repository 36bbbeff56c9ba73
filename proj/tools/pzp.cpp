// Command-line front end: configuration checking, homogenization, plate
// solves from stored tensors, the full pipeline, the acceptance suite and
// convergence studies. Every failure exits nonzero with a stage-tagged
// diagnostic on stderr.

#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "pzp/config.hpp"
#include "pzp/errors.hpp"
#include "pzp/jsonio.hpp"
#include "pzp/pipeline.hpp"
#include "verify/criteria.hpp"

namespace {

using namespace pzp;

int fail(const char* stage, int code, const std::exception& e) {
  std::cerr << "pzp: [" << stage << "] " << e.what() << "\n";
  return code;
}

// Stage-tagged exit codes: config 2, validate 3, solve 4, plate 5, io 6.
int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    return fail("validate", 3, e);
  } catch (const DegenerateMaterialError& e) {
    return fail("validate", 3, e);
  } catch (const DegenerateCircuitError& e) {
    return fail("plate", 5, e);
  } catch (const BoundaryConditionError& e) {
    return fail("plate", 5, e);
  } catch (const GeometryError& e) {
    return fail("config", 2, e);
  } catch (const ConfigError& e) {
    return fail("config", 2, e);
  } catch (const SolverError& e) {
    return fail("solve", 4, e);
  } catch (const IoError& e) {
    return fail("io", 6, e);
  } catch (const std::exception& e) {
    return fail("error", 1, e);
  }
}

void check_phase(const Material& m, const char* name) {
  const ValidationReport v = validate_material(m);
  if (v.ok) return;
  std::string msg = std::string("materials.") + name;
  for (const std::string& issue : v.issues) msg += ": " + issue;
  throw ValidationError(msg);
}

std::string emit(const RunConfig& cfg, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = cfg.output_dir + "/" + name;
  write_text_file(path, body);
  return path;
}

int cmd_validate(const std::string& config_path) {
  const RunConfig cfg = parse_config(config_path);
  check_phase(cfg.matrix, "matrix");
  check_phase(cfg.inclusion, "inclusion");
  const ValidationReport vm = validate_material(cfg.matrix);
  const ValidationReport vi = validate_material(cfg.inclusion);
  std::cout << "config ok: regime " << to_string(cfg.regime) << ", circuit "
            << to_string(cfg.bc_type) << "\n";
  std::cout << "matrix: " << (vm.electric ? "active" : "passive")
            << ", elastic margin " << vm.elastic_margin << "\n";
  std::cout << "inclusion: " << (vi.electric ? "active" : "passive")
            << ", elastic margin " << vi.elastic_margin << "\n";
  return 0;
}

int cmd_homogenize(const std::string& config_path) {
  const RunConfig cfg = parse_config(config_path);
  check_phase(cfg.matrix, "matrix");
  check_phase(cfg.inclusion, "inclusion");
  std::string body;
  if (cfg.regime == Regime::kThin) {
    const CellMesh2D mesh = CellMesh2D::build(cfg.cell2d_n, cfg.inclusion_geom);
    body = to_json(homogenize_thin(mesh, cfg.matrix, cfg.inclusion));
  } else {
    const CellMesh3D mesh =
        CellMesh3D::build(cfg.cell3d_n, cfg.cell3d_nz, cfg.inclusion_geom);
    body = to_json(homogenize_comparable(mesh, cfg.matrix, cfg.inclusion));
  }
  std::cout << emit(cfg, "tensors.json", body) << "\n";
  return 0;
}

int cmd_plate(const std::string& config_path, const std::string& tensors_path) {
  const RunConfig cfg = parse_config(config_path);
  const std::string text = read_text_file(tensors_path);
  const ReducedLoads loads = reduce_loads(cfg.loads);
  const PlateMesh mesh(cfg.plate.nx, cfg.plate.ny, cfg.plate.lx, cfg.plate.ly,
                       cfg.plate.clamped);
  const KLSpace space(mesh);

  PlateSolution sol;
  if (cfg.regime == Regime::kThin) {
    const EffectiveTensorsThin E = thin_tensors_from_json(text);
    switch (cfg.bc_type) {
      case CircuitType::kDirichlet:
        sol = solve_dirichlet_thin(E, loads, space);
        break;
      case CircuitType::kLocalMixed:
        sol = solve_local_mixed_thin(E, cfg.G, loads, space);
        break;
      case CircuitType::kNonlocalMixed:
        sol = solve_nonlocal_mixed_thin(E, cfg.G, cfg.G1, loads, space);
        break;
    }
  } else {
    const EffectiveTensorsComparable C = comparable_tensors_from_json(text);
    if (cfg.bc_type == CircuitType::kDirichlet)
      sol = solve_dirichlet_comparable(C, loads, space);
    else
      sol = solve_mixed_comparable(C, cfg.G, cfg.G1, loads, space);
  }

  std::cout << emit(cfg, "solution.json", solution_to_json(sol, mesh)) << "\n";
  std::cout << emit(cfg, "solution.csv", solution_to_csv(sol, mesh)) << "\n";
  std::cout << "max deflection " << sol.max_deflection << ", elastic energy "
            << sol.elastic_energy << "\n";
  return 0;
}

int cmd_run(const std::string& config_path) {
  const RunConfig cfg = parse_config(config_path);
  const RunReport report = run_pipeline(cfg);
  for (const std::string& path : report.artifacts) std::cout << path << "\n";
  std::cout << "corrector norm " << report.corrector_norm << ", max deflection "
            << report.solution.max_deflection << "\n";
  if (!report.ok) {
    std::cerr << "pzp: [report] failed property checks:";
    for (const PropertyCheck& c : report.checks)
      if (!c.pass) std::cerr << " " << c.name;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

int cmd_verify() { return verify::run_all_criteria(std::cout) ? 0 : 7; }

int cmd_convergence(const std::string& config_path, const std::vector<int>& levels) {
  const RunConfig cfg = parse_config(config_path);
  const ConvergenceTable table = convergence_study(cfg, levels);
  std::cout << format_table(table);
  std::cout << emit(cfg, "convergence.json", table_to_json(table)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effective models of thin piezoelectric plates with circuits"};
  app.require_subcommand(1);

  std::string config_path, tensors_path;
  std::vector<int> levels;

  CLI::App* validate =
      app.add_subcommand("validate", "parse a configuration and check the material data");
  validate->add_option("config", config_path, "YAML configuration file")->required();

  CLI::App* homogenize = app.add_subcommand(
      "homogenize", "solve the cell problems and write the effective tensors");
  homogenize->add_option("config", config_path, "YAML configuration file")->required();

  CLI::App* plate = app.add_subcommand(
      "plate", "solve the homogenized plate problem from stored effective tensors");
  plate->add_option("config", config_path, "YAML configuration file")->required();
  plate->add_option("--tensors", tensors_path, "effective-tensor JSON document")
      ->required();

  CLI::App* run =
      app.add_subcommand("run", "full pipeline: validate, homogenize, plate, report");
  run->add_option("config", config_path, "YAML configuration file")->required();

  app.add_subcommand("verify", "run the acceptance criteria suite");

  CLI::App* convergence =
      app.add_subcommand("convergence", "effective tensors across cell-mesh levels");
  convergence->add_option("config", config_path, "YAML configuration file")->required();
  convergence->add_option("--levels", levels, "comma-separated cell mesh sizes")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return guarded([&] { return cmd_validate(config_path); });
  if (homogenize->parsed()) return guarded([&] { return cmd_homogenize(config_path); });
  if (plate->parsed())
    return guarded([&] { return cmd_plate(config_path, tensors_path); });
  if (run->parsed()) return guarded([&] { return cmd_run(config_path); });
  if (convergence->parsed())
    return guarded([&] { return cmd_convergence(config_path, levels); });
  return guarded([&] { return cmd_verify(); });
}
