// Command-line front end: validation, focal/pseudo-focal detection, index
// computation, sigma scans, theorem verification, and example emission.
//
// Exit codes: 0 success, 1 usage, 2 schema, 3 regime, 4 verification failure.

#include "msturm/errors.hpp"
#include "msturm/generators.hpp"
#include "msturm/io.hpp"
#include "msturm/pseudo.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSchema = 2;
constexpr int kExitRegime = 3;
constexpr int kExitVerification = 4;

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run(int argc, char** argv) {
  CLI::App app{"Morse-Sturm index toolkit"};
  app.require_subcommand(1);

  std::string problem_path, out_path, emit_path, space_name = "h0", example_name;
  double sigma = 1.0, t_lo = 1e-3, k_value = 22.206609902451056;
  int mesh = 128, grid = 50;
  std::uint64_t seed = 1;
  int degree = 2;
  double norm_bound = 20.0;
  bool two_endpoint_example = false;

  auto* validate_cmd = app.add_subcommand("validate", "check a problem file");
  validate_cmd->add_option("--problem", problem_path, "problem file")->required();

  auto* focal_cmd = app.add_subcommand("focal", "detect focal instants");
  focal_cmd->add_option("--problem", problem_path)->required();
  focal_cmd->add_option("--tlo", t_lo, "scan start (default 1e-3)");

  auto* pseudo_cmd = app.add_subcommand("pseudo-focal", "detect pseudo-focal instants");
  pseudo_cmd->add_option("--problem", problem_path)->required();
  pseudo_cmd->add_option("--tlo", t_lo);

  auto* index_cmd = app.add_subcommand("index", "index and nullity of the restricted form");
  index_cmd->add_option("--problem", problem_path)->required();
  index_cmd->add_option("--sigma", sigma)->required();
  index_cmd->add_option("--mesh", mesh)->required();
  index_cmd->add_option("--space", space_name, "h0 or hstar");

  auto* scan_cmd = app.add_subcommand("scan", "index functions along a sigma grid");
  scan_cmd->add_option("--problem", problem_path)->required();
  scan_cmd->add_option("--grid", grid)->required();
  scan_cmd->add_option("--mesh", mesh)->required();
  scan_cmd->add_option("--out", out_path, "CSV output path")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run all theorem checks");
  verify_cmd->add_option("--problem", problem_path)->required();
  verify_cmd->add_option("--grid", grid)->required();
  verify_cmd->add_option("--mesh", mesh)->required();

  auto* example_cmd = app.add_subcommand("example", "emit a generated problem file");
  example_cmd
      ->add_option("name", example_name, "flat|static-sphere|flat-admissible|random")
      ->required();
  example_cmd->add_option("--k", k_value, "curvature for static-sphere");
  example_cmd->add_option("--seed", seed, "seed for random");
  example_cmd->add_option("--degree", degree, "polynomial degree for random");
  example_cmd->add_option("--norm-bound", norm_bound, "max |R| for random");
  example_cmd->add_flag("--two-endpoint", two_endpoint_example,
                        "add the endpoint subspace Q (static-sphere)");
  example_cmd->add_option("--emit", emit_path, "output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (example_cmd->parsed()) {
    msturm::MorseSturmProblem problem = [&] {
      if (example_name == "flat") return msturm::flat_problem(3);
      if (example_name == "static-sphere") {
        return msturm::static_constant_curvature_problem(k_value, two_endpoint_example);
      }
      if (example_name == "flat-admissible") return msturm::flat_admissible_problem();
      if (example_name == "random") return msturm::random_problem(seed, degree, norm_bound);
      throw CLI::ValidationError("example", "unknown example name: " + example_name);
    }();
    if (emit_path.empty()) {
      emit(msturm::problem_to_json(problem));
    } else {
      msturm::save_problem(problem, emit_path);
    }
    return 0;
  }

  const msturm::MorseSturmProblem problem = msturm::load_problem(problem_path);

  if (validate_cmd->parsed()) {
    const msturm::ValidationReport report = msturm::validate(problem);
    emit(msturm::to_json(report));
    return report.ok ? 0 : 1;
  }
  if (focal_cmd->parsed()) {
    emit(msturm::to_json(msturm::focal_instants(problem, t_lo)));
    return 0;
  }
  if (pseudo_cmd->parsed()) {
    emit(msturm::to_json(msturm::pseudo_focal_instants(problem, t_lo)));
    return 0;
  }
  if (index_cmd->parsed()) {
    if (space_name != "h0" && space_name != "hstar") {
      std::cerr << "index: --space must be h0 or hstar\n";
      return kExitUsage;
    }
    const auto kind = space_name == "h0" ? msturm::SpaceKind::h0 : msturm::SpaceKind::hstar;
    emit(msturm::to_json(msturm::index_and_nullity(problem, sigma, mesh, kind)));
    return 0;
  }
  if (scan_cmd->parsed()) {
    const msturm::IndexScan result = msturm::scan(problem, grid, mesh);
    std::ofstream out(out_path);
    if (!out) throw msturm::SchemaError("cannot write CSV: " + out_path);
    out << msturm::scan_to_csv(result);
    emit(msturm::scan_summary_json(result));
    return 0;
  }
  if (verify_cmd->parsed()) {
    const msturm::VerificationReport report = msturm::verify(problem, grid, mesh);
    emit(msturm::to_json(report));
    return report.all_pass() ? 0 : kExitVerification;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const msturm::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const msturm::RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return kExitRegime;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
