#include "fourmg/experiment.hpp"
#include "fourmg/spectrum.hpp"
#include "fourmg/verify_suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using fourmg::BlockVariant;
using fourmg::ExperimentConfig;

int cmd_solve(const std::string& config_path) {
  ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
  return fourmg::run_solve_command(cfg, std::cout);
}

int cmd_table(const std::string& id, const std::string& outdir, int seeds, bool quiet) {
  fourmg::TableRun run = fourmg::reproduce_table(id, seeds, quiet ? nullptr : &std::cout);
  fourmg::print_table_run(run, std::cout);
  if (!outdir.empty()) {
    fourmg::write_table_files(run, outdir);
    std::cout << "wrote " << outdir << "/table_" << id << ".csv\n";
  }
  return run.pass ? 0 : 1;
}

int cmd_spectrum(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw fourmg::ConfigError("config", "cannot open " + config_path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);

  // reuse the experiment schema for the problem block; method/run are unused
  nlohmann::json stub;
  stub["problem"] = j.contains("problem") ? j["problem"] : nlohmann::json::object();
  if (j.contains("output")) stub["output"] = j["output"];
  stub["method"]["solver"] = "gmres";
  stub["method"]["precond"] = "B";
  ExperimentConfig cfg = ExperimentConfig::from_json_string(stub.dump());

  std::vector<std::string> precs = {"B", "Btilde"};
  if (j.contains("precond")) {
    precs.clear();
    for (const auto& p : j["precond"]) precs.push_back(p.get<std::string>());
  }
  std::filesystem::create_directories(cfg.output);
  const std::string path = cfg.output + "/spectrum.csv";
  std::ofstream out(path);
  fourmg::write_spectrum_csv_header(out);
  for (int level : cfg.levels) {
    for (double tau : cfg.taus) {
      fourmg::ProblemSpec spec = cfg.problem_spec();
      fourmg::DiscreteProblem problem =
          fourmg::build_problem(level, spec.bc, spec.a, spec.b, tau);
      for (const auto& p : precs) {
        BlockVariant variant;
        if (p == "B") {
          variant = BlockVariant::B;
        } else if (p == "Btilde") {
          variant = BlockVariant::Btilde;
        } else if (p == "Bd") {
          variant = BlockVariant::Bd;
        } else if (p == "A") {
          variant = BlockVariant::A;
        } else {
          throw fourmg::ConfigError("precond", "unknown preconditioner " + p);
        }
        fourmg::SpectrumReport rep = fourmg::preconditioned_spectrum(problem, variant);
        fourmg::write_spectrum_csv(out, rep, problem.sys->mesh->h(), tau, p);
        std::cout << "level " << level << " tau " << tau << " precond " << p
                  << ": rho=" << rep.rho << " C1=" << rep.C1 << '\n';
      }
    }
  }
  std::cout << "wrote " << path << '\n';
  return 0;
}

int cmd_verify(const std::string& suite) {
  fourmg::VerifyOutcome out = fourmg::run_verify_suite(suite, &std::cout);
  fourmg::print_checks(out, std::cout);
  return out.pass ? 0 : 1;
}

int cmd_mesh_dump(int level, const std::string& outdir) {
  fourmg::Mesh mesh = fourmg::build_lshape_mesh(level);
  std::filesystem::create_directories(outdir);
  const std::string prefix = outdir + "/level" + std::to_string(level) + "_";
  fourmg::dump_mesh_csv(mesh, prefix);
  std::cout << "wrote " << prefix << "{vertices,triangles,boundary}.csv  ("
            << mesh.n_vertices() << " vertices, " << mesh.n_triangles() << " triangles)\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel solvers for discrete fourth-order parabolic systems in mixed form"};
  app.require_subcommand(1);

  std::string config_path, table_id, outdir, suite;
  int level = 3, seeds = -1;
  bool quiet = false;

  auto* solve = app.add_subcommand("solve", "run the experiment grid of a JSON config");
  solve->add_option("config", config_path, "config file")->required();

  auto* table = app.add_subcommand("table", "reproduce a reference iteration table");
  table->add_option("id", table_id, "table id (1-10, r1-r4)")->required();
  table->add_option("--out", outdir, "directory for the measured CSV");
  table->add_option("--seeds", seeds, "override the number of seeds");
  table->add_flag("--quiet", quiet, "suppress per-cell progress");

  auto* spectrum = app.add_subcommand("spectrum", "dense spectra of preconditioned systems");
  spectrum->add_option("config", config_path, "config file")->required();

  auto* verify = app.add_subcommand("verify", "run a property-check suite");
  verify->add_option("suite", suite, "lemmas | theorems | smw | all")->required();

  auto* mesh = app.add_subcommand("mesh-dump", "write mesh CSV files");
  mesh->add_option("level", level, "refinement level")->required();
  mesh->add_option("--out", outdir, "output directory")->default_val("fourmg-out");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config_path);
    if (table->parsed()) return cmd_table(table_id, outdir, seeds, quiet);
    if (spectrum->parsed()) return cmd_spectrum(config_path);
    if (verify->parsed()) return cmd_verify(suite);
    if (mesh->parsed()) return cmd_mesh_dump(level, outdir);
  } catch (const fourmg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
