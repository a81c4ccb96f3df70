#include "fourmg/experiment.hpp"

#include "fourmg/kernels.hpp"
#include "fourmg/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fourmg {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (example != 0 && example != 1 && example != 2)
    throw ConfigError("problem.example", "must be 1, 2 or \"custom\"");
  if (example == 0 && (!(a_const > 0.0) || !(b_const > 0.0)))
    throw ConfigError("problem.a", "custom coefficients must be positive");
  if (levels.empty()) throw ConfigError("problem.level", "at least one level required");
  for (int l : levels)
    if (l < 1 || l > 12) throw ConfigError("problem.level", "levels must be in [1, 12]");
  if (taus.empty()) throw ConfigError("problem.tau", "at least one tau required");
  for (double t : taus)
    if (!(t > 0.0)) throw ConfigError("problem.tau", "tau must be positive");
  if (solver != "mg" && solver != "gmres")
    throw ConfigError("method.solver", "must be \"mg\" or \"gmres\"");
  if (smoother != "cgs" && smoother != "cj" && smoother != "dgs")
    throw ConfigError("method.smoother", "must be \"cgs\", \"cj\" or \"dgs\"");
  if (solver == "mg") {
    if (precond != "none")
      throw ConfigError("method.precond", "the multigrid solver takes no preconditioner");
    if (smoother == "dgs")
      throw ConfigError("method.smoother",
                        "the distributive smoother applies to the lumped preconditioner "
                        "systems, not to the discrete operator itself");
  } else {
    if (precond != "none" && precond != "A" && precond != "B" && precond != "Btilde" &&
        precond != "Bd")
      throw ConfigError("method.precond", "must be one of none, A, B, Btilde, Bd");
    if (precond == "Bd" && inner != "gs")
      throw ConfigError("method.inner", "precond Bd requires inner = \"gs\"");
    if (inner != "mg" && inner != "gs")
      throw ConfigError("method.inner", "must be \"mg\" or \"gs\"");
    if (inner == "gs" && precond != "Bd")
      throw ConfigError("method.inner", "inner = \"gs\" is only used with precond Bd");
    if (smoother == "dgs" && inner == "mg" && precond != "B" && precond != "Btilde")
      throw ConfigError("method.smoother", "dgs cycles require precond B or Btilde");
  }
  if (pre < 0 || post < 0 || pre + post == 0)
    throw ConfigError("method.pre", "need pre + post >= 1");
  if (!(damping > 0.0 && damping <= 1.0))
    throw ConfigError("method.damping", "must lie in (0, 1]");
  if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("method.omega", "must lie in (0, 1]");
  if (gs_sweeps < 1 || jacobi_sweeps < 1)
    throw ConfigError("method.gs_sweeps", "inner sweep counts must be >= 1");
  if (gs_steps < 1) throw ConfigError("method.gs_steps", "must be >= 1");
  if (coarse_level < 1) throw ConfigError("method.coarse_level", "must be >= 1");
  for (int l : levels)
    if (coarse_level > l)
      throw ConfigError("method.coarse_level", "must not exceed the finest level");
  if (!(tol > 0.0)) throw ConfigError("run.tol", "must be positive");
  if (maxit < 1) throw ConfigError("run.maxit", "must be >= 1");
  if (seeds.empty()) throw ConfigError("run.seeds", "at least one seed required");
}

std::string ExperimentConfig::method_string() const {
  if (solver == "mg") return "mg-" + smoother;
  if (precond == "Bd") return "gmres-gs" + std::to_string(gs_steps);
  if (precond == "none") return "gmres";
  return "gmres-" + smoother;
}

ProblemSpec ExperimentConfig::problem_spec() const {
  if (example == 0)
    return {Coefficient::constant(a_const), Coefficient::constant(b_const), BcSpec{bc}};
  return example_problem(example, bc);
}

namespace {

std::vector<double> number_list(const json& j, const char* field) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_number()) throw ConfigError(field, "expected a number or list of numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(field, "expected a number or list of numbers");
  }
  return out;
}

CycleType parse_cycle(const std::string& s) {
  if (s == "v") return CycleType::V;
  if (s == "w") return CycleType::W;
  throw ConfigError("method.cycle", "must be \"v\" or \"w\"");
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("problem")) {
    const json& p = j["problem"];
    if (p.contains("example")) {
      if (p["example"].is_string()) {
        if (p["example"] != "custom")
          throw ConfigError("problem.example", "must be 1, 2 or \"custom\"");
        cfg.example = 0;
      } else {
        cfg.example = p["example"].get<int>();
      }
    }
    if (p.contains("a")) cfg.a_const = p["a"].get<double>();
    if (p.contains("b")) cfg.b_const = p["b"].get<double>();
    if (p.contains("bc")) {
      std::string bc = p["bc"].get<std::string>();
      if (bc == "all_dirichlet") {
        cfg.bc = BcKind::AllDirichlet;
      } else if (bc == "mixed_corner") {
        cfg.bc = BcKind::MixedCorner;
      } else {
        throw ConfigError("problem.bc", "must be \"all_dirichlet\" or \"mixed_corner\"");
      }
    }
    if (p.contains("tau")) cfg.taus = number_list(p["tau"], "problem.tau");
    if (p.contains("level")) {
      cfg.levels.clear();
      for (double v : number_list(p["level"], "problem.level"))
        cfg.levels.push_back(static_cast<int>(v));
    }
  }
  if (j.contains("method")) {
    const json& m = j["method"];
    if (m.contains("solver")) cfg.solver = m["solver"].get<std::string>();
    if (m.contains("smoother")) cfg.smoother = m["smoother"].get<std::string>();
    if (m.contains("cycle")) cfg.cycle = parse_cycle(m["cycle"].get<std::string>());
    if (m.contains("pre")) cfg.pre = m["pre"].get<int>();
    if (m.contains("post")) cfg.post = m["post"].get<int>();
    if (m.contains("damping")) cfg.damping = m["damping"].get<double>();
    if (m.contains("omega")) cfg.omega = m["omega"].get<double>();
    if (m.contains("gs_sweeps")) cfg.gs_sweeps = m["gs_sweeps"].get<int>();
    if (m.contains("jacobi_sweeps")) cfg.jacobi_sweeps = m["jacobi_sweeps"].get<int>();
    if (m.contains("precond")) cfg.precond = m["precond"].get<std::string>();
    if (m.contains("inner")) cfg.inner = m["inner"].get<std::string>();
    if (m.contains("gs_steps")) cfg.gs_steps = m["gs_steps"].get<int>();
    if (m.contains("coarse_level")) cfg.coarse_level = m["coarse_level"].get<int>();
  }
  bool seeds_given = false;
  if (j.contains("run")) {
    const json& r = j["run"];
    if (r.contains("tol")) cfg.tol = r["tol"].get<double>();
    if (r.contains("maxit")) cfg.maxit = r["maxit"].get<int>();
    if (r.contains("seeds")) {
      cfg.seeds.clear();
      for (const auto& s : r["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
      seeds_given = true;
    }
  }
  if (!seeds_given) {
    if (const char* env = std::getenv(kSeedEnvVar)) cfg.seeds = {std::strtoull(env, nullptr, 10)};
  }
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

std::string ExperimentConfig::to_json_string() const {
  json j;
  j["problem"]["example"] = example == 0 ? json("custom") : json(example);
  if (example == 0) {
    j["problem"]["a"] = a_const;
    j["problem"]["b"] = b_const;
  }
  j["problem"]["bc"] = bc == BcKind::AllDirichlet ? "all_dirichlet" : "mixed_corner";
  j["problem"]["tau"] = taus;
  j["problem"]["level"] = levels;
  j["method"]["solver"] = solver;
  j["method"]["smoother"] = smoother;
  j["method"]["cycle"] = cycle == CycleType::V ? "v" : "w";
  j["method"]["pre"] = pre;
  j["method"]["post"] = post;
  j["method"]["damping"] = damping;
  j["method"]["omega"] = omega;
  j["method"]["gs_sweeps"] = gs_sweeps;
  j["method"]["jacobi_sweeps"] = jacobi_sweeps;
  j["method"]["precond"] = precond;
  j["method"]["inner"] = inner;
  j["method"]["gs_steps"] = gs_steps;
  j["method"]["coarse_level"] = coarse_level;
  j["run"]["tol"] = tol;
  j["run"]["maxit"] = maxit;
  j["run"]["seeds"] = seeds;
  j["output"] = output;
  return j.dump(2);
}

SolverEngine::SolverEngine(const ExperimentConfig& cfg, LevelChain chain_slice, double tau)
    : cfg_(cfg), chain_(std::move(chain_slice)) {
  fine_ = DiscreteProblem{chain_.back()->sys, tau};
  op_ = build_block(fine_, BlockVariant::A);
  rhs_.assign(2 * static_cast<std::size_t>(op_.n), 0.0);
  std::copy(fine_.sys->load.begin(), fine_.sys->load.end(), rhs_.begin());

  SmootherConfig sm;
  sm.kind = cfg.smoother == "cj"    ? SmootherConfig::Kind::CollectiveJacobi
            : cfg.smoother == "dgs" ? SmootherConfig::Kind::Distributive
                                    : SmootherConfig::Kind::CollectiveGS;
  sm.theta = cfg.damping;
  sm.omega = cfg.omega;
  sm.gs_sweeps = cfg.gs_sweeps;
  sm.jacobi_sweeps = cfg.jacobi_sweeps;

  if (cfg.solver == "mg") {
    hier_ = build_hierarchy(chain_, tau, BlockVariant::A, sm, cfg.cycle, cfg.pre, cfg.post);
    has_hier_ = true;
  } else if (cfg.inner == "mg" && cfg.precond != "none") {
    BlockVariant target = cfg.precond == "A"        ? BlockVariant::A
                          : cfg.precond == "Btilde" ? BlockVariant::Btilde
                                                    : BlockVariant::B;
    hier_ = build_hierarchy(chain_, tau, target, sm, cfg.cycle, cfg.pre, cfg.post);
    has_hier_ = true;
  }
  if (has_hier_) work_ = MGWork::create(hier_);
}

SolveReport SolverEngine::solve(std::uint64_t seed, Vec* solution) {
  if (cfg_.solver == "mg") return mg_solve(hier_, rhs_, cfg_.tol, cfg_.maxit, seed, solution);

  const std::size_t m = rhs_.size();
  LinOp apply_A = [this](const Vec& in, Vec& out) {
    out.resize(in.size());
    op_.apply(in.data(), out.data());
  };
  LinOp apply_P;
  if (cfg_.precond == "none") {
    apply_P = identity_op();
  } else if (cfg_.precond == "Bd") {
    const int n = op_.n;
    const SparseMatrix* M = &fine_.sys->M;
    const int steps = cfg_.gs_steps;
    apply_P = [n, M, steps](const Vec& in, Vec& out) {
      // swap(Bd^-1 r): the small-tau system is preconditioned in (u,v)
      // ordering, which amounts to crossing the halves here
      out.assign(in.size(), 0.0);
      for (int s = 0; s < steps; ++s) {
        scalar_gs_sweep(*M, 1.0, in.data() + n, out.data());     // z_v ~ M^-1 r_u
        scalar_gs_sweep(*M, 1.0, in.data(), out.data() + n);     // z_u ~ M^-1 r_v
      }
    };
  } else {
    apply_P = [this](const Vec& in, Vec& out) { mg_precondition(hier_, work_, in, out); };
  }

  Vec x0 = random_vector(m, seed);
  auto [x, rep] = fgmres(apply_A, apply_P, rhs_, x0, cfg_.tol, cfg_.maxit);
  if (solution) *solution = std::move(x);
  return rep;
}

std::vector<CellResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int max_level = *std::max_element(cfg.levels.begin(), cfg.levels.end());
  LevelChain chain = build_level_chain(cfg.problem_spec(), cfg.coarse_level, max_level);

  std::vector<CellResult> results;
  for (int level : cfg.levels) {
    LevelChain slice(chain.begin(), chain.begin() + (level - cfg.coarse_level + 1));
    for (double tau : cfg.taus) {
      SolverEngine engine(cfg, slice, tau);
      for (std::uint64_t seed : cfg.seeds)
        results.push_back({level, tau, seed, engine.solve(seed)});
    }
  }
  return results;
}

std::string format_h(int level) { return "1/" + std::to_string(1 << level); }

namespace {

std::string format_tau(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", tau);
  return buf;
}

std::string example_string(const ExperimentConfig& cfg) {
  return cfg.example == 0 ? "custom" : std::to_string(cfg.example);
}

} // namespace

void write_results_csv(const ExperimentConfig& cfg, const std::vector<CellResult>& results,
                       std::ostream& out) {
  out << "example,bc,h,tau,method,precond,cycle,pre,post,seed,iters,converged,conv_factor,"
         "wall_ms\n";
  for (const auto& r : results) {
    char tail[96];
    std::snprintf(tail, sizeof tail, "%d,%d,%.6g,%.3f", r.report.iterations,
                  r.report.converged ? 1 : 0, r.report.conv_factor, r.report.wall_ms);
    out << example_string(cfg) << ','
        << (cfg.bc == BcKind::AllDirichlet ? "all_dirichlet" : "mixed_corner") << ','
        << format_h(r.level) << ',' << format_tau(r.tau) << ',' << cfg.method_string() << ','
        << (cfg.solver == "mg" ? "-" : cfg.precond) << ','
        << (cfg.cycle == CycleType::V ? 'v' : 'w') << ',' << cfg.pre << ',' << cfg.post << ','
        << r.seed << ',' << tail << '\n';
  }
}

std::string manifest_json(const ExperimentConfig& cfg) {
  json j = json::parse(cfg.to_json_string());
  j["generator"]["name"] = "fourmg";
  j["generator"]["version"] = kVersion;
  return j.dump(2);
}

int run_solve_command(const ExperimentConfig& cfg, std::ostream& log) {
  std::filesystem::create_directories(cfg.output);
  auto results = run_experiment(cfg);
  {
    std::ofstream csv(cfg.output + "/results.csv");
    write_results_csv(cfg, results, csv);
  }
  {
    std::ofstream mf(cfg.output + "/manifest.json");
    mf << manifest_json(cfg) << '\n';
  }
  int failures = 0;
  for (const auto& r : results)
    if (!r.report.converged) failures++;
  log << "wrote " << results.size() << " rows to " << cfg.output << "/results.csv";
  if (failures) log << " (" << failures << " cells did not converge)";
  log << '\n';
  return 0;
}

TableRun run_table_spec(const TableSpec& spec, int seed_count, std::ostream* progress) {
  TableRun run;
  run.spec = &spec;
  run.pass = true;

  const int max_level = *std::max_element(spec.levels.begin(), spec.levels.end());

  for (int row = 0; row < static_cast<int>(spec.row_configs.size()); ++row) {
    ExperimentConfig cfg = spec.row_configs[row];
    cfg.levels = spec.levels;
    cfg.taus = spec.taus;
    if (seed_count > 0) {
      cfg.seeds.clear();
      for (int s = 0; s < seed_count; ++s) cfg.seeds.push_back(s);
    }
    cfg.validate();
    LevelChain chain = build_level_chain(cfg.problem_spec(), cfg.coarse_level, max_level);

    for (std::size_t li = 0; li < spec.levels.size(); ++li) {
      const int level = spec.levels[li];
      LevelChain slice(chain.begin(), chain.begin() + (level - cfg.coarse_level + 1));
      for (std::size_t ti = 0; ti < spec.taus.size(); ++ti) {
        const double tau = spec.taus[ti];
        SolverEngine engine(cfg, slice, tau);
        TableCell cell;
        cell.row = row;
        cell.level = level;
        cell.tau = tau;
        cell.converged = true;
        cell.wall_ms = 1e300;
        for (std::uint64_t seed : cfg.seeds) {
          SolveReport rep = engine.solve(seed);
          cell.iters_mean += rep.iterations;
          cell.conv_factor += rep.conv_factor;
          // minimum over seeds: the robust wall-clock estimator on shared
          // hardware (iteration counts barely vary across seeds)
          cell.wall_ms = std::min(cell.wall_ms, rep.wall_ms);
          cell.converged = cell.converged && rep.converged;
        }
        const double ns = static_cast<double>(cfg.seeds.size());
        cell.iters_mean /= ns;
        cell.conv_factor /= ns;
        cell.iters = static_cast<int>(std::lround(cell.iters_mean));
        cell.reference = spec.reference[row][li * spec.taus.size() + ti];
        cell.gated = cell.reference == -1 || cell.reference <= spec.gate_max_ref;
        if (cell.reference == -1) {
          cell.ok = !cell.converged;
        } else if (!cell.converged) {
          cell.ok = false;
        } else {
          cell.ok = std::abs(cell.iters - cell.reference) <= spec.tolerance;
        }
        if (cell.gated && !cell.ok) run.pass = false;
        if (progress)
          *progress << "  [" << spec.row_labels[row] << " h=" << format_h(level)
                    << " tau=" << format_tau(tau) << "] iters=" << cell.iters
                    << (cell.converged ? "" : " (no convergence)") << " ref="
                    << (cell.reference == -1 ? std::string("*") : std::to_string(cell.reference))
                    << (cell.ok ? "" : cell.gated ? "  MISMATCH" : "  (not gated)") << std::endl;
        run.cells.push_back(cell);
      }
    }
  }
  return run;
}

TableRun reproduce_table(const std::string& id, int seed_count, std::ostream* progress) {
  return run_table_spec(get_table_spec(id), seed_count, progress);
}

void print_table_run(const TableRun& run, std::ostream& out) {
  const TableSpec& spec = *run.spec;
  out << "table " << spec.id << ": " << spec.title << "\n";
  std::size_t idx = 0;
  for (std::size_t row = 0; row < spec.row_labels.size(); ++row) {
    for (std::size_t li = 0; li < spec.levels.size(); ++li) {
      out << "  " << spec.row_labels[row] << "  h=" << format_h(spec.levels[li]) << " :";
      for (std::size_t ti = 0; ti < spec.taus.size(); ++ti) {
        const TableCell& c = run.cells[idx++];
        out << ' ';
        if (c.converged) {
          out << c.iters;
        } else {
          out << '*';
        }
        out << " (ref ";
        if (c.reference == -1) {
          out << '*';
        } else {
          out << c.reference;
        }
        out << (c.ok ? ")" : c.gated ? ", MISMATCH)" : ", ungated)");
      }
      out << '\n';
    }
  }
  out << (run.pass ? "PASS" : "FAIL") << ": every gated cell within +-"
      << spec.tolerance << " of the reference\n";
}

void write_table_files(const TableRun& run, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const TableSpec& spec = *run.spec;
  std::ofstream out(dir + "/table_" + spec.id + ".csv");
  out << "method,h,tau,iters,iters_mean,converged,conv_factor,wall_ms,reference,deviation,"
         "gated\n";
  for (const auto& c : run.cells) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d,%.3f,%d,%.6g,%.3f", c.iters, c.iters_mean,
                  c.converged ? 1 : 0, c.conv_factor, c.wall_ms);
    out << spec.row_labels[c.row] << ',' << format_h(c.level) << ',' << format_tau(c.tau) << ','
        << buf << ',' << (c.reference == -1 ? std::string("*") : std::to_string(c.reference))
        << ',';
    if (c.reference >= 0 && c.converged) {
      out << (c.iters - c.reference);
    } else {
      out << (c.ok ? "0" : "x");
    }
    out << ',' << (c.gated ? 1 : 0) << '\n';
  }
}

} // namespace fourmg
