#include "fourmg/experiment.hpp"

#include <map>
#include <stdexcept>

namespace fourmg {

namespace {

// Reference iteration counts for the published benchmark tables this
// harness reproduces. -1 encodes "no convergence within 200 iterations".
// Layout per row: levels {6,7,8} (h = 1/64, 1/128, 1/256) outer, tau inner.

ExperimentConfig base_cfg() {
  ExperimentConfig c;
  c.tol = 1e-7;
  c.maxit = 200;
  return c;
}

ExperimentConfig mg_cfg(int example, const std::string& smoother) {
  ExperimentConfig c = base_cfg();
  c.example = example;
  c.solver = "mg";
  c.smoother = smoother;
  return c;
}

ExperimentConfig gmres_cfg(int example, const std::string& precond, const std::string& smoother,
                           CycleType cycle, int k, BcKind bc = BcKind::AllDirichlet) {
  ExperimentConfig c = base_cfg();
  c.example = example;
  c.bc = bc;
  c.solver = "gmres";
  c.precond = precond;
  c.inner = "mg";
  c.smoother = smoother;
  c.cycle = cycle;
  c.pre = c.post = k;
  return c;
}

ExperimentConfig gs_bd_cfg(int example) {
  ExperimentConfig c = base_cfg();
  c.example = example;
  c.solver = "gmres";
  c.precond = "Bd";
  c.inner = "gs";
  c.gs_steps = 3;
  return c;
}

const std::vector<double> kTauWide = {1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
const std::vector<double> kTauMain = {1e0, 1e-1, 1e-2, 1e-3, 1e-4};
const std::vector<double> kTauSmall = {1e-4, 1e-5, 1e-6, 1e-7};
const std::vector<int> kLevels = {6, 7, 8};

std::map<std::string, TableSpec> build_specs() {
  std::map<std::string, TableSpec> t;

  {
    TableSpec s;
    s.id = "1";
    s.title = "problem 1: multigrid solver with collective smoothers";
    s.row_labels = {"CGS-MG", "CJ-MG"};
    s.row_configs = {mg_cfg(1, "cgs"), mg_cfg(1, "cj")};
    s.levels = kLevels;
    s.taus = kTauWide;
    s.reference = {
        {8, 8, 8, 8, 13, 8, 7, 7, 8, 8, 8, 8, 11, 12, 7, 7, 8, 8, 8, 8, 10, 11, 9, 7},
        {15, 15, 15, 15, 14, 12, 13, 13, 15, 15, 15, 15, 14, 12, 13, 13, 15, 15, 15, 15, 15, 14,
         12, 13}};
    s.tolerance = 3;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "2";
    s.title = "problem 2: multigrid solver with collective smoothers";
    s.row_labels = {"CGS-MG", "CJ-MG"};
    s.row_configs = {mg_cfg(2, "cgs"), mg_cfg(2, "cj")};
    s.levels = kLevels;
    s.taus = kTauWide;
    s.reference = {
        {8, 8, 8, 8, 10, 11, 7, 7, 8, 8, 8, 8, 8, 12, 9, 7, 8, 8, 8, 8, 8, 10, 12, 7},
        {15, 15, 15, 15, 14, 12, 14, 13, 15, 15, 15, 15, 14, 13, 13, 14, 15, 15, 15, 15, 15, 14,
         12, 14}};
    s.tolerance = 3;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "3";
    s.title = "problem 1: GMRes with one V(1,1) CGS-MG cycle per preconditioner application";
    s.row_labels = {"V_B(1,1)", "V_Bt(1,1)", "V_A(1,1)"};
    s.row_configs = {gmres_cfg(1, "B", "cgs", CycleType::V, 1),
                     gmres_cfg(1, "Btilde", "cgs", CycleType::V, 1),
                     gmres_cfg(1, "A", "cgs", CycleType::V, 1)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{8, 8, 8, 7, 12, 8, 8, 8, 7, 8, 8, 8, 8, 7, 7},
                   {8, 8, 8, 7, 9, 8, 8, 8, 7, 7, 8, 8, 8, 7, 7},
                   {8, 8, 8, 8, 7, 8, 8, 8, 8, 8, 8, 8, 8, 7, 8}};
    s.tolerance = 3;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "4";
    s.title = "problem 2: GMRes with one V(1,1) CGS-MG cycle per preconditioner application";
    s.row_labels = {"V_B(1,1)", "V_Bt(1,1)", "V_A(1,1)"};
    s.row_configs = {gmres_cfg(2, "B", "cgs", CycleType::V, 1),
                     gmres_cfg(2, "Btilde", "cgs", CycleType::V, 1),
                     gmres_cfg(2, "A", "cgs", CycleType::V, 1)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{8, 8, 8, 8, 14, 8, 8, 8, 8, 9, 8, 8, 8, 8, 7},
                   {8, 8, 8, 8, 8, 8, 8, 8, 8, 7, 8, 8, 8, 8, 7},
                   {8, 8, 8, 8, 9, 8, 8, 8, 8, 8, 8, 8, 8, 8, 8}};
    s.tolerance = 3;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "5";
    s.title = "problem 1: GMRes with one V(1,1) DGS-MG cycle per preconditioner application";
    s.row_labels = {"V_B(1,1)", "V_Bt(1,1)"};
    s.row_configs = {gmres_cfg(1, "B", "dgs", CycleType::V, 1),
                     gmres_cfg(1, "Btilde", "dgs", CycleType::V, 1)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{22, 22, 21, 19, 20, 22, 22, 21, 20, 19, 22, 22, 22, 21, 19},
                   {22, 22, 21, 19, 17, 22, 22, 21, 20, 19, 22, 22, 22, 21, 19}};
    s.tolerance = 4;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "6";
    s.title = "problem 2: GMRes with one V(1,1) DGS-MG cycle per preconditioner application";
    s.row_labels = {"V_B(1,1)", "V_Bt(1,1)"};
    s.row_configs = {gmres_cfg(2, "B", "dgs", CycleType::V, 1),
                     gmres_cfg(2, "Btilde", "dgs", CycleType::V, 1)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{23, 22, 21, 19, 20, 21, 22, 22, 20, 18, 21, 21, 21, 20, 18},
                   {23, 23, 22, 19, 17, 22, 23, 22, 20, 17, 21, 22, 21, 20, 18}};
    s.tolerance = 4;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "7";
    s.title = "problem 1, small tau: one-lumped preconditioner vs block-diagonal preconditioner";
    s.row_labels = {"V_Bt(1,1)", "GS_Bd(3)"};
    s.row_configs = {gmres_cfg(1, "Btilde", "cgs", CycleType::V, 1), gs_bd_cfg(1)};
    s.levels = kLevels;
    s.taus = kTauSmall;
    s.reference = {{9, 12, 15, 15, 7, 9, 14, 15, 7, 8, 11, 15},
                   {164, 19, 6, 4, -1, 68, 10, 5, -1, -1, 29, 7}};
    s.tolerance = 3;
    s.gate_max_ref = 20; // the long tails are seed-sensitive; report only
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "8";
    s.title = "problem 2, small tau: one-lumped preconditioner vs block-diagonal preconditioner";
    s.row_labels = {"V_Bt(1,1)", "GS_Bd(3)"};
    s.row_configs = {gmres_cfg(2, "Btilde", "cgs", CycleType::V, 1), gs_bd_cfg(2)};
    s.levels = kLevels;
    s.taus = kTauSmall;
    s.reference = {{8, 13, 15, 15, 7, 12, 15, 15, 7, 8, 14, 15},
                   {-1, 58, 9, 5, -1, -1, 25, 7, -1, -1, 96, 12}};
    s.tolerance = 3;
    s.gate_max_ref = 20;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "9";
    s.title = "problem 1, mixed boundary conditions: GMRes with one V(1,1) CGS-MG cycle";
    s.row_labels = {"V_B(1,1)", "V_Bt(1,1)", "V_A(1,1)"};
    s.row_configs = {gmres_cfg(1, "B", "cgs", CycleType::V, 1, BcKind::MixedCorner),
                     gmres_cfg(1, "Btilde", "cgs", CycleType::V, 1, BcKind::MixedCorner),
                     gmres_cfg(1, "A", "cgs", CycleType::V, 1, BcKind::MixedCorner)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{10, 9, 8, 7, 12, 10, 10, 9, 7, 8, 10, 10, 9, 8, 7},
                   {10, 10, 8, 7, 9, 10, 10, 9, 7, 7, 10, 10, 9, 8, 7},
                   {10, 10, 8, 8, 7, 10, 10, 9, 8, 8, 10, 10, 9, 8, 8}};
    s.tolerance = 3;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "10";
    s.title = "problem 1, mixed boundary conditions: GMRes with one W(2,2) DGS-MG cycle";
    s.row_labels = {"W_B(2,2)", "W_Bt(2,2)"};
    s.row_configs = {gmres_cfg(1, "B", "dgs", CycleType::W, 2, BcKind::MixedCorner),
                     gmres_cfg(1, "Btilde", "dgs", CycleType::W, 2, BcKind::MixedCorner)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{15, 15, 15, 13, 15, 15, 15, 15, 14, 13, 15, 15, 15, 14, 13},
                   {15, 15, 15, 13, 12, 15, 15, 15, 14, 13, 15, 15, 15, 14, 13}};
    s.tolerance = 4;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "r1";
    s.title = "problem 1: GMRes with one V_B(k,k) CGS-MG cycle, k = 1, 2, 3";
    s.row_labels = {"V_B(1,1)", "V_B(2,2)", "V_B(3,3)"};
    s.row_configs = {gmres_cfg(1, "B", "cgs", CycleType::V, 1),
                     gmres_cfg(1, "B", "cgs", CycleType::V, 2),
                     gmres_cfg(1, "B", "cgs", CycleType::V, 3)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{8, 8, 8, 7, 12, 8, 8, 8, 7, 8, 8, 8, 8, 7, 7},
                   {6, 6, 5, 6, 11, 6, 6, 5, 5, 6, 6, 6, 6, 5, 5},
                   {6, 5, 5, 5, 11, 6, 5, 5, 4, 6, 6, 5, 5, 4, 5}};
    s.reference_cf = {{0.09, 0.09, 0.09, 0.10, 0.23, 0.09, 0.09, 0.09, 0.10, 0.12, 0.09, 0.09,
                       0.09, 0.09, 0.10},
                      {0.09, 0.09, 0.09, 0.10, 0.23, 0.09, 0.09, 0.09, 0.10, 0.12, 0.09, 0.09,
                       0.09, 0.09, 0.10},
                      {0.02, 0.02, 0.04, 0.40, 0.24, 0.02, 0.02, 0.02, 0.03, 0.09, 0.02, 0.02,
                       0.02, 0.02, 0.05}};
    s.tolerance = 3;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "r2";
    s.title = "problem 1: GMRes with one W_B(k,k) CGS-MG cycle, k = 1, 2, 3";
    s.row_labels = {"W_B(1,1)", "W_B(2,2)", "W_B(3,3)"};
    s.row_configs = {gmres_cfg(1, "B", "cgs", CycleType::W, 1),
                     gmres_cfg(1, "B", "cgs", CycleType::W, 2),
                     gmres_cfg(1, "B", "cgs", CycleType::W, 3)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{8, 8, 7, 7, 12, 8, 8, 7, 7, 8, 8, 8, 8, 7, 7},
                   {6, 6, 5, 5, 11, 6, 6, 5, 5, 6, 6, 6, 5, 5, 5},
                   {5, 5, 4, 5, 11, 5, 5, 5, 4, 6, 5, 5, 5, 4, 5}};
    s.reference_cf = {{0.07, 0.07, 0.07, 0.09, 0.23, 0.07, 0.07, 0.07, 0.07, 0.12, 0.07, 0.07,
                       0.07, 0.07, 0.08},
                      {0.03, 0.03, 0.03, 0.05, 0.24, 0.03, 0.03, 0.03, 0.03, 0.08, 0.03, 0.03,
                       0.03, 0.03, 0.04},
                      {0.02, 0.02, 0.02, 0.40, 0.24, 0.02, 0.02, 0.02, 0.02, 0.08, 0.02, 0.02,
                       0.02, 0.02, 0.03}};
    s.tolerance = 3;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "r3";
    s.title = "problem 1: GMRes with one V_B(k,k) DGS-MG cycle, k = 1, 2, 3";
    s.row_labels = {"V_B(1,1)", "V_B(2,2)", "V_B(3,3)"};
    s.row_configs = {gmres_cfg(1, "B", "dgs", CycleType::V, 1),
                     gmres_cfg(1, "B", "dgs", CycleType::V, 2),
                     gmres_cfg(1, "B", "dgs", CycleType::V, 3)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{22, 22, 21, 19, 20, 22, 22, 21, 20, 19, 22, 22, 22, 21, 19},
                   {16, 15, 15, 14, 16, 15, 15, 15, 14, 13, 15, 15, 15, 14, 13},
                   {13, 13, 13, 12, 14, 13, 13, 13, 12, 11, 13, 13, 13, 12, 11}};
    s.reference_cf = {{0.48, 0.45, 0.44, 0.44, 0.42, 0.46, 0.48, 0.44, 0.43, 0.41, 0.44, 0.44,
                       0.45, 0.44, 0.43},
                      {0.35, 0.32, 0.31, 0.29, 0.33, 0.30, 0.31, 0.33, 0.29, 0.28, 0.30, 0.30,
                       0.33, 0.30, 0.29},
                      {0.26, 0.23, 0.26, 0.24, 0.29, 0.24, 0.26, 0.28, 0.24, 0.21, 0.24, 0.24,
                       0.25, 0.25, 0.24}};
    s.tolerance = 4;
    t[s.id] = s;
  }
  {
    TableSpec s;
    s.id = "r4";
    s.title = "problem 1: GMRes with one W_B(k,k) DGS-MG cycle, k = 1, 2, 3";
    s.row_labels = {"W_B(1,1)", "W_B(2,2)", "W_B(3,3)"};
    s.row_configs = {gmres_cfg(1, "B", "dgs", CycleType::W, 1),
                     gmres_cfg(1, "B", "dgs", CycleType::W, 2),
                     gmres_cfg(1, "B", "dgs", CycleType::W, 3)};
    s.levels = kLevels;
    s.taus = kTauMain;
    s.reference = {{21, 21, 20, 19, 19, 21, 21, 21, 19, 19, 21, 21, 21, 20, 19},
                   {15, 15, 14, 13, 15, 15, 15, 14, 13, 13, 15, 15, 14, 14, 13},
                   {12, 12, 12, 11, 14, 12, 12, 12, 11, 11, 12, 12, 12, 11, 11}};
    s.reference_cf = {{0.41, 0.40, 0.42, 0.41, 0.42, 0.40, 0.40, 0.41, 0.41, 0.41, 0.40, 0.41,
                       0.41, 0.42, 0.42},
                      {0.26, 0.26, 0.27, 0.27, 0.33, 0.26, 0.26, 0.27, 0.26, 0.28, 0.26, 0.26,
                       0.27, 0.27, 0.26},
                      {0.19, 0.19, 0.19, 0.20, 0.29, 0.19, 0.19, 0.19, 0.20, 0.21, 0.19, 0.19,
                       0.19, 0.19, 0.19}};
    s.tolerance = 4;
    t[s.id] = s;
  }
  return t;
}

const std::map<std::string, TableSpec>& specs() {
  static const std::map<std::string, TableSpec> s = build_specs();
  return s;
}

} // namespace

const TableSpec& get_table_spec(const std::string& id) {
  auto it = specs().find(id);
  if (it == specs().end()) throw std::invalid_argument("unknown table id: " + id);
  return it->second;
}

std::vector<std::string> all_table_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, spec] : specs()) ids.push_back(id);
  return ids;
}

} // namespace fourmg
