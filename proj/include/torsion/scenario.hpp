#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torsion/comparison.hpp"

namespace torsion {

// A scenario binds the inputs (m, w, g, h, R, direction) to a task list.
// Config files are flat sectioned key-value text; see the README for the
// field reference.
struct Scenario {
  std::string name;
  int m = 0;
  double R = 0.0;
  Direction direction = Direction::Below;
  std::string w_spec, g_spec = "1", h_spec = "0";
  std::vector<std::string> tasks;
  std::map<std::string, std::map<std::string, std::string>> task_params;
  std::filesystem::path base_dir;

  RadialFunction w, g, h;  // resolved functions

  ConstellationSpec constellation() const;
  ModelSpace model(double r_max) const;  // the w-model on [0, r_max]

  std::string param(const std::string& task, const std::string& key,
                    const std::string& fallback = "") const;
};

// Parses a function spec: "space_form(<b>)", "table:<path>" (two-column
// r/value samples, cubic interpolation), or a DSL expression in r.
RadialFunction parse_function_spec(const std::string& spec,
                                   const std::filesystem::path& base_dir);

Scenario load_scenario(const std::filesystem::path& path);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> grid;
  std::optional<int> parallel;
  std::vector<std::string> only_tasks;  // non-empty: run just these
};

// Runs the scenario's tasks, writing one CSV per task plus summary.txt in
// out_dir. Exit code contract: 0 all verdicts/hypotheses satisfied, 2 a
// theorem-hypothesis warning was emitted, 1 error.
int run_scenario(const std::filesystem::path& scenario_file,
                 const std::filesystem::path& out_dir,
                 const RunOverrides& overrides = {});

// Two-column profile CSV for one computed quantity:
// q_w | q_W | eta_w | E | psi | psi_star | A1 | margins.
int emit_profile(const std::filesystem::path& scenario_file,
                 const std::string& quantity,
                 const std::filesystem::path& out_dir,
                 const RunOverrides& overrides = {});

}  // namespace torsion
