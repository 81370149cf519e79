// Copyright 2026 The malab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "malab/diagnostics.hpp"
#include "malab/geodesic.hpp"
#include "malab/ma_solver.hpp"

namespace malab {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitVerdict = 3,
  kExitSelftest = 4,
  kExitNotXOnly = 5,
};

struct DataSpec {
  /// trivial | constant-shift | xonly-cos | generic-2d; empty when files are used
  std::string builtin;
  std::filesystem::path phi0;
  std::filesystem::path phi1;
};

struct RunConfig {
  int nx = 0, ny = 0, nt = 0;
  DataSpec data;
  double eps_start = 1e-1;
  double eps_end = 1e-4;
  double ratio = 0.31622776601683794;  // 1/sqrt(10)
  NewtonConfig solver;
  DiagnosticsConfig diagnostics;
  std::filesystem::path output = "malab_run";
  /// raw text, copied verbatim into the run directory
  std::string text;
};

/// INI parsing; relative phi paths resolve against `base_dir`. Throws
/// Error(Config) with section/key or line context.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// start, start r, start r^2, ... down to `end` (snapped when within 1e-9
/// relative).
std::vector<double> make_schedule(double start, double end, double ratio);

GridSpec run_grid(const RunConfig& cfg);

/// Builtin potentials sampled on the grid.
PotentialPair builtin_pair(const std::string& name, const GridSpec& grid);

/// Builtin or file data (the k = 0 layer of each MAFLD file).
PotentialPair load_pair(const RunConfig& cfg, const GridSpec& grid);

/// y-variation at most 1e-12 in every row.
bool is_x_only(const SliceField& s);

struct CommandOptions {
  std::optional<std::filesystem::path> out;
  std::ostream* log = nullptr;
};

int cmd_geodesic(const std::filesystem::path& config, const CommandOptions& opt);
int cmd_oracle_compare(const std::filesystem::path& config, const CommandOptions& opt);
/// Manufactured-solution solve; without a config the grid is 32 x 8 x 33.
int cmd_solve_ma(const std::optional<std::filesystem::path>& config, const CommandOptions& opt);
int cmd_selftest(std::ostream& os);

/// Names listed in the run manifest that are absent from `dir`.
std::vector<std::string> missing_manifest_entries(const std::filesystem::path& dir);

}  // namespace malab
