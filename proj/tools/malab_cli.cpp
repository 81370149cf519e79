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

#include <string>

#include "CLI11.hpp"
#include "malab/malab.h"

int main(int argc, char** argv) {
  CLI::App app{"Monge-Ampere geodesic solver and diagnostics"};
  app.set_version_flag("--version", std::string(malab_version()));
  app.require_subcommand(1);

  int threads = 0;
  std::string out;
  app.add_option("--threads", threads, "cap on worker threads")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "output directory (overrides [output] directory)");

  std::string config;
  auto* geo = app.add_subcommand("geodesic", "solve the eps-geodesic sweep and report");
  geo->add_option("--config", config, "INI run configuration")->required();
  auto* oc = app.add_subcommand("oracle-compare", "compare solver and Legendre oracle");
  oc->add_option("--config", config, "INI run configuration")->required();
  auto* ma = app.add_subcommand("solve-ma", "manufactured-solution solve");
  ma->add_option("--config", config, "INI run configuration");
  auto* st = app.add_subcommand("selftest", "eigen-calculus and field invariants");
  for (auto* sub : {geo, oc, ma, st}) {
    sub->add_option("--threads", threads, "cap on worker threads")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  malab_set_threads(threads);
  const char* out_c = out.empty() ? nullptr : out.c_str();
  if (*geo) return malab_cmd_geodesic(config.c_str(), out_c);
  if (*oc) return malab_cmd_oracle_compare(config.c_str(), out_c);
  if (*ma) return malab_cmd_solve_ma(config.empty() ? nullptr : config.c_str(), out_c);
  return malab_cmd_selftest();
}
