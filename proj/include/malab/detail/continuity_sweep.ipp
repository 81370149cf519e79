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

#include "malab/error.hpp"

namespace malab {

template <class RhsFor>
SweepResult continuity_sweep(const ScalarField& psi0, const std::vector<double>& schedule,
                             RhsFor&& rhs_for, const NewtonConfig& cfg) {
  validate_schedule(schedule);
  SweepResult out;
  ScalarField guess = psi0;
  for (double eps : schedule) {
    try {
      SolveResult r = newton_solve(guess, rhs_for(eps), cfg);
      guess = r.psi;
      out.solutions.push_back({eps, std::move(r.psi), std::move(r.report)});
    } catch (const Error& e) {
      out.failure = SweepFailure{eps, e.code(), e.what()};
      break;
    }
  }
  return out;
}

}  // namespace malab
