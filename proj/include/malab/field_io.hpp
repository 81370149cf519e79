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
#include <optional>

#include "malab/grid.hpp"

namespace malab {

// MAFLD format: ASCII line "MAFLD 1 <m> <nx> <ny> <nt>\n" followed by
// nx*ny*nt little-endian float64 values, x fastest, then y, then xi.

void write_field(const ScalarField& f, const std::filesystem::path& path);

/// Throws Error with MalformedHeader, UnsupportedVersion, DimensionMismatch
/// (including a mismatch against `expected`), TruncatedPayload or Io.
ScalarField read_field(const std::filesystem::path& path,
                       const std::optional<GridSpec>& expected = std::nullopt);

}  // namespace malab
