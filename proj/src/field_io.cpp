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

#include "malab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "malab/error.hpp"

namespace malab {
namespace {

constexpr int kVersion = 1;

void put_le(std::vector<char>& buf, double v) {
  auto u = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((u >> (8 * b)) & 0xffu));
}

double get_le(const unsigned char* p) {
  std::uint64_t u = 0;
  for (int b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(u);
}

}  // namespace

void write_field(const ScalarField& f, const std::filesystem::path& path) {
  const auto& g = f.grid();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "write_field: cannot open " + path.string());
  std::ostringstream header;
  header << "MAFLD " << kVersion << ' ' << g.m << ' ' << g.nx << ' ' << g.ny << ' ' << g.nt
         << '\n';
  const std::string h = header.str();
  std::vector<char> buf;
  buf.reserve(h.size() + 8 * g.size());
  buf.insert(buf.end(), h.begin(), h.end());
  for (double v : f.values()) put_le(buf, v);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "write_field: write failed for " + path.string());
}

ScalarField read_field(const std::filesystem::path& path, const std::optional<GridSpec>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "read_field: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedHeader, "read_field: missing header in " + path.string());
  std::istringstream hs(line);
  std::string magic;
  int version = 0, m = 0, nx = 0, ny = 0, nt = 0;
  if (!(hs >> magic) || magic != "MAFLD")
    throw Error(ErrorCode::MalformedHeader, "read_field: bad magic in " + path.string());
  if (!(hs >> version))
    throw Error(ErrorCode::MalformedHeader, "read_field: missing version in " + path.string());
  if (version != kVersion)
    throw Error(ErrorCode::UnsupportedVersion,
                "read_field: unsupported MAFLD version " + std::to_string(version));
  if (!(hs >> m >> nx >> ny >> nt))
    throw Error(ErrorCode::MalformedHeader, "read_field: bad dimensions in " + path.string());
  std::string extra;
  if (hs >> extra)
    throw Error(ErrorCode::MalformedHeader, "read_field: trailing header token '" + extra + "'");

  GridSpec g;
  try {
    g = make_grid(m, nx, ny, nt);
  } catch (const Error& e) {
    throw Error(ErrorCode::DimensionMismatch, std::string("read_field: ") + e.what());
  }
  if (expected && !(*expected == g))
    throw Error(ErrorCode::DimensionMismatch, "read_field: grid differs from expected");

  const std::size_t want = 8 * g.size();
  std::vector<unsigned char> payload(want);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(want));
  if (static_cast<std::size_t>(in.gcount()) != want)
    throw Error(ErrorCode::TruncatedPayload,
                "read_field: payload has " + std::to_string(in.gcount()) + " of " +
                    std::to_string(want) + " bytes");
  if (in.peek() != std::ifstream::traits_type::eof())
    throw Error(ErrorCode::DimensionMismatch, "read_field: payload longer than header dimensions");

  std::vector<double> values(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) values[n] = get_le(payload.data() + 8 * n);
  return ScalarField(g, std::move(values));
}

}  // namespace malab
