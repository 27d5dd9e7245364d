// Copyright 2026 The isofw Authors
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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "isofw/solver.hpp"

namespace isofw {

inline constexpr const char* kTraceHeader = "restart,iter,f,fw_gap,eq_resid,pos_resid,h_resid";

// "# seed <seed>" followed by the CSV header and one line per row. Doubles
// are printed with round-trip precision, so equal runs give equal bytes.
void write_trace(std::ostream& out, std::span<const TraceRow> rows, std::uint64_t seed);
std::vector<TraceRow> read_trace(std::istream& in);

// Snapshot stream: for each matrix a line "X <restart> <iter> <n>" followed
// by n rows of n values.
void write_snapshots(std::ostream& out, std::span<const Snapshot> snaps);
std::vector<Snapshot> read_snapshots(std::istream& in);

// CSV grid of the matrix entries.
void write_matrix_csv(const Matrix& x, const std::filesystem::path& path);
// Binary 8-bit PGM, one pixel per entry, value 255 * x / max(x) (0 for a
// matrix without positive entries). Negative entries clamp to 0.
void write_pgm(const Matrix& x, const std::filesystem::path& path);

}  // namespace isofw
