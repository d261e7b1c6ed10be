// Copyright 2026 The LAP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lap/optimizer.hpp"

namespace lap {

inline constexpr const char* kTraceCsvHeader =
    "t,f,f_gap,grad_norm2,grad_dualnorm_P,alpha,beta,mu,delta,lambda_min_P,wall_ns";

// Floats use 17 significant digits, so parsing restores them bit for bit.
// Missing optional values are written as empty fields.
std::string format_double(double v);
void write_trace_csv(const Trace& trace, std::ostream& out);
std::vector<TraceRow> parse_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::string& path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace lap
