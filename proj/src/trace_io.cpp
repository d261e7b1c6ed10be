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

#include "lap/trace_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lap/error.hpp"

namespace lap {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kIoError, "trace CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.t << ',' << format_double(r.f) << ',' << (r.f_gap ? format_double(*r.f_gap) : "") << ','
        << format_double(r.grad_norm2) << ',' << format_double(r.grad_dual_norm_p) << ',' << format_double(r.alpha)
        << ',' << format_double(r.beta) << ',' << format_double(r.mu) << ','
        << (r.delta ? format_double(*r.delta) : "") << ',' << format_double(r.lambda_min_p) << ',';
    if (r.wall_ns) out << *r.wall_ns;
    out << '\n';
  }
}

std::vector<TraceRow> parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kIoError, "trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceCsvHeader) throw Error(ErrorCode::kIoError, "trace CSV header mismatch: '" + line + "'");
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 11) throw Error(ErrorCode::kIoError, "trace CSV line " + std::to_string(line_no) + ": need 11 fields");
    TraceRow r;
    r.t = static_cast<std::size_t>(parse_double(f[0], line_no));
    r.f = parse_double(f[1], line_no);
    r.f_gap = parse_optional(f[2], line_no);
    r.grad_norm2 = parse_double(f[3], line_no);
    r.grad_dual_norm_p = parse_double(f[4], line_no);
    r.alpha = parse_double(f[5], line_no);
    r.beta = parse_double(f[6], line_no);
    r.mu = parse_double(f[7], line_no);
    r.delta = parse_optional(f[8], line_no);
    r.lambda_min_p = parse_double(f[9], line_no);
    if (!f[10].empty()) r.wall_ns = std::stoll(f[10]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return parse_trace_csv(in);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  std::random_device rd;
  const fs::path tmp = target.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot move output into place at " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lap
