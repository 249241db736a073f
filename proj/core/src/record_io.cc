// Copyright 2026 The ldpchisq Authors
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

#include "ldpchisq/record_io.h"

#include <cstdio>
#include <istream>
#include <sstream>

#include "ldpchisq/error.h"

namespace ldpchisq {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

long parse_long(const std::string& field, std::size_t line_no,
                const char* what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string(what) + " is not an integer: " + field,
                     line_no);
  }
}

// Reads lines, skipping blanks and '#' comments; returns false at EOF.
bool next_content_line(std::istream& in, std::string& line,
                       std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (!line.empty() && line[0] != '#') return true;
  }
  return false;
}

}  // namespace

std::vector<OneHotRecord> read_category_records(std::istream& in, int d) {
  if (d < 2) throw std::invalid_argument("read_category_records: d must be >= 2");
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) {
    throw ParseError("missing header; expected `category`", line_no + 1);
  }
  if (line != "category") {
    throw ParseError("bad header; expected `category`, got `" + line + "`",
                     line_no);
  }
  std::vector<OneHotRecord> records;
  while (next_content_line(in, line, line_no)) {
    const long v = parse_long(line, line_no, "category");
    if (v < 0 || v >= d) {
      throw ParseError("category " + std::to_string(v) + " out of range [0, " +
                           std::to_string(d) + ")",
                       line_no);
    }
    records.emplace_back(static_cast<std::uint32_t>(v),
                         static_cast<std::uint32_t>(d));
  }
  if (records.empty()) {
    throw ParseError("no records found", line_no + 1);
  }
  return records;
}

std::vector<PairRecord> read_pair_records(std::istream& in, int rows,
                                          int cols) {
  if (rows < 2 || cols < 2) {
    throw std::invalid_argument("read_pair_records: need rows, cols >= 2");
  }
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) {
    throw ParseError("missing header; expected `row,col`", line_no + 1);
  }
  if (line != "row,col") {
    throw ParseError("bad header; expected `row,col`, got `" + line + "`",
                     line_no);
  }
  std::vector<PairRecord> records;
  while (next_content_line(in, line, line_no)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("expected two comma-separated fields: " + line,
                       line_no);
    }
    const long r = parse_long(trim(line.substr(0, comma)), line_no, "row");
    const long c = parse_long(trim(line.substr(comma + 1)), line_no, "col");
    if (r < 0 || r >= rows) {
      throw ParseError("row " + std::to_string(r) + " out of range [0, " +
                           std::to_string(rows) + ")",
                       line_no);
    }
    if (c < 0 || c >= cols) {
      throw ParseError("col " + std::to_string(c) + " out of range [0, " +
                           std::to_string(cols) + ")",
                       line_no);
    }
    records.push_back(PairRecord{static_cast<std::uint32_t>(r),
                                 static_cast<std::uint32_t>(c)});
  }
  if (records.empty()) {
    throw ParseError("no records found", line_no + 1);
  }
  return records;
}

ProbabilityVector read_probability_file(std::istream& in) {
  std::vector<double> entries;
  std::string line;
  std::size_t line_no = 0;
  while (next_content_line(in, line, line_no)) {
    try {
      std::size_t pos = 0;
      entries.push_back(std::stod(line, &pos));
      if (pos != line.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      throw ParseError("not a probability: " + line, line_no);
    }
  }
  if (entries.empty()) {
    throw ParseError("empty probability file", line_no + 1);
  }
  return ProbabilityVector(std::move(entries));
}

std::string private_reports_to_csv(std::span<const PrivateReport> reports) {
  if (reports.empty()) {
    throw std::invalid_argument("private_reports_to_csv: empty report list");
  }
  std::ostringstream out;
  out << "# format_version=1\n";
  const MechanismFamily family = reports.front().mechanism.family;
  const std::size_t d = reports.front().dim();
  switch (family) {
    case MechanismFamily::kGaussianNoise:
    case MechanismFamily::kLaplaceNoise: {
      for (std::size_t j = 0; j < d; ++j) {
        if (j) out << ',';
        out << 'v' << j;
      }
      out << '\n';
      char buf[64];
      for (const PrivateReport& r : reports) {
        const auto& v = std::get<std::vector<double>>(r.payload);
        for (std::size_t j = 0; j < v.size(); ++j) {
          if (j) out << ',';
          std::snprintf(buf, sizeof(buf), "%.17g", v[j]);
          out << buf;
        }
        out << '\n';
      }
      break;
    }
    case MechanismFamily::kExponential: {
      out << "category\n";
      for (const PrivateReport& r : reports) {
        out << std::get<OneHotRecord>(r.payload).index << '\n';
      }
      break;
    }
    case MechanismFamily::kBitFlip: {
      out << "bits\n";
      for (const PrivateReport& r : reports) {
        const auto& bits = std::get<std::vector<bool>>(r.payload);
        for (bool b : bits) out << (b ? '1' : '0');
        out << '\n';
      }
      break;
    }
  }
  return out.str();
}

}  // namespace ldpchisq
