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

#ifndef LDPCHISQ_RECORD_IO_H_
#define LDPCHISQ_RECORD_IO_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ldpchisq/independence.h"
#include "ldpchisq/mechanisms.h"
#include "ldpchisq/types.h"

namespace ldpchisq {

// CSV with header `category`; one integer in [0, d) per data row. Leading
// `# format_version=...` comments are accepted. Throws ParseError with the
// offending line number; requires at least one record.
std::vector<OneHotRecord> read_category_records(std::istream& in, int d);

// CSV with header `row,col`; integers in [0, r) and [0, c).
std::vector<PairRecord> read_pair_records(std::istream& in, int rows,
                                          int cols);

// Probability file: one entry per line, '#' comments and blank lines
// ignored. Entries must form a simplex point.
ProbabilityVector read_probability_file(std::istream& in);

// CSV emission of privatized reports. Columns depend on the mechanism:
// real vectors (v0..v{d-1}) for the noise kinds, `category` for the
// exponential mechanism, a 0/1 `bits` string for bit flipping. A
// `# format_version=1` comment precedes the header.
std::string private_reports_to_csv(std::span<const PrivateReport> reports);

}  // namespace ldpchisq

#endif  // LDPCHISQ_RECORD_IO_H_
