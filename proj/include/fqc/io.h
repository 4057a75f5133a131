// Copyright 2026 The fqcontrol Authors
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

#ifndef FQC_IO_H
#define FQC_IO_H

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fqc/errors.h"
#include "fqc/sweep.h"

namespace fqc {

/// Malformed CSV or number token.
struct ParseError : Error {
    using Error::Error;
};

/// Shortest-safe decimal form: 17 significant digits, "inf" / "-inf" / "nan" for non-finite.
std::string format_double(double v, int significant = 17);
/// Inverse of format_double. Throws ParseError on anything but a complete token.
double parse_double(std::string_view s);

enum class SweepKind { Qubit, Gaussian };

const char *csv_header(SweepKind kind);

/// A sweep table together with its comment lines (without the leading "# ").
struct SweepTable {
    SweepKind kind = SweepKind::Qubit;
    std::vector<std::string> comments;
    std::vector<SweepRecord> records;
};

void write_csv(std::ostream &out, const SweepTable &table);
SweepTable read_csv(std::istream &in);

/// Data rows of a CSV exactly as they appear in the file, header excluded.
std::vector<std::string> csv_data_rows(std::string_view text);

/// Hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

/// Hex SHA-256 over the data rows, each followed by a newline.
std::string rows_digest(const std::vector<std::string> &rows);

}  // namespace fqc

#endif
