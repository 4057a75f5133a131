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

#include "fqc/io.h"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fqc {

namespace {

constexpr const char *kQubitHeader =
    "theta_bar,phi_bar,cos2theta,cos2phi,Q,n_targets,frac_reachable,mean_err,neglog2_mean_err,std_neglog2_err,max_err,"
    "seed";
constexpr const char *kGaussianHeader = "q,Q,n_targets,frac_reachable,mean_err,neglog2_mean_err,std_neglog2_err,max_err,seed";

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t k = line.find(sep, start);
        if (k == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, k - start));
        start = k + 1;
    }
}

template <typename T>
T parse_integer(std::string_view s) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("bad integer '" + std::string(s) + "'");
    }
    return v;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

}  // namespace

std::string format_double(double v, int significant) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    if (s == "inf" || s == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("bad number '" + std::string(s) + "'");
    }
    return v;
}

const char *csv_header(SweepKind kind) { return kind == SweepKind::Qubit ? kQubitHeader : kGaussianHeader; }

void write_csv(std::ostream &out, const SweepTable &table) {
    for (const auto &c : table.comments) {
        out << "# " << c << '\n';
    }
    out << csv_header(table.kind) << '\n';
    auto f = [](double v) { return format_double(v); };
    for (const auto &r : table.records) {
        if (table.kind == SweepKind::Qubit) {
            const auto &p = std::get<QubitChannelParams>(r.params);
            out << f(p.theta) << ',' << f(p.phi) << ',' << f(std::cos(2 * p.theta)) << ',' << f(std::cos(2 * p.phi))
                << ',';
        } else {
            out << f(std::get<GaussianChannelParam>(r.params).q) << ',';
        }
        out << f(r.capacity) << ',' << r.n_targets << ',' << f(r.frac_reachable) << ',' << f(r.mean_err) << ','
            << f(r.neglog2_mean_err) << ',' << f(r.std_neglog2) << ',' << f(r.max_err) << ',' << r.seed << '\n';
    }
}

SweepTable read_csv(std::istream &in) {
    SweepTable table;
    std::string line;
    bool have_header = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        std::string_view l = strip_cr(line);
        if (l.empty()) {
            continue;
        }
        if (l.front() == '#') {
            l.remove_prefix(1);
            if (!l.empty() && l.front() == ' ') {
                l.remove_prefix(1);
            }
            if (have_header) {
                throw ParseError("comment after header at line " + std::to_string(line_no));
            }
            table.comments.emplace_back(l);
            continue;
        }
        if (!have_header) {
            if (l == kQubitHeader) {
                table.kind = SweepKind::Qubit;
            } else if (l == kGaussianHeader) {
                table.kind = SweepKind::Gaussian;
            } else {
                throw ParseError("unrecognised header at line " + std::to_string(line_no));
            }
            have_header = true;
            continue;
        }
        auto cells = split(l, ',');
        size_t expect = table.kind == SweepKind::Qubit ? 12 : 9;
        if (cells.size() != expect) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(expect) +
                             " fields, got " + std::to_string(cells.size()));
        }
        try {
            SweepRecord r;
            size_t i = 0;
            if (table.kind == SweepKind::Qubit) {
                r.params = QubitChannelParams{parse_double(cells[0]), parse_double(cells[1])};
                i = 4;  // the cosines are derived
            } else {
                r.params = GaussianChannelParam{parse_double(cells[0])};
                i = 1;
            }
            r.capacity = parse_double(cells[i++]);
            r.n_targets = parse_integer<std::int64_t>(cells[i++]);
            r.frac_reachable = parse_double(cells[i++]);
            r.mean_err = parse_double(cells[i++]);
            r.neglog2_mean_err = parse_double(cells[i++]);
            r.std_neglog2 = parse_double(cells[i++]);
            r.max_err = parse_double(cells[i++]);
            r.seed = parse_integer<std::uint64_t>(cells[i++]);
            table.records.push_back(r);
        } catch (const ParseError &e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) {
        throw ParseError("no header line");
    }
    return table;
}

std::vector<std::string> csv_data_rows(std::string_view text) {
    std::vector<std::string> rows;
    bool header_seen = false;
    for (auto l : split(text, '\n')) {
        l = strip_cr(l);
        if (l.empty() || l.front() == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        rows.emplace_back(l);
    }
    return rows;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; i++) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string rows_digest(const std::vector<std::string> &rows) {
    std::string all;
    for (const auto &r : rows) {
        all += r;
        all += '\n';
    }
    return sha256_hex(all);
}

}  // namespace fqc
