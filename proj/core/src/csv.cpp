// SPDX-License-Identifier: Apache-2.0

#include "omorilab/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

#include "omorilab/errors.hpp"

namespace omorilab {

namespace {

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
}

} // namespace

CsvReader::CsvReader(const std::string& path, const std::vector<std::string>& columns)
    : in_(path), path_(path), ncols_(columns.size()) {
    if (!in_.is_open()) throw ValidationError(path, 0, "cannot open file");
    std::string header;
    if (!std::getline(in_, header)) throw ValidationError(path, 1, "missing header row");
    strip_cr(header);
    line_ = 1;
    const auto got = split(header);
    std::string want;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) want += ',';
        want += columns[i];
    }
    if (got != columns) {
        throw ValidationError(path, 1, "header is '" + header + "', expected '" + want + "'");
    }
}

bool CsvReader::next() {
    std::string row;
    while (std::getline(in_, row)) {
        ++line_;
        strip_cr(row);
        if (row.empty()) continue;
        fields_ = split(row);
        if (fields_.size() != ncols_) {
            fail("expected " + std::to_string(ncols_) + " fields, got " + std::to_string(fields_.size()));
        }
        return true;
    }
    return false;
}

const std::string& CsvReader::field(std::size_t i) const {
    return fields_.at(i);
}

double CsvReader::number(std::size_t i) const {
    const std::string& s = field(i);
    if (s.empty()) fail("empty numeric field " + std::to_string(i + 1));
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) fail("malformed number '" + s + "'");
    return v;
}

long CsvReader::integer(std::size_t i) const {
    const std::string& s = field(i);
    if (s.empty()) fail("empty integer field " + std::to_string(i + 1));
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) fail("malformed integer '" + s + "'");
    return v;
}

bool CsvReader::flag(std::size_t i) const {
    const std::string& s = field(i);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    fail("malformed flag '" + s + "' (want true/false/1/0)");
}

void CsvReader::fail(const std::string& what) const {
    throw ValidationError(path_, line_, what);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns, int precision)
    : out_(path, std::ios::trunc), path_(path), precision_(precision), ncols_(columns.size()) {
    if (!out_.is_open()) throw Error("cannot write " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::sep() {
    if (col_) out_ << ',';
    ++col_;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
    sep();
    out_ << s;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) {
    sep();
    out_ << format(v, precision_);
    return *this;
}

CsvWriter& CsvWriter::cell(long v) {
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::cell_empty() {
    sep();
    return *this;
}

void CsvWriter::end_row() {
    if (col_ != ncols_) throw Error(path_ + ": row has " + std::to_string(col_) + " cells, header has " +
                                    std::to_string(ncols_));
    out_ << '\n';
    col_ = 0;
}

std::string CsvWriter::format(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

} // namespace omorilab
