// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_CSV_HPP
#define OMORILAB_CSV_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace omorilab {

/// Line-oriented reader for the comma-separated, header-mandatory files
/// used throughout. No quoting or escaping: none of the schemas need it.
class CsvReader {
public:
    /// Opens the file and checks the header matches `columns` exactly.
    CsvReader(const std::string& path, const std::vector<std::string>& columns);

    /// Advances to the next non-empty row; false at EOF.
    bool next();

    long line() const { return line_; }
    const std::string& path() const { return path_; }
    std::size_t columns() const { return ncols_; }

    const std::string& field(std::size_t i) const;
    bool empty_field(std::size_t i) const { return field(i).empty(); }

    double number(std::size_t i) const;
    long integer(std::size_t i) const;
    bool flag(std::size_t i) const; // true/false/1/0

    [[noreturn]] void fail(const std::string& what) const;

private:
    std::ifstream in_;
    std::string path_;
    std::size_t ncols_ = 0;
    long line_ = 0;
    std::vector<std::string> fields_;
};

/// Deterministic CSV emitter: fixed "%.*g" float formatting, newline = '\n',
/// whole-file replacement on open.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns, int precision = 12);

    CsvWriter& cell(const std::string& s);
    CsvWriter& cell(double v);
    CsvWriter& cell(long v);
    CsvWriter& cell_empty();
    void end_row();

    static std::string format(double v, int precision = 12);

private:
    std::ofstream out_;
    std::string path_;
    int precision_;
    std::size_t ncols_;
    std::size_t col_ = 0;
    void sep();
};

} // namespace omorilab

#endif
