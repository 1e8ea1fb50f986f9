#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cvef/common.hpp"

namespace cvef {

/// CSV conventions: header row, comma separators, '.' decimal point, floats
/// at 17 significant digits (binary64 round-trip exact), LF line endings.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw Error(ErrorKind::io, "csv: cannot open '" + path + "' for writing");
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    using Cell = std::variant<double, long, std::string>;

    void row(const std::vector<Cell>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            if (std::holds_alternative<double>(cells[i])) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(cells[i]));
                out_ << buf;
            } else if (std::holds_alternative<long>(cells[i])) {
                out_ << std::get<long>(cells[i]);
            } else {
                out_ << std::get<std::string>(cells[i]);
            }
        }
        out_ << '\n';
    }

    /// '#'-prefixed annotation line (ignored by the reader).
    void comment(const std::string& text) { out_ << "# " << text << '\n'; }

  private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    double value(std::size_t row, const std::string& column) const {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == column) return std::stod(rows.at(row).at(c));
        throw Error(ErrorKind::io, "csv: no column '" + column + "'");
    }
};

inline CsvTable parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "csv: cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cells.push_back(tok);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

}  // namespace cvef
