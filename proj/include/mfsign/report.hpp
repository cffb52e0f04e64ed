#pragma once

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfsign/textio.hpp"
#include "mfsign/version.hpp"

namespace mfsign {
namespace report {

// Compact, plot-friendly formatting with enough digits to reproduce every
// double we emit.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

// The effective configuration, flattened to one canonical line: keys sorted,
// "k=v" pairs joined with ';'.  The same line feeds the hash and the echo,
// so two reports agree on the hash exactly when they agree on the config.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline std::string canonical_config(ConfigEcho kv) {
    std::sort(kv.begin(), kv.end());
    std::string out;
    for (std::size_t i = 0; i < kv.size(); ++i) {
        if (i) out += ';';
        out += kv[i].first;
        out += '=';
        out += kv[i].second;
    }
    return out;
}

// quote a CSV cell only when it needs it
inline std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// ---------------------------------------------------------------------------
// CSV with a fixed header and a trailing metadata comment block:
//
//   col_a,col_b
//   1,2
//   # tool mfsign 0.1.0
//   # config-hash fnv1a64:XXXXXXXXXXXXXXXX
//   # config k=v;k2=v2
// ---------------------------------------------------------------------------

class CsvReport {
  public:
    explicit CsvReport(std::vector<std::string> header) : header_(std::move(header)) {
        if (header_.empty()) throw std::domain_error("CsvReport: header must not be empty");
    }

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != header_.size())
            throw std::domain_error("CsvReport: row has " + std::to_string(cells.size()) +
                                    " cells, header has " + std::to_string(header_.size()));
        rows_.push_back(std::move(cells));
    }

    std::size_t row_count() const { return rows_.size(); }

    std::string render(const ConfigEcho& config) const {
        std::string out = join(header_);
        out += '\n';
        for (const auto& row : rows_) {
            out += join(row);
            out += '\n';
        }
        std::string line = canonical_config(config);
        out += "# tool ";
        out += version_string;
        out += '\n';
        out += "# config-hash fnv1a64:";
        out += textio::hex64(textio::fnv1a64(line));
        out += '\n';
        out += "# config ";
        out += line;
        out += '\n';
        return out;
    }

  private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cells[i]);
        }
        return out;
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace report
} // namespace mfsign
