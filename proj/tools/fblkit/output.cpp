#include "fblkit/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace fblkit::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string format_number(std::uint64_t v) {
    return std::to_string(v);
}

namespace {

bool needs_quoting(const std::string& cell) {
    return cell.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& cell) {
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out << ',';
        out << (needs_quoting(cells[i]) ? quoted(cells[i]) : cells[i]);
    }
    out << "\r\n";
}

}  // namespace fblkit::cli
