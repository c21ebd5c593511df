#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fblkit::cli {

// Numbers in human-readable and CSV output carry 12 significant digits;
// NaN prints as "nan" on every platform we build for.
std::string format_number(double v);
std::string format_number(std::uint64_t v);

// RFC 4180 rows: comma separated, CRLF terminated, cells quoted only when
// they contain a comma, quote or newline.
void csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace fblkit::cli
