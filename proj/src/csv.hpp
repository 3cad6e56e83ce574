#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace textbends::detail {

/// Writes one RFC-4180 record terminated by CRLF.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Reads one record; returns false at end of input. Throws IntegrityError on
/// an unterminated quoted field.
bool read_csv_row(std::istream& in, std::vector<std::string>& fields);

std::string format_double(double v);

}  // namespace textbends::detail
