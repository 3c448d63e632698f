#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace steer::csv {

using Record = std::vector<std::string>;

/// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line endings.
/// Blank lines are skipped; a leading UTF-8 BOM is dropped.
std::vector<Record> parse(std::string_view text);

/// Quotes a field only when it contains a delimiter, quote, or line break.
std::string escape(std::string_view field);

}  // namespace steer::csv
