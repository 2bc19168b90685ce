#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fame::csv {

/// Quotes a field when it contains a comma, quote, or line break.
[[nodiscard]] std::string escape(std::string_view field);

/// Splits one CSV record, honouring double-quoted fields.
[[nodiscard]] std::vector<std::string> split(std::string_view line);

}  // namespace fame::csv
