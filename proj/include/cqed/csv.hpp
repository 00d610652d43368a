#pragma once

// Locale-independent CSV formatting: '.' decimal separator, 12 significant digits.

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

inline constexpr int csv_significant_digits = 12;

std::string format_number(double value);

void write_row(std::ostream& out, std::initializer_list<double> values);
void write_row(std::ostream& out, const std::vector<std::string>& cells);

// "# key = value" header lines.
void write_comment(std::ostream& out, std::string_view key, std::string_view value);

} // namespace cqed
