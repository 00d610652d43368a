#include "cqed/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace cqed {

std::string format_number(double value)
{
    if (value == 0.0) {
        return "0"; // also folds -0
    }
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                      std::chars_format::general, csv_significant_digits);
    return std::string(buffer.data(), result.ptr);
}

void write_row(std::ostream& out, std::initializer_list<double> values)
{
    bool first = true;
    for (double v : values) {
        out << (first ? "" : ",") << format_number(v);
        first = false;
    }
    out << '\n';
}

void write_row(std::ostream& out, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i == 0 ? "" : ",") << cells[i];
    }
    out << '\n';
}

void write_comment(std::ostream& out, std::string_view key, std::string_view value)
{
    out << "# " << key << " = " << value << '\n';
}

} // namespace cqed
