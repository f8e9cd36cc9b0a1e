#include "cli/csv.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "bcp/error.hpp"

namespace bcp::cli {

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                         std::chars_format::general, 17);
    if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cli", "number too long");
    return std::string(buffer.data(), ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    for (const auto& name : header) cell(name);
    end_row();
}

void CsvWriter::separator() {
    if (filled_ > 0) out_ << ',';
    ++filled_;
}

CsvWriter& CsvWriter::cell(double value) {
    separator();
    out_ << format_double(value);
    return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::cell(const std::string& value) {
    separator();
    out_ << value;
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) {
        throw Error(ErrorCode::DimensionMismatch, "cli",
                    "CSV row has " + std::to_string(filled_) + " cells, header has " +
                        std::to_string(columns_));
    }
    out_ << '\n';
    filled_ = 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace bcp::cli
