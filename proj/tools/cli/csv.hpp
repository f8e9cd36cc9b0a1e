#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bcp::cli {

/// 17 significant digits, enough to read back the same bits.
std::string format_double(double value);

/// Comma-separated rows with LF endings. Cells are written as given.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    CsvWriter& cell(double value);
    CsvWriter& cell(long long value);
    CsvWriter& cell(const std::string& value);
    void end_row();

private:
    void separator();

    std::ostream& out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

/// Splits one CSV line on commas (no quoting support; cells never contain
/// commas).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace bcp::cli
