#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace gridflex::csv {

/// Splits one CSV line on commas. No quoting support; none of our schemas
/// need it.
std::vector<std::string> split(std::string_view line);

/// Formats a double with 9 significant digits ("%.9g"). All report files go
/// through this so replays are byte-identical.
std::string format(double v);

double parse_double(std::string_view field, const std::string& context);
long parse_long(std::string_view field, const std::string& context);

/// Line-oriented CSV writer with deterministic numeric formatting.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void header(const std::string& line);
    void field(const std::string& s);
    void field(double v);
    void field(long v);
    void end_row();

private:
    std::ofstream out_;
    bool row_open_ = false;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a whole CSV file. Throws ParseError on ragged rows when
/// `require_rectangular` is set.
Table read_table(const std::filesystem::path& path, bool require_rectangular = true);

} // namespace gridflex::csv
