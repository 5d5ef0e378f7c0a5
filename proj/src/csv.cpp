#include "gridflex/csv.hpp"

#include <charconv>
#include <cstdio>

#include "gridflex/errors.hpp"

namespace gridflex::csv {

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

double parse_double(std::string_view field, const std::string& context) {
    double v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || p != field.data() + field.size())
        throw ParseError("invalid number '" + std::string(field) + "' in " + context);
    return v;
}

long parse_long(std::string_view field, const std::string& context) {
    long v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || p != field.data() + field.size())
        throw ParseError("invalid integer '" + std::string(field) + "' in " + context);
    return v;
}

Writer::Writer(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw ValidationError("cannot open for writing: " + path.string());
}

void Writer::header(const std::string& line) { out_ << line << '\n'; }

void Writer::field(const std::string& s) {
    if (row_open_) out_ << ',';
    out_ << s;
    row_open_ = true;
}

void Writer::field(double v) { field(format(v)); }
void Writer::field(long v) { field(std::to_string(v)); }

void Writer::end_row() {
    out_ << '\n';
    row_open_ = false;
}

Table read_table(const std::filesystem::path& path, bool require_rectangular) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path.string());
    Table t;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (require_rectangular && fields.size() != t.header.size())
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    return t;
}

} // namespace gridflex::csv
