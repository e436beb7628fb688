#include "csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

namespace railrisk::detail {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, const std::string& where) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ParseError(where + ": unterminated quote");
    out.push_back(field);
    for (auto& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.pop_back();
    }
    return out;
}

}  // namespace

std::size_t CsvFile::col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw ParseError(path + ": missing required column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    CsvFile csv;
    csv.path = path.string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = line;
        while (!stripped.empty() && (stripped.back() == '\r' || stripped.back() == '\n')) {
            stripped.pop_back();
        }
        if (stripped.empty()) continue;
        if (stripped[0] == '#') continue;
        auto fields = split_csv_line(stripped, csv.path + ":" + std::to_string(lineno));
        if (csv.header.empty()) {
            csv.header = std::move(fields);
        } else {
            if (fields.size() != csv.header.size()) {
                throw ParseError(csv.path + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(csv.header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
            }
            csv.rows.push_back(std::move(fields));
        }
    }
    if (csv.header.empty()) throw ParseError(path.string() + ": no header row");
    return csv;
}

double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(where + ": not a number: '" + s + "'");
    }
    return v;
}

long parse_long(const std::string& s, const std::string& where) {
    long v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(where + ": not an integer: '" + s + "'");
    }
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace railrisk::detail
