#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "railrisk/error.hpp"

namespace railrisk::detail {

// Minimal CSV reader: header row, double-quoted fields, '#' comment lines.
struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string path;

    // Column index by header name; throws ParseError when absent.
    std::size_t col(const std::string& name) const;
};

CsvFile read_csv(const std::filesystem::path& path);

double parse_double(const std::string& s, const std::string& where);
long parse_long(const std::string& s, const std::string& where);
std::string lower(std::string s);

}  // namespace railrisk::detail
