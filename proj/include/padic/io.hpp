#pragma once

#include <string>
#include <vector>

#include "padic/spectrum.hpp"

namespace padic {

enum class Format { Csv, Json };
Format parse_format(const std::string& s);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// 17 significant digits, '.' decimal separator regardless of locale
std::string format_double(double x);

std::string to_csv(const Table& t);
// {"columns": [...], "rows": [[...], ...]}
std::string to_json(const Table& t);

// path "-" writes to stdout; throws ValidationError on an empty table and
// std::runtime_error (with the path) on I/O failure
void write_output(const Table& t, Format f, const std::string& path);
void write_text(const std::string& text, const std::string& path);

std::string spectrum_to_json(const Spectrum& sp);
Spectrum spectrum_from_json(const std::string& text);

}  // namespace padic
