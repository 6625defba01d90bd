#include "padic/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace padic {

using nlohmann::json;

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ValidationError({"unknown format '" + s + "' (expected csv or json)"});
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    // to_chars ignores the global locale
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string to_csv(const Table& t) {
    std::string out;
    for (size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

// nlohmann writes shortest round-trip doubles; non-finite values become strings
json num(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

double from_num(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw ValidationError({"bad number '" + s + "'"});
}

}  // namespace

std::string to_json(const Table& t) {
    json j;
    j["columns"] = t.header;
    j["rows"] = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (double x : row) r.push_back(num(x));
        j["rows"].push_back(r);
    }
    return j.dump(1) + "\n";
}

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

void write_output(const Table& t, Format f, const std::string& path) {
    if (t.rows.empty()) throw ValidationError({"refusing to write an empty table"});
    write_text(f == Format::Csv ? to_csv(t) : to_json(t), path);
}

std::string spectrum_to_json(const Spectrum& sp) {
    json j;
    j["params"] = {{"p", sp.params.p}, {"alpha", sp.params.alpha}, {"r", sp.params.r}, {"nu", sp.params.nu}};
    j["K"] = sp.K;
    j["f0"] = num(sp.f0);
    j["sum_b"] = num(sp.sum_b);
    j["tail_bound"] = num(sp.tail_bound);
    j["rounding"] = num(sp.rounding);
    j["lines"] = json::array();
    for (const auto& l : sp.lines)
        j["lines"].push_back({{"k", l.k},
                              {"lambda", num(l.lambda)},
                              {"delta", num(l.delta)},
                              {"residue", num(l.residue)},
                              {"residue_err", num(l.residue_err)},
                              {"residual", num(l.residual)}});
    return j.dump(1) + "\n";
}

Spectrum spectrum_from_json(const std::string& text) {
    Spectrum sp;
    try {
        const json j = json::parse(text);
        const auto& pj = j.at("params");
        sp.params = {pj.at("p").get<int>(), pj.at("alpha").get<double>(), pj.at("r").get<int>(),
                     pj.at("nu").get<int>()};
        sp.K = j.at("K").get<int>();
        sp.f0 = from_num(j.at("f0"));
        sp.sum_b = from_num(j.at("sum_b"));
        sp.tail_bound = from_num(j.at("tail_bound"));
        sp.rounding = from_num(j.at("rounding"));
        for (const auto& l : j.at("lines")) {
            SpectralLine s;
            s.k = l.at("k").get<int>();
            s.lambda = from_num(l.at("lambda"));
            s.delta = from_num(l.at("delta"));
            s.residue = from_num(l.at("residue"));
            s.residue_err = from_num(l.at("residue_err"));
            s.residual = from_num(l.at("residual"));
            sp.lines.push_back(s);
        }
    } catch (const json::exception& e) {
        throw ValidationError({std::string("malformed spectrum JSON: ") + e.what()});
    }
    return sp;
}

}  // namespace padic
