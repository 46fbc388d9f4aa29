#include "smoothstop/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "smoothstop/errors.hpp"

namespace smoothstop::csv {

std::string format(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), end};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_double(std::string_view field, std::string_view context) {
    field = trim(field);
    if (field == "nan") return std::nan("");
    if (field == "inf") return INFINITY;
    if (field == "-inf") return -INFINITY;
    double value = 0.0;
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        throw ParseError(std::string(context) + ": not a number: '" + std::string(field) + "'");
    return value;
}

long long parse_integer(std::string_view field, std::string_view context) {
    field = trim(field);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        throw ParseError(std::string(context) + ": not an integer: '" + std::string(field) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<double> read_indexed_column(const std::filesystem::path& path,
                                        std::string_view value_name) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    const std::string expected_header = "index," + std::string(value_name);
    std::string line;
    if (!std::getline(in, line) || trim(line) != expected_header)
        throw ParseError(path.string() + ": expected header '" + expected_header + "'");

    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        auto fields = split(trim(line));
        if (fields.size() != 2) throw ParseError(where + ": expected 2 fields");
        long long index = parse_integer(fields[0], where);
        if (index != static_cast<long long>(values.size()) + 1)
            throw ParseError(where + ": expected index " + std::to_string(values.size() + 1) +
                             ", found " + std::to_string(index));
        double v = parse_double(fields[1], where);
        if (!std::isfinite(v)) throw ParseError(where + ": non-finite value");
        values.push_back(v);
    }
    if (values.empty()) throw ParseError(path.string() + ": no data rows");
    return values;
}

void write_indexed_column(const std::filesystem::path& path,
                          std::string_view value_name,
                          const std::vector<double>& values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "index," << value_name << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) out << (i + 1) << ',' << format(values[i]) << '\n';
}

}  // namespace smoothstop::csv
