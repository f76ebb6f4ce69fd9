#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>

#include "mlsim/errors.hpp"

namespace mlsim::detail {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.pop_back();
    }
    return out;
}

bool next_row(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        return true;
    }
    return false;
}

std::int64_t parse_i64(const std::string& s, const std::string& file, std::size_t line,
                       const char* what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(file, line, std::string("bad ") + what + " '" + s + "'");
    return v;
}

double parse_f64(const std::string& s, const std::string& file, std::size_t line,
                 const char* what) {
    if (s.empty()) throw ParseError(file, line, std::string("empty ") + what);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v))
        throw ParseError(file, line, std::string("bad ") + what + " '" + s + "'");
    return v;
}

} // namespace mlsim::detail
