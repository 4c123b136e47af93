#ifndef XFEM_PARAMS_HPP
#define XFEM_PARAMS_HPP

#include "xfem/error.hpp"

#include <charconv>
#include <regex>
#include <sstream>
#include <string>

namespace xfem {

struct Params
{
    bool use_xfem = true;
    bool blending = true;
    int cycles = 6;
    int q_points = 3;
};

namespace detail {

inline std::string collapse_spaces(const std::string& s)
{
    std::string out;
    bool space = false;
    for (char ch : s) {
        if (ch == ' ' || ch == '\t') {
            space = true;
            continue;
        }
        if (space && !out.empty())
            out += ' ';
        space = false;
        out += ch;
    }
    return out;
}

inline bool parse_bool(const std::string& v, int line)
{
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    throw Error("parameter file line " + std::to_string(line) + ": expected true or false, got '" + v + "'");
}

inline int parse_positive_int(const std::string& v, int line)
{
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw Error("parameter file line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
    if (out < 1)
        throw Error("parameter file line " + std::to_string(line) + ": value must be >= 1");
    return out;
}

} // namespace detail

/// Parses `set <key> = <value>` lines. Blank lines and lines starting with '#'
/// are skipped; missing keys keep their defaults.
inline Params parse_params(const std::string& text)
{
    static const std::regex line_re(R"(^\s*set\s+(.*?)\s*=\s*(.*?)\s*$)");
    Params p;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::smatch m;
        if (!std::regex_match(line, m, line_re))
            throw Error("parameter file line " + std::to_string(number) + ": malformed line '" + line + "'");
        const std::string key = detail::collapse_spaces(m[1].str());
        const std::string value = m[2].str();
        if (key == "Using XFEM")
            p.use_xfem = detail::parse_bool(value, number);
        else if (key == "blending")
            p.blending = detail::parse_bool(value, number);
        else if (key == "Number of Cycles")
            p.cycles = detail::parse_positive_int(value, number);
        else if (key == "q_points")
            p.q_points = detail::parse_positive_int(value, number);
        else
            throw Error("parameter file line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    return p;
}

} // namespace xfem

#endif // XFEM_PARAMS_HPP
