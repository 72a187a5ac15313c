#include "ini.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "omcool/errors.hpp"

namespace omcool::ini {

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

Tree parse(const std::string& text)
{
    std::istringstream in(text);
    Tree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw Error(ErrorKind::config, "line " + std::to_string(e.line()) + ": " + e.message());
    }
    return tree;
}

double to_double(const std::string& value, std::string_view field)
{
    const std::string v = trim(value);
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (v.empty() || ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::config, std::string(field) + ": expected a number, got '" + v + "'");
    }
    return out;
}

long to_long(const std::string& value, std::string_view field)
{
    const std::string v = trim(value);
    long out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (v.empty() || ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::config, std::string(field) + ": expected an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& value, std::string_view field)
{
    const std::string v = trim(value);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw Error(ErrorKind::config, std::string(field) + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_double_list(const std::string& value, std::string_view field)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item, field));
    if (out.empty()) throw Error(ErrorKind::config, std::string(field) + ": empty list");
    return out;
}

std::string suggest(std::string_view key, const std::vector<std::string>& candidates)
{
    std::string best;
    std::size_t best_d = std::max<std::size_t>(2, key.size() / 3) + 1;
    for (const auto& c : candidates) {
        const auto d = edit_distance(key, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

}  // namespace omcool::ini
