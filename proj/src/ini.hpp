#pragma once

// Shared helpers for the key/value configuration files (INI dialect of
// boost::property_tree: "[section]", "key = value", ';' comments).

#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>

namespace omcool::ini {

using Tree = boost::property_tree::ptree;

// Parses INI text; syntax errors become ErrorKind::config with the line number.
Tree parse(const std::string& text);

// Strict number parsing; the field name is used in error messages.
double to_double(const std::string& value, std::string_view field);
long to_long(const std::string& value, std::string_view field);
bool to_bool(const std::string& value, std::string_view field);
std::vector<double> to_double_list(const std::string& value, std::string_view field);

// Closest candidate by edit distance, or empty when nothing is close.
std::string suggest(std::string_view key, const std::vector<std::string>& candidates);

}  // namespace omcool::ini
