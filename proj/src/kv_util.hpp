#pragma once

#include <string>
#include <utility>
#include <vector>

namespace isosim::detail {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& line, char sep);

std::string read_text_file(const std::string& path);

// "key = value" / "key value" lines; '#' starts a comment. Order-preserving.
std::vector<std::pair<std::string, std::string>> parse_kv(
    const std::string& text, const std::string& origin);

double to_double(const std::string& s, const std::string& context);

std::string dirname(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace isosim::detail
