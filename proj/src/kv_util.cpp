#include "kv_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isosim/errors.hpp"

namespace isosim::detail {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::pair<std::string, std::string>> parse_kv(
    const std::string& text, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::string key, value;
    size_t eq = line.find('=');
    if (eq != std::string::npos) {
      key = trim(line.substr(0, eq));
      value = trim(line.substr(eq + 1));
    } else {
      size_t sp = line.find_first_of(" \t");
      if (sp == std::string::npos) {
        throw ParseError(origin + ":" + std::to_string(lineno) +
                         ": expected 'key = value', got '" + line + "'");
      }
      key = trim(line.substr(0, sp));
      value = trim(line.substr(sp + 1));
    }
    if (key.empty() || value.empty()) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = value', got '" + line + "'");
    }
    out.emplace_back(key, value);
  }
  return out;
}

double to_double(const std::string& s, const std::string& context) {
  const char* cstr = s.c_str();
  char* rest = nullptr;
  double v = std::strtod(cstr, &rest);
  if (rest == cstr || *rest != '\0')
    throw ParseError(context + ": bad number '" + s + "'");
  return v;
}

std::string dirname(const std::string& path) {
  std::filesystem::path p(path);
  auto parent = p.parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

}  // namespace isosim::detail
