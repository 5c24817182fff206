#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <string_view>

#include "modecenter/cli.hpp"
#include "modecenter/error.hpp"

namespace modecenter::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == ',' && !quoted) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(line.substr(start));
  return out;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ": line " << line << ": " << what;
  throw DataError(os.str());
}

double parse_number(std::string_view tok, const std::string& source, std::size_t line) {
  tok = unquote(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    fail(source, line, "not a number: '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) fail(source, line, "non-finite value '" + std::string(tok) + "'");
  return v;
}

}  // namespace

std::vector<double> read_values(std::istream& in, const std::optional<std::string>& column,
                                const std::string& source) {
  std::vector<double> values;
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> col_index;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
    if (line.empty() || line.front() == '#') continue;
    if (!column) {
      values.push_back(parse_number(line, source, line_no));
      continue;
    }
    const auto fields = split_csv(line);
    if (!col_index) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (unquote(fields[i]) == *column) col_index = i;
      }
      if (!col_index) fail(source, line_no, "header has no column named '" + *column + "'");
      continue;
    }
    if (*col_index >= fields.size()) {
      fail(source, line_no, "missing field for column '" + *column + "'");
    }
    values.push_back(parse_number(fields[*col_index], source, line_no));
  }
  if (in.bad()) throw DataError(source + ": read error");
  if (values.empty()) throw DataError(source + ": no data values found");
  return values;
}

}  // namespace modecenter::cli
