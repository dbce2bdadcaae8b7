#include "csv.hpp"

#include "uniband/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace uniband::cli {

namespace {

bool parse_double(std::string_view token, double& out)
{
  if (!token.empty() && token.front() == '+') { // from_chars rejects a leading +
    token.remove_prefix(1);
    if (token.empty() || token.front() == '-' || token.front() == '+') {
      return false;
    }
  }
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

} // namespace

Eigen::VectorXd read_csv_column(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config_error("cannot open input file: " + path);
  }

  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
      view.remove_prefix(3); // UTF-8 BOM
    }
    view = trim(view);
    if (view.empty()) {
      continue;
    }
    if (view.find(',') != std::string_view::npos) {
      const auto comma = view.find(',');
      if (!trim(view.substr(comma + 1)).empty()) {
        throw config_error("line " + std::to_string(line_no) + ": expected a single column");
      }
      view = trim(view.substr(0, comma));
    }
    double v = 0.0;
    if (!parse_double(view, v)) {
      if (first_content_line) {
        first_content_line = false; // header
        continue;
      }
      throw config_error("line " + std::to_string(line_no) + ": not a number: \"" +
                         std::string(view) + "\"");
    }
    if (!std::isfinite(v)) {
      throw config_error("line " + std::to_string(line_no) + ": non-finite value");
    }
    first_content_line = false;
    values.push_back(v);
  }
  if (values.empty()) {
    throw config_error("input file contains no numeric rows: " + path);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

} // namespace uniband::cli
