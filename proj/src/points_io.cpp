#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <string_view>

#include "commscape/error.hpp"
#include "commscape/kmeans.hpp"

namespace commscape {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

bool parse_number(std::string_view cell, double& out) {
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return !cell.empty() && ec == std::errc{} && ptr == cell.data() + cell.size();
}

}  // namespace

PointSet load_points(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> id_col;
  std::size_t width = 0;
  bool first = true;
  std::vector<double> values;
  std::vector<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      width = cells.size();
      double scratch = 0.0;
      bool header = false;
      for (auto c : cells) header |= !parse_number(c, scratch);
      if (header) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c] == "id") id_col = c;
        }
        continue;
      }
    }
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (id_col && c == *id_col) {
        ids.emplace_back(cells[c]);
        continue;
      }
      double v = 0.0;
      if (!parse_number(cells[c], v) || !std::isfinite(v)) {
        throw ParseError("bad coordinate '" + std::string(cells[c]) + "'", line_no, c + 1);
      }
      values.push_back(v);
    }
  }
  const std::size_t dims = width - (id_col ? 1 : 0);
  if (values.empty() || dims == 0) throw ParseError("no points found", line_no);
  return PointSet(dims, std::move(values), std::move(ids));
}

PointSet load_points_text(const std::string& text) {
  std::istringstream in(text);
  return load_points(in);
}

}  // namespace commscape
