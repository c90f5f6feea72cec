#include "sdftest/series_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "sdftest/error.hpp"

namespace sdftest {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::optional<std::size_t> parse_index(const std::string& s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

std::vector<double> read_series(std::istream& in, const std::string& source,
                                const std::string& column) {
  std::vector<double> values;
  std::optional<std::size_t> index;
  if (column.empty()) {
    index = 0;
  } else {
    index = parse_index(column);
  }
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first_row) {
      first_row = false;
      bool is_header = false;
      if (!index) {
        // A column name was given, so the first row must be a header.
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c] == column) index = c;
        }
        if (!index) {
          throw InputError(source + ": no column named '" + column + "'");
        }
        is_header = true;
      } else if (*index < cells.size() && !parse_number(cells[*index])) {
        is_header = true;
      }
      if (is_header) continue;
    }
    if (*index >= cells.size()) {
      throw InputError(source + ":" + std::to_string(line_no) + ": missing column " +
                       std::to_string(*index));
    }
    const auto value = parse_number(cells[*index]);
    if (!value) {
      throw InputError(source + ":" + std::to_string(line_no) +
                       ": non-numeric value '" + cells[*index] + "'");
    }
    values.push_back(*value);
  }
  if (in.bad()) throw InputError(source + ": read error");
  return values;
}

std::vector<double> read_series(const std::filesystem::path& path,
                                const std::string& column) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_series(in, path.string(), column);
}

void write_columns(std::ostream& out, const std::vector<std::string>& headers,
                   const std::vector<std::vector<double>>& columns) {
  if (headers.size() != columns.size()) {
    throw ParameterError("write_columns: header and column counts differ");
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw ParameterError("write_columns: ragged columns");
  }
  for (std::size_t c = 0; c < headers.size(); ++c) {
    out << (c ? "," : "") << headers[c];
  }
  out << '\n' << std::setprecision(17);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << columns[c][r];
    }
    out << '\n';
  }
}

void write_columns(const std::filesystem::path& path,
                   const std::vector<std::string>& headers,
                   const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_columns(out, headers, columns);
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace sdftest
