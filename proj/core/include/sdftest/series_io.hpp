#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdftest {

/// Reads one numeric column from a comma-separated file.
///
/// An optional single header row is detected when the first row's selected
/// cell does not parse as a number. `column` is a header name or a 0-based
/// index; empty selects the first column. Blank lines are skipped.
/// Throws InputError (with path and line) on unreadable files, unknown
/// columns and non-numeric cells.
std::vector<double> read_series(const std::filesystem::path& path,
                                const std::string& column = "");

/// Same, from an already open stream; `source` names it in error messages.
std::vector<double> read_series(std::istream& in, const std::string& source,
                                const std::string& column = "");

/// Writes equal-length columns with a header row; doubles at 17 significant
/// digits so files round-trip exactly.
void write_columns(std::ostream& out, const std::vector<std::string>& headers,
                   const std::vector<std::vector<double>>& columns);

void write_columns(const std::filesystem::path& path,
                   const std::vector<std::string>& headers,
                   const std::vector<std::vector<double>>& columns);

}  // namespace sdftest
