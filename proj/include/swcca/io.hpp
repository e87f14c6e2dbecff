#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "swcca/types.hpp"

namespace swcca {

/// Parse failure with a 1-based line/column position for diagnostics.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct MatrixFile {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;  // empty when the file had no header
};

/// Delimiter-separated matrix, one sample per row. The delimiter is sniffed
/// from tab, comma, semicolon or runs of spaces; a non-numeric first row is
/// taken as a header. Throws ParseError with line/column on malformed input
/// and Error when the file cannot be opened.
MatrixFile read_matrix_dsv(const std::filesystem::path& path);

/// Tab-separated with 17 significant digits, so values round-trip exactly.
void write_matrix_dsv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& column_names = {});

}  // namespace swcca
