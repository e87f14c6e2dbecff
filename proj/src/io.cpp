#include "swcca/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace swcca {

namespace {

char sniff_delimiter(const std::string& line) {
  if (line.find('\t') != std::string::npos) return '\t';
  if (line.find(',') != std::string::npos) return ',';
  if (line.find(';') != std::string::npos) return ';';
  return ' ';
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> fields;
  if (delim == ' ') {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) fields.push_back(tok);
    return fields;
  }
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    fields.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

MatrixFile read_matrix_dsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file: " + path.string());

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw ParseError("matrix file is empty: " + path.string(), 1, 1);

  const char delim = sniff_delimiter(lines.front());

  MatrixFile out;
  std::size_t first_data_row = 0;
  {
    const auto fields = split_fields(lines.front(), delim);
    double ignored;
    bool numeric = !fields.empty();
    for (const auto& f : fields)
      if (!parse_double(f, ignored)) numeric = false;
    if (!numeric) {
      out.column_names = fields;
      first_data_row = 1;
    }
  }
  if (first_data_row >= lines.size())
    throw ParseError("matrix file has a header but no data rows: " + path.string(), 2, 1);

  const std::size_t cols = split_fields(lines[first_data_row], delim).size();
  const std::size_t rows = lines.size() - first_data_row;
  out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

  for (std::size_t r = 0; r < rows; ++r) {
    const auto fields = split_fields(lines[first_data_row + r], delim);
    const std::size_t line_no = first_data_row + r + 1;
    if (fields.size() != cols) {
      std::ostringstream msg;
      msg << path.string() << ": line " << line_no << " has " << fields.size()
          << " fields, expected " << cols;
      throw ParseError(msg.str(), line_no, fields.size() + 1);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double value;
      if (!parse_double(fields[c], value)) {
        std::ostringstream msg;
        msg << path.string() << ": line " << line_no << ", column " << c + 1
            << ": not a number: '" << fields[c] << "'";
        throw ParseError(msg.str(), line_no, c + 1);
      }
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
    }
  }
  if (!out.column_names.empty() && out.column_names.size() != cols) {
    std::ostringstream msg;
    msg << path.string() << ": header has " << out.column_names.size()
        << " names for " << cols << " columns";
    throw ParseError(msg.str(), 1, 1);
  }
  return out;
}

void write_matrix_dsv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& column_names) {
  std::ofstream outf(path);
  if (!outf) throw Error("cannot open file for writing: " + path.string());
  if (!column_names.empty()) {
    if (static_cast<Eigen::Index>(column_names.size()) != values.cols())
      throw DimensionMismatch("write_matrix_dsv: one name per column required");
    for (std::size_t j = 0; j < column_names.size(); ++j) {
      if (j) outf << '\t';
      outf << column_names[j];
    }
    outf << '\n';
  }
  char buf[64];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) outf << '\t';
      std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
      outf << buf;
    }
    outf << '\n';
  }
  if (!outf) throw Error("write failed: " + path.string());
}

}  // namespace swcca
