#include "msqrt/matio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace msqrt {

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw ParseError("missing matrix header line");
  std::istringstream header(line);
  long long n = 0, m = 0;
  if (!(header >> n >> m) || n < 1 || m < 1)
    throw ParseError("malformed matrix header: expected `n m`");
  Matrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (long long i = 0; i < n; ++i) {
    if (!next_content_line(in, line))
      throw ParseError("unexpected end of input at row " + std::to_string(i));
    std::istringstream row(line);
    for (long long j = 0; j < m; ++j) {
      double v;
      if (!(row >> v))
        throw ParseError("malformed value at row " + std::to_string(i) + ", column " +
                         std::to_string(j));
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
    }
  }
  return out;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m,
                  const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << "# " << c << "\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::vector<std::string>& comments) {
  std::ostringstream body;
  write_matrix(body, m, comments);
  write_text_file(path, body.str());
}

void write_text_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace msqrt
