#ifndef MSQRT_MATIO_HPP
#define MSQRT_MATIO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "msqrt/matrix.hpp"

namespace msqrt {

class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Text format: first non-comment line `n m`, then n rows of m floats.
/// Lines starting with `#` are comments; writers emit 17 significant digits.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& m,
                  const std::vector<std::string>& comments = {});

/// Writes to a temporary file in the same directory, then renames.
void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::vector<std::string>& comments = {});

/// Atomic text-file write used for CSV outputs as well.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace msqrt

#endif
