#include "cellsp/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "cellsp/errors.hpp"

namespace cellsp {

std::string formatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void writeMatrixCsv(std::ostream& out, const MatrixX<double>& m) {
  out << m.rows() << "," << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << formatDouble(m(i, j));
    }
    out << "\n";
  }
}

void writeMatrixCsvFile(const std::string& path, const MatrixX<double>& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writeMatrixCsv(out, m);
}

MatrixX<double> readMatrixCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("matrix csv: missing header line");
  Index rows = 0, cols = 0;
  {
    std::istringstream hs(line);
    char comma = 0;
    if (!(hs >> rows >> comma >> cols) || comma != ',' || rows < 0 || cols < 0)
      throw IoError("matrix csv: malformed header '" + line + "'");
  }
  MatrixX<double> m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw IoError("matrix csv: truncated at row " + std::to_string(i));
    std::istringstream ls(line);
    std::string cell;
    for (Index j = 0; j < cols; ++j) {
      if (!std::getline(ls, cell, ','))
        throw IoError("matrix csv: short row " + std::to_string(i));
      try {
        m(i, j) = std::stod(cell);
      } catch (const std::exception&) {
        throw IoError("matrix csv: unreadable value '" + cell + "' at row " + std::to_string(i));
      }
    }
    if (std::getline(ls, cell, ','))
      throw IoError("matrix csv: long row " + std::to_string(i));
  }
  return m;
}

MatrixX<double> readMatrixCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return readMatrixCsv(in);
}

} // namespace cellsp
