#pragma once

#include <iosfwd>
#include <string>

#include "cellsp/types.hpp"

namespace cellsp {

// CSV matrix dump: "rows,cols" header line, then one comma-separated line per
// row. Values are written with enough digits to round-trip doubles exactly.
void writeMatrixCsv(std::ostream& out, const MatrixX<double>& m);
void writeMatrixCsvFile(const std::string& path, const MatrixX<double>& m);
MatrixX<double> readMatrixCsv(std::istream& in);
MatrixX<double> readMatrixCsvFile(const std::string& path);

// Shortest representation that parses back to the same double.
std::string formatDouble(double value);

} // namespace cellsp
