#pragma once

#include <stdexcept>
#include <string>

namespace cellsp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid combinatorial structure (bad edge, missing polygon side, duplicate cell).
struct StructuralError : Error {
  using Error::Error;
};

// Matrix dimensions that cannot belong to one complex.
struct ShapeError : Error {
  using Error::Error;
};

// Structurally plausible inputs that violate a required identity (e.g. B1*B2 != 0).
struct ConsistencyError : Error {
  using Error::Error;
};

struct ArgumentError : Error {
  using Error::Error;
};

struct DegenerateInputError : Error {
  using Error::Error;
};

// Sample set whose restricted basis loses rank.
struct IllPosedSamplingError : Error {
  using Error::Error;
};

// Infeasible synthetic-complex request.
struct GenerationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

} // namespace cellsp
