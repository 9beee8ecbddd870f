#pragma once

#include <stdexcept>
#include <string>

namespace splitaztec {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularInputError : std::domain_error {
  using std::domain_error::domain_error;
};

struct BranchCutError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegenerateSpectrumError : std::domain_error {
  using std::domain_error::domain_error;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace splitaztec
