#pragma once

#include <stdexcept>
#include <string>

namespace modcomm {

// Base of every library error; what() is prefixed with the module name.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message);
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Bad arguments, violated preconditions and malformed configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidPartition : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Raised by predict_geometric_integer when a junction is incomplete.
class PredictionRefused : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A numerical contract could not be honoured.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegenerateFilling : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResidueExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace modcomm
