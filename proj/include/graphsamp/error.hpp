#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace graphsamp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// The input has no usable structure: an all-zero adjacency, an all-zero
// score vector, a zero signal, or a division by a vanishing quantity.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class SymmetryError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed (eigensolver did not converge, NaN produced).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Inputs contradict each other, e.g. a drawn node that has zero probability.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class InfiniteVarianceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphsamp
