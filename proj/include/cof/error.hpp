#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cof {

/// Base for every error raised by the library. `what()` is a single line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("parse error at line " + std::to_string(line) + ": " + msg), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  EmptyCorpusError() : Error("empty corpus: statistics undefined") {}
};

class SplitError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public TrainingError {
 public:
  explicit DivergenceError(std::size_t epoch)
      : TrainingError("non-finite loss at epoch " + std::to_string(epoch)), epoch_(epoch) {}
  [[nodiscard]] std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class ModelLoadError : public Error {
 public:
  using Error::Error;
};

}  // namespace cof
