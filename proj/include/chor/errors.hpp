#pragma once

#include <stdexcept>
#include <string>

namespace chor {

// Base for all diagnostics carrying a source location (1-based).
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

class ParseError : public SyntaxError {
  using SyntaxError::SyntaxError;
};
class BindError : public SyntaxError {
  using SyntaxError::SyntaxError;
};
class DupTagError : public SyntaxError {
  using SyntaxError::SyntaxError;
};
class DupProcessError : public SyntaxError {
  using SyntaxError::SyntaxError;
};

class NotEnabled : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class GuardNotBoolean : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class NotACom : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class NonEmptyQueue : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class NotProjectable : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class IllFormed : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace chor
