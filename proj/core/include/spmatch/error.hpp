#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spmatch {

/// Malformed pattern, PCS or dump text. Carries the 1-based line number when known.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class CorpusError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A symbol has no frequency in the corpus and no fallback is enabled.
class LookupError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An Old-Old mismatch makes the alignment impossible to flatten into one sequence.
class ProjectionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (e.g. passed an invalid alignment).
class ContractError : public std::logic_error {
  using std::logic_error::logic_error;
};

/// A string uses a symbol outside the PCS alphabet.
class AlphabetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class UnsupportedFormError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spmatch
