#pragma once

#include <stdexcept>
#include <string>

namespace rectm {

enum class ErrorKind
{
  invalid_argument,
  empty_neighborhood,
  degenerate_point,
  nonpositive_expectile,
  moment_nonexistence,
  domain,
  convergence,
  selection_failure,
  oracle_failure,
  configuration,
  data,
  io
};

const char* to_string(ErrorKind kind);

//! Single exception type for the library; `kind()` tells callers what failed
//! so per-cell failures can be recorded rather than aborting a whole run.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what)
    , kind_(kind)
  {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void
fail(ErrorKind kind, const std::string& what)
{
  throw Error(kind, what);
}

inline void
require(bool condition, const std::string& what)
{
  if (!condition)
    fail(ErrorKind::invalid_argument, what);
}

} // namespace rectm
