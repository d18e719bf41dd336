#pragma once

#include <stdexcept>
#include <string>

namespace dsvm {

enum class ErrorKind {
  invalid_topology,
  invalid_edge,
  invalid_node,
  invalid_parameter,
  ingestion,
  partition,
  numeric,
  degenerate_data,
  dimension_mismatch,
  oracle_refused,
  config,
  io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers
// (notably the CLI) map failures to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dsvm
