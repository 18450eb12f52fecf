#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvkit {

/// Base class for every error raised by the library. Input errors derive
/// from it; the CLI maps them to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

class MissingEdgeError : public Error {
 public:
  MissingEdgeError(std::size_t u, std::size_t v)
      : Error("edge (" + std::to_string(u) + "," + std::to_string(v) +
              ") is not in the graph") {}
};

class NodeRangeError : public Error {
 public:
  NodeRangeError(std::size_t node, std::size_t node_count)
      : Error("node " + std::to_string(node) + " out of range (n=" +
              std::to_string(node_count) + ")") {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraphError : public Error {
 public:
  using Error::Error;
};

/// Raised when an edge does not meet the bottleneck hypotheses required to
/// evaluate the Jacobian bound. This is a finding about the edge, not a bug.
class ConditionNotMet : public Error {
 public:
  using Error::Error;
};

}  // namespace curvkit
