#pragma once

#include <stdexcept>
#include <string>

namespace qsearch {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input to a constructor or operation (self-loops, bad sizes, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A distance-based operation was asked about a graph that is not connected.
class DisconnectedGraph : public Error {
 public:
  DisconnectedGraph(unsigned from, unsigned to)
      : Error("graph is disconnected: vertex " + std::to_string(to) +
              " is unreachable from vertex " + std::to_string(from)),
        from_(from),
        to_(to) {}

  unsigned from() const noexcept { return from_; }
  unsigned to() const noexcept { return to_; }

 private:
  unsigned from_;
  unsigned to_;
};

// A configured cap (vertices, memo entries, time, enumeration size) was hit.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// A strategy produced an illegal move; the message names the strategy.
class StrategyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsearch
