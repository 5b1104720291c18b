#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qdiff/types.hpp"

namespace qdiff {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data. `path` names the offending field
/// (e.g. "a.rho"), empty when the problem is not tied to one field.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A series that has to be finite is not (or cannot be bounded).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (q* >= 1, p < 1, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enclosure could not be tightened to the requested width before the
/// cutoff cap. Carries the best enclosure found.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, Enclosure best) : Error(what), best_(best) {}
  const Enclosure& best() const { return best_; }

 private:
  Enclosure best_;
};

/// An index search ran past its scan limit.
class ScanExhausted : public Error {
 public:
  ScanExhausted(const std::string& what, Index last_index, std::optional<Enclosure> last)
      : Error(what), last_index_(last_index), last_(last) {}
  Index last_index() const { return last_index_; }
  const std::optional<Enclosure>& last() const { return last_; }

 private:
  Index last_index_;
  std::optional<Enclosure> last_;
};

/// Fixed-point iteration failed: no certified contraction, iteration budget
/// exhausted, or an iterate left the admissible ball.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// A window does not cover the indices an evaluation needs.
class CoverageError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdiff
