#pragma once

#include <stdexcept>
#include <string>

namespace cppweave {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input document. `locus` names the line
/// ("line 7") or JSON field ("links[2].length") that triggered it.
class InputError : public Error {
 public:
  InputError(std::string locus, const std::string& what)
      : Error(locus + ": " + what), locus_(std::move(locus)) {}
  const std::string& locus() const noexcept { return locus_; }

 private:
  std::string locus_;
};

/// No pair of link-disjoint paths exists between a demand's end nodes.
class NoDisjointPair : public Error {
 public:
  NoDisjointPair(int demand_id, const std::string& what)
      : Error(what), demand_id_(demand_id) {}
  int demand_id() const noexcept { return demand_id_; }

 private:
  int demand_id_;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class MalformedTree : public Error {
 public:
  using Error::Error;
};

class UnknownLink : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace cppweave
