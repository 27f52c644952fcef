#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "upt/common.hpp"

namespace upt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class SingularGram : public Error {
 public:
  using Error::Error;
};

// A connected component of the screened graph is larger than the cleaning cap.
// This is the observable symptom of the separable-after-screening property failing.
class ComponentTooLarge : public Error {
 public:
  ComponentTooLarge(Index size, Index cap)
      : Error("component of size " + std::to_string(size) + " exceeds cleaning cap " +
              std::to_string(cap)),
        size_(size),
        cap_(cap) {}
  Index size() const { return size_; }
  Index cap() const { return cap_; }

 private:
  Index size_;
  Index cap_;
};

class NegativeRadicand : public Error {
 public:
  explicit NegativeRadicand(double radicand)
      : Error("t2* radicand is negative (" + std::to_string(radicand) +
              "); enable clamping to use t2 = 0"),
        radicand_(radicand) {}
  double radicand() const { return radicand_; }

 private:
  double radicand_;
};

class NoExceedances : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace upt
