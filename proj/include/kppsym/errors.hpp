#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kppsym {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownFunction : public ParseError {
 public:
  UnknownFunction(std::size_t offset, const std::string& name)
      : ParseError(offset, "unknown function '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnboundSymbol : public Error {
 public:
  explicit UnboundSymbol(const std::string& name)
      : Error("unbound symbol '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NonPolynomial : public Error {
 public:
  explicit NonPolynomial(const std::string& var)
      : Error("expression is not polynomial in '" + var + "'"), var_(var) {}

  const std::string& var() const noexcept { return var_; }

 private:
  std::string var_;
};

class OrderOverflow : public Error {
 public:
  using Error::Error;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

class SeriesNotClosing : public Error {
 public:
  using Error::Error;
};

class ZeroElement : public Error {
 public:
  ZeroElement() : Error("the zero element spans no subalgebra") {}
};

class NotAffine : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace kppsym
