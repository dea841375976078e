#pragma once

#include <stdexcept>
#include <string>

namespace tsera {

/// Base class for all errors raised by the library. `kind()` maps onto the
/// CLI exit-code families (data vs numerical failures).
class Error : public std::runtime_error {
 public:
  enum class Kind { Index, Shape, Domain, Degenerate, Parse, Numerical, Io };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct IndexError : Error {
  explicit IndexError(const std::string& w) : Error(Kind::Index, w) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error(Kind::Shape, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(Kind::Domain, w) {}
};
// zero scatter, zero variance, all-zero covariance after centering, ...
struct DegenerateError : Error {
  explicit DegenerateError(const std::string& w) : Error(Kind::Degenerate, w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(Kind::Parse, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(Kind::Numerical, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(Kind::Io, w) {}
};

}  // namespace tsera
