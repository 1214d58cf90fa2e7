#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpp {

// Argument outside a function's mathematical domain (cgf at/after lambda_max,
// rate function at x <= 0, tilt beyond the moment domain).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Source and target are not coordinatewise ordered, so no up-right path exists.
class OrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Lattice point or region outside the extents of a field.
class ExtentError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class UnsupportedLawError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Allocation failure for a lattice buffer; carries the requested size.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t requested_bytes)
      : std::runtime_error(what), requested_bytes_(requested_bytes) {}
  std::size_t requested_bytes() const noexcept { return requested_bytes_; }

 private:
  std::size_t requested_bytes_;
};

}  // namespace lpp
