#pragma once

#include <stdexcept>
#include <string>

namespace chainprime {

/// Argument outside the mathematical domain of an operation (s = 0 for a
/// mirror, gcd(u, M) != 1 for a progression, g < 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured resource guard (interval cells, frontier bytes, search
/// bounds) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed during a scan.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace chainprime
