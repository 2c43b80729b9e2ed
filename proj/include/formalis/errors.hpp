#ifndef FORMALIS_ERRORS_HPP
#define FORMALIS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace formalis {

/// Input text does not conform to the polynomial grammar (or a JSON file
/// is malformed).  Carries the byte offset of the offending token.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::string msg, std::size_t position)
      : std::runtime_error(std::move(msg)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An operation precondition was violated (mismatched rings, zero divisor
/// input, invalid construction data, ...).
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource budget (degree cap, S-pair count, iteration cap)
/// was exceeded.  Distinct from mathematical failure by contract.
class resource_cap_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace formalis

#endif
