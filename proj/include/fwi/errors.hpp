#ifndef FWI_ERRORS_HPP
#define FWI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fwi {

// Bad user input or inconsistent arguments. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown (singular factorization, non-finite fields, ...).
// CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fwi

#endif
