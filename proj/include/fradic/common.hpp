#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fradic {

// Raised when a requested integral has a non-integrable endpoint singularity
// (weight exponent <= -1). The CLI maps this to exit code 3.
class NonIntegrableError : public std::domain_error {
 public:
  explicit NonIntegrableError(const std::string& what) : std::domain_error(what) {}
};

namespace detail {

inline void warn(const char* msg) { std::fprintf(stderr, "fradic: warning: %s\n", msg); }

}  // namespace detail
}  // namespace fradic
