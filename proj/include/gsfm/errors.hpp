#pragma once

#include <stdexcept>
#include <string>

namespace gsfm {

// A numerical precondition was violated (bad parameter value, grid too small, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Malformed configuration, descriptor or file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

}  // namespace gsfm
