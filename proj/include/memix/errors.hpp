#ifndef MEMIX_ERRORS_HPP
#define MEMIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace memix {

// Error taxonomy, aligned with the CLI exit codes:
//   InputError   -> 2  (malformed input, bad arguments, dimension mismatches)
//   DomainError  -> 3  (mathematically undefined request: divergent moment,
//                       conditioning on a null event, spectrum outside an
//                       analyticity region, ...)
//   NumericError -> 4  (algorithm failed to converge or lost accuracy)
class Error : public std::runtime_error {
 public:
  Error(int exit_code, const std::string& what)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(2, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(3, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(4, what) {}
};

inline void require_input(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

inline void require_domain(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

}  // namespace memix

#endif  // MEMIX_ERRORS_HPP
