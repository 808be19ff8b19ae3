#pragma once

#include <stdexcept>
#include <string>

namespace bkl {

enum class errc {
  invalid_prime,
  table_cap_exceeded,
  degree_not_dividing,
  degree_mismatch,
  zero_argument,
  cost_exceeded,
  size_cap_exceeded,
  invalid_support_point,
  degenerate_leading,
  diagonalization_degenerate,
  ambiguous_match,
  invalid_argument,
  io_error,
};

/// All library failures surface as this exception; `code()` identifies the
/// contract that was violated.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace bkl
