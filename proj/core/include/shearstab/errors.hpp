#pragma once

#include <stdexcept>
#include <string>

namespace shearstab {

/// Failure categories. `validation` and `domain` indicate a bad request
/// (CLI exit code 2); the rest indicate a numerical failure (exit code 3).
enum class errc {
  validation,
  domain,
  range,
  resolution,
  truncation,
  root_not_found,
  not_converged,
  near_eigenvalue,
  ill_conditioned,
  contour_resolution,
  breakdown,
  branch,
  path,
  stencil,
  insufficient_data,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }
  bool is_usage_error() const { return code_ == errc::validation || code_ == errc::domain; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace shearstab
