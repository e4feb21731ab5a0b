#ifndef HETREG_ERRORS_HPP
#define HETREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hetreg {

// Error category, used by the CLI to pick exit codes (2 argument, 3 data, 4 numerical).
enum class errc {
  invalid_argument,
  singular_design,
  convergence,
  insufficient_samples,
  parse,
  io,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

class invalid_argument_error : public error {
 public:
  explicit invalid_argument_error(const std::string& msg)
      : error(errc::invalid_argument, msg) {}
};

// Raised when a pivot of the normal-equation (or weighted) design matrix falls
// below the configured floor. Carries the offending pivot.
class singular_design_error : public error {
 public:
  singular_design_error(const std::string& msg, double pivot)
      : error(errc::singular_design, msg), pivot_(pivot) {}
  double pivot() const noexcept { return pivot_; }

 private:
  double pivot_;
};

// Iterative solver ran out of iterations. Carries the last residual seen.
class convergence_error : public error {
 public:
  convergence_error(const std::string& msg, double residual)
      : error(errc::convergence, msg), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class insufficient_samples_error : public error {
 public:
  explicit insufficient_samples_error(const std::string& msg)
      : error(errc::insufficient_samples, msg) {}
};

class parse_error : public error {
 public:
  parse_error(const std::string& msg, long line)
      : error(errc::parse, msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class io_error : public error {
 public:
  explicit io_error(const std::string& msg) : error(errc::io, msg) {}
};

}  // namespace hetreg

#endif  // HETREG_ERRORS_HPP
