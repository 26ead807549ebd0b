// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_ERROR_HPP
#define VTALIGN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vtalign {

// Error classes map one-to-one onto the C API status codes.
enum class ErrorKind {
  InvalidArgument,
  ShapeMismatch,
  NonFinite,
  Infeasible,
  Parse,
  Io,
  SizeGuard,
};

const char* error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace vtalign

#endif  // VTALIGN_ERROR_HPP
