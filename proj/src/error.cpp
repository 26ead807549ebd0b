// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/error.hpp"

namespace vtalign {

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::ShapeMismatch: return "shape_mismatch";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::Io: return "io_error";
    case ErrorKind::SizeGuard: return "size_guard";
  }
  return "unknown";
}

}  // namespace vtalign
