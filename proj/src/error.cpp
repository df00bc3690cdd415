/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/error.hpp"

namespace sitwatch
{

const char* error_code_name(ErrorCode code) noexcept
{
  switch (code)
  {
    case ErrorCode::InvalidArgument:
      return "invalid_argument";
    case ErrorCode::DegenerateInput:
      return "degenerate_input";
    case ErrorCode::InvalidRotation:
      return "invalid_rotation";
    case ErrorCode::Parse:
      return "parse_error";
    case ErrorCode::Io:
      return "io_error";
    case ErrorCode::LayoutMismatch:
      return "layout_mismatch";
    case ErrorCode::DegenerateTraining:
      return "degenerate_training";
    case ErrorCode::InvalidInput:
      return "invalid_input";
    case ErrorCode::Internal:
      return "internal_error";
  }
  return "unknown_error";
}

} // namespace sitwatch
