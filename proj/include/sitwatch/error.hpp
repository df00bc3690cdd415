/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace sitwatch
{

enum class ErrorCode
{
  InvalidArgument = 1,
  DegenerateInput,
  InvalidRotation,
  Parse,
  Io,
  LayoutMismatch,
  DegenerateTraining,
  InvalidInput,
  Internal,
};

/// Name used in machine-readable error lines, e.g. "invalid_argument".
const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), m_code(code) {}

  ErrorCode code() const noexcept { return m_code; }

private:
  ErrorCode m_code;
};

} // namespace sitwatch
