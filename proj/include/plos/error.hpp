// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plos
{

enum class ErrorCode
{
    InvalidParams,
    InvalidAngle,
    OutOfExtent,
    DegenerateLink,
    EndpointInsideBuilding,
    DegenerateCircle,
    NoSuchCell,
    InvalidQuadrant,
    InvalidCounts,
    EmptyTable,
    ParseError,
    IllegalSpec,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string &what);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Structured-text parse failure. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error
{
  public:
    ParseError(std::size_t line, std::string field, const std::string &what);

    std::size_t line() const noexcept { return line_; }
    const std::string &field() const noexcept { return field_; }

  private:
    std::size_t line_;
    std::string field_;
};

} // namespace plos
