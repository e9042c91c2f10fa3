// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/error.hpp"

namespace plos
{

std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidAngle: return "InvalidAngle";
    case ErrorCode::OutOfExtent: return "OutOfExtent";
    case ErrorCode::DegenerateLink: return "DegenerateLink";
    case ErrorCode::EndpointInsideBuilding: return "EndpointInsideBuilding";
    case ErrorCode::DegenerateCircle: return "DegenerateCircle";
    case ErrorCode::NoSuchCell: return "NoSuchCell";
    case ErrorCode::InvalidQuadrant: return "InvalidQuadrant";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IllegalSpec: return "IllegalSpec";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

namespace
{
std::string parse_message(std::size_t line, const std::string &field, const std::string &what)
{
    std::string msg;
    if (line > 0)
        msg += "line " + std::to_string(line) + ": ";
    if (!field.empty())
        msg += "field '" + field + "': ";
    return msg + what;
}
} // namespace

ParseError::ParseError(std::size_t line, std::string field, const std::string &what)
    : Error(ErrorCode::ParseError, parse_message(line, field, what)), line_(line), field_(std::move(field))
{
}

} // namespace plos
