// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/error.hpp"

#include <array>
#include <utility>

namespace shoplist {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 39> kNames{{
    {ErrorCode::MalformedConnectionString, "MalformedConnectionString"},
    {ErrorCode::FileExists, "FileExists"},
    {ErrorCode::IoFailure, "IoFailure"},
    {ErrorCode::BadMagic, "BadMagic"},
    {ErrorCode::UnsupportedVersion, "UnsupportedVersion"},
    {ErrorCode::BadPassword, "BadPassword"},
    {ErrorCode::Locked, "Locked"},
    {ErrorCode::HandleClosed, "HandleClosed"},
    {ErrorCode::InvalidSchema, "InvalidSchema"},
    {ErrorCode::TableExists, "TableExists"},
    {ErrorCode::UnknownTable, "UnknownTable"},
    {ErrorCode::UnknownColumn, "UnknownColumn"},
    {ErrorCode::TypeMismatch, "TypeMismatch"},
    {ErrorCode::NullViolation, "NullViolation"},
    {ErrorCode::ForeignKeyViolation, "ForeignKeyViolation"},
    {ErrorCode::UniqueViolation, "UniqueViolation"},
    {ErrorCode::CheckViolation, "CheckViolation"},
    {ErrorCode::DuplicateKey, "DuplicateKey"},
    {ErrorCode::SyntaxError, "SyntaxError"},
    {ErrorCode::UnsupportedStatement, "UnsupportedStatement"},
    {ErrorCode::NotAQuery, "NotAQuery"},
    {ErrorCode::DuplicateCategory, "DuplicateCategory"},
    {ErrorCode::InvalidName, "InvalidName"},
    {ErrorCode::UnknownCategory, "UnknownCategory"},
    {ErrorCode::InvalidPrice, "InvalidPrice"},
    {ErrorCode::UnknownProduct, "UnknownProduct"},
    {ErrorCode::DuplicateListItem, "DuplicateListItem"},
    {ErrorCode::UnknownItem, "UnknownItem"},
    {ErrorCode::TrackingDisabled, "TrackingDisabled"},
    {ErrorCode::TrackingModeConflict, "TrackingModeConflict"},
    {ErrorCode::SchemaMismatch, "SchemaMismatch"},
    {ErrorCode::TransportFailure, "TransportFailure"},
    {ErrorCode::PendingChangesExist, "PendingChangesExist"},
    {ErrorCode::NotTracked, "NotTracked"},
    {ErrorCode::MissingPrimaryKey, "MissingPrimaryKey"},
    {ErrorCode::MalformedChangeSet, "MalformedChangeSet"},
    {ErrorCode::Unauthorized, "Unauthorized"},
    {ErrorCode::InvalidConfig, "InvalidConfig"},
    {ErrorCode::NotStarted, "NotStarted"},
}};

} // namespace

std::string_view to_string(ErrorCode code) {
    for (const auto& [c, name] : kNames) {
        if (c == code) return name;
    }
    return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) {
    for (const auto& [c, n] : kNames) {
        if (n == name) return c;
    }
    return std::nullopt;
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

} // namespace shoplist
