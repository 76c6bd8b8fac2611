// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shoplist {

enum class ErrorCode {
    // store
    MalformedConnectionString,
    FileExists,
    IoFailure,
    BadMagic,
    UnsupportedVersion,
    BadPassword,
    Locked,
    HandleClosed,
    InvalidSchema,
    TableExists,
    UnknownTable,
    UnknownColumn,
    TypeMismatch,
    NullViolation,
    ForeignKeyViolation,
    UniqueViolation,
    CheckViolation,
    DuplicateKey,
    // sqlcmd
    SyntaxError,
    UnsupportedStatement,
    NotAQuery,
    // appcore
    DuplicateCategory,
    InvalidName,
    UnknownCategory,
    InvalidPrice,
    UnknownProduct,
    DuplicateListItem,
    UnknownItem,
    // sync
    TrackingDisabled,
    TrackingModeConflict,
    SchemaMismatch,
    TransportFailure,
    PendingChangesExist,
    NotTracked,
    MissingPrimaryKey,
    MalformedChangeSet,
    // server
    Unauthorized,
    InvalidConfig,
    // diag
    NotStarted,
};

/// Stable name used on the wire and in CLI messages ("ForeignKeyViolation").
std::string_view to_string(ErrorCode code);

/// Inverse of to_string; nullopt for unknown names.
std::optional<ErrorCode> error_code_from_string(std::string_view name);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Character offset into SQL text, set for SyntaxError.
    std::optional<std::size_t> position;
    /// Index of the failing row, set by batch operations.
    std::optional<std::size_t> row_index;

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace shoplist
