// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/connection.hpp"
#include "shoplist/store/schema.hpp"
#include "shoplist/store/value.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shoplist::store {

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderSize = 72;

/// 16 random bytes identifying one store file for replication.
struct ReplicaId {
    std::array<std::uint8_t, 16> bytes{};

    static ReplicaId random();
    /// Nullopt unless `hex` is exactly 32 hex digits.
    static std::optional<ReplicaId> from_hex(std::string_view hex);
    std::string hex() const;

    friend auto operator<=>(const ReplicaId&, const ReplicaId&) = default;
};

/// Milliseconds since the Unix epoch.
using WallClock = std::function<std::int64_t()>;

WallClock system_wall_clock();

struct StoreOptions {
    /// Source for timestamp defaults and change-record wall times.
    WallClock clock;
    /// fsync after every commit instead of only on close.
    bool sync_each_commit = false;
};

enum class ChangeOp : std::uint8_t { Insert = 1, Update = 2, Delete = 3 };

std::string_view to_string(ChangeOp op);
std::optional<ChangeOp> change_op_from_string(std::string_view name);

/// Fired after each hooked mutation is applied in memory and before it is
/// committed. `row` is the new row for insert/update and null for delete.
struct ChangeEvent {
    std::string_view table;
    std::int64_t pk = 0;
    ChangeOp op = ChangeOp::Insert;
    const Row* row = nullptr;
};

using ChangeHook = std::function<void(const ChangeEvent&)>;

/// Single-column filter `column op literal`.
struct Predicate {
    std::string column;
    CompareOp op = CompareOp::Eq;
    Value literal;

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct Assignment {
    std::string column;
    Value value;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// An open store file.
///
/// The file holds a 72-byte header, one section per table, a meta section
/// and an append-only record log closed by a committed-length trailer. Every
/// mutation appends log frames; close() compacts the log back into sections.
/// The handle holds an exclusive lock on the file for as long as it is open
/// and must be used by one thread at a time.
class Store {
public:
    /// Throws FileExists, InvalidSchema or IoFailure.
    static Store create(const ConnectionSpec& spec, const std::vector<TableDef>& schema,
                        StoreOptions options = {});
    /// Throws BadMagic, UnsupportedVersion, BadPassword, Locked or IoFailure.
    static Store open(const ConnectionSpec& spec, StoreOptions options = {});

    Store(Store&&) noexcept;
    Store& operator=(Store&&) noexcept;
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;
    /// Closes without reporting errors; call close() to observe them.
    ~Store();

    bool is_open() const;
    const std::filesystem::path& path() const;
    const ReplicaId& replica_id() const;
    std::int64_t now() const;

    std::vector<std::string> table_names() const;
    bool has_table(std::string_view table) const;
    const TableDef& table_def(std::string_view table) const;
    std::vector<TableDef> schema() const;

    void create_table(const TableDef& def);
    /// Throws ForeignKeyViolation when another table holds references into it.
    void drop_table(std::string_view table);

    /// A null primary-key cell gets the next key; an explicit key must be free.
    /// Null cells of columns with defaults take the default. Returns the key.
    std::int64_t insert_row(std::string_view table, Row row);
    bool update_row(std::string_view table, std::int64_t pk, std::span<const Assignment> assignments);
    bool delete_row(std::string_view table, std::int64_t pk);

    /// Rows in primary-key order.
    std::vector<Row> scan(std::string_view table,
                          const std::optional<Predicate>& predicate = std::nullopt) const;
    std::optional<Row> find(std::string_view table, std::int64_t pk) const;
    std::size_t row_count(std::string_view table) const;
    std::int64_t next_id(std::string_view table) const;

    /// Upsert a complete row with an explicit key. No change hook fires.
    void put_row(std::string_view table, Row row);
    /// Remove a row by key. No change hook fires.
    bool erase_row(std::string_view table, std::int64_t pk);

    std::optional<std::string> meta_get(std::string_view key) const;
    void meta_put(std::string_view key, std::string_view value);
    void meta_erase(std::string_view key);
    std::vector<std::pair<std::string, std::string>> meta_scan(std::string_view prefix) const;

    void set_change_hook(ChangeHook hook);
    /// Called after in-memory effects of a failed or abandoned mutation are undone.
    void set_rollback_hook(std::function<void()> hook);

    /// Groups mutations into one commit. Without commit(), destruction rolls
    /// every grouped mutation back in memory and nothing reaches the file.
    class Transaction {
    public:
        explicit Transaction(Store& store);
        ~Transaction();
        Transaction(const Transaction&) = delete;
        Transaction& operator=(const Transaction&) = delete;
        void commit();

    private:
        Store* store_;
        std::size_t pending_mark_ = 0;
        std::size_t undo_mark_ = 0;
        bool done_ = false;
    };

    /// Compacts, syncs and unlocks. Throws HandleClosed when already closed.
    void close();

    struct Impl;

private:
    explicit Store(std::unique_ptr<Impl> impl);
    Impl& impl() const;
    std::unique_ptr<Impl> impl_;
};

} // namespace shoplist::store
