// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sync/rda.hpp"

#include "shoplist/sqlcmd/command.hpp"
#include "shoplist/sqlcmd/executor.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace shoplist::sync {
namespace {

using store::Null;
using store::Value;

std::string applied_key(const ReplicaId& client) { return "rda/applied/" + client.hex(); }

std::set<std::uint64_t> load_applied(const store::Store& store, const ReplicaId& client) {
    std::set<std::uint64_t> out;
    if (auto text = store.meta_get(applied_key(client))) {
        for (const auto& c : nlohmann::json::parse(*text)) out.insert(c.get<std::uint64_t>());
    }
    return out;
}

std::optional<PushErrorReason> push_reason(ErrorCode code) {
    switch (code) {
    case ErrorCode::ForeignKeyViolation:
    case ErrorCode::UniqueViolation:
    case ErrorCode::CheckViolation:
    case ErrorCode::NullViolation:
    case ErrorCode::DuplicateKey:
        return PushErrorReason::IntegrityViolation;
    case ErrorCode::TypeMismatch:
    case ErrorCode::UnknownColumn:
        return PushErrorReason::TypeMismatch;
    default:
        return std::nullopt;
    }
}

int op_rank(ChangeOp op) {
    switch (op) {
    case ChangeOp::Delete: return 0;
    case ChangeOp::Update: return 1;
    case ChangeOp::Insert: return 2;
    }
    return 3;
}

/// Applies one pushed record. Returns false when the target row is missing.
bool apply_pushed(store::Store& store, const store::TableDef& def, const PushRequest& req,
                  const ChangeRecord& r) {
    if (r.op == ChangeOp::Delete) return store.delete_row(def.name, r.pk);
    if (!r.payload) throw Error(ErrorCode::MalformedChangeSet, "record without payload");
    if (r.payload->values.size() != req.columns.size()) {
        throw Error(ErrorCode::MalformedChangeSet, "payload width differs from columns");
    }
    const auto& pk_name = def.pk_column().name;
    if (r.op == ChangeOp::Update) {
        std::vector<store::Assignment> sets;
        for (std::size_t i = 0; i < req.columns.size(); ++i) {
            if (store::iequals(req.columns[i], pk_name)) continue;
            sets.push_back({req.columns[i], r.payload->values[i]});
        }
        return store.update_row(def.name, r.pk, sets);
    }
    store::Row row{std::vector<Value>(def.columns.size(), Null{})};
    for (std::size_t i = 0; i < req.columns.size(); ++i) {
        auto idx = def.find_column(req.columns[i]);
        if (!idx) throw Error(ErrorCode::UnknownColumn, def.name + "." + req.columns[i]);
        row.values[*idx] = r.payload->values[i];
    }
    row.values[def.pk_index()] = r.pk;
    store.insert_row(def.name, std::move(row));
    return true;
}

} // namespace

PullResponse serve_pull(Replica& server, const PullRequest& request) {
    auto cmd = sqlcmd::parse(request.query);
    const auto* select = std::get_if<sqlcmd::SelectCommand>(&cmd);
    if (!select) throw Error(ErrorCode::NotAQuery, "pull needs a SELECT");
    if (!request.table.empty() && !store::iequals(request.table, select->table)) {
        throw Error(ErrorCode::UnknownTable, request.table + " is not the query's table");
    }
    const auto& store = server.store();
    auto rs = sqlcmd::fill(store, *select);
    const auto& def = store.table_def(rs.source_table);

    PullResponse resp;
    resp.source_table = rs.source_table;
    for (const auto& name : rs.columns) {
        const auto& src = def.columns[*def.find_column(name)];
        store::ColumnDef col;
        col.name = src.name;
        col.kind = src.kind;
        col.nullable = src.nullable;
        col.primary_key = src.primary_key;
        resp.columns.push_back(std::move(col));
    }
    resp.rows = std::move(rs.rows);
    return resp;
}

PushResponse serve_push(Replica& server, const PushRequest& request) {
    auto& store = server.store();
    const auto& def = store.table_def(request.table);
    auto applied = load_applied(store, request.replica_id);

    std::vector<const ChangeRecord*> ordered;
    for (const auto& r : request.records) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(), [](const ChangeRecord* a, const ChangeRecord* b) {
        return op_rank(a->op) < op_rank(b->op);
    });

    PushResponse resp;
    for (const auto* r : ordered) {
        if (applied.contains(r->version.counter)) {
            ++resp.skipped;
            continue;
        }
        try {
            store::Store::Transaction txn(store);
            if (!apply_pushed(store, def, request, *r)) {
                resp.errors.push_back({def.name, r->pk, PushErrorReason::RowMissingOnServer,
                                       "no row with key " + std::to_string(r->pk)});
                continue;
            }
            applied.insert(r->version.counter);
            store.meta_put(applied_key(request.replica_id), nlohmann::json(applied).dump());
            txn.commit();
            ++resp.applied;
        } catch (const Error& e) {
            auto reason = push_reason(e.code());
            if (!reason) throw;
            resp.errors.push_back({def.name, r->pk, *reason, e.detail()});
        }
    }
    return resp;
}

std::size_t serve_submit(Replica& server, std::string_view sql) {
    auto cmd = sqlcmd::parse(sql);
    store::Store::Transaction txn(server.store());
    auto count = sqlcmd::execute_non_query(server.store(), cmd);
    txn.commit();
    return count;
}

std::size_t rda_pull(Replica& local, Endpoint& remote, std::string_view local_table,
                     std::string_view query, bool track) {
    auto& store = local.store();
    auto& tracker = local.tracker();
    if (store.has_table(local_table)) {
        if (tracker.mode(local_table) == TrackingMode::Merge) {
            throw Error(ErrorCode::TrackingModeConflict, std::string(local_table) + " is merge-tracked");
        }
        if (!tracker.records(local_table).empty()) {
            throw Error(ErrorCode::PendingChangesExist, std::string(local_table) + " has unpushed edits");
        }
    }

    auto resp = remote.pull({"", std::string(query)});
    if (std::none_of(resp.columns.begin(), resp.columns.end(),
                     [](const store::ColumnDef& c) { return c.primary_key; })) {
        throw Error(ErrorCode::MissingPrimaryKey, "the query must select the primary key of " + resp.source_table);
    }

    store::TableDef def{std::string(local_table), resp.columns};
    store::Store::Transaction txn(store);
    if (store.has_table(local_table)) {
        tracker.forget_table(local_table);
        store.drop_table(local_table);
    }
    store.create_table(def);
    for (auto& row : resp.rows) store.put_row(local_table, std::move(row));
    if (track) tracker.set_mode(local_table, TrackingMode::Rda, resp.source_table);
    txn.commit();
    return resp.rows.size();
}

PushResult rda_push(Replica& local, Endpoint& remote, std::string_view local_table) {
    auto& tracker = local.tracker();
    if (!local.store().has_table(local_table) || tracker.mode(local_table) != TrackingMode::Rda) {
        throw Error(ErrorCode::NotTracked, std::string(local_table));
    }
    auto records = tracker.records(local_table);
    if (records.empty()) return {};

    PushRequest req;
    req.table = tracker.remote_table(local_table).value_or(std::string(local_table));
    req.replica_id = tracker.replica_id();
    for (const auto& col : local.store().table_def(local_table).columns) req.columns.push_back(col.name);
    req.records = records;

    auto resp = remote.push(req);

    std::set<std::int64_t> failed;
    for (const auto& e : resp.errors) failed.insert(e.pk);
    store::Store::Transaction txn(local.store());
    for (const auto& r : records) {
        if (!failed.contains(r.pk)) tracker.forget(r.table, r.pk);
    }
    txn.commit();
    return {resp.applied, std::move(resp.errors)};
}

std::size_t rda_submit_sql(Endpoint& remote, std::string_view sql) {
    auto cmd = sqlcmd::parse(sql);
    if (std::holds_alternative<sqlcmd::SelectCommand>(cmd)) {
        throw Error(ErrorCode::NotAQuery, "submit takes INSERT, UPDATE or DELETE");
    }
    return remote.submit(sql);
}

} // namespace shoplist::sync
