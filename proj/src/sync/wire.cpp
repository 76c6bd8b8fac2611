// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sync/wire.hpp"

#include "shoplist/store/store.hpp"

#include <stdexcept>
#include <utility>

namespace shoplist::sync::wire {
namespace {

using store::ColumnKind;
using store::Decimal;
using store::Null;
using store::Timestamp;
using store::Value;

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorCode::MalformedChangeSet, what);
}

/// Runs a decoder, turning JSON access errors into MalformedChangeSet.
template <class F>
auto decoding(F&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        malformed(e.what());
    } catch (const std::invalid_argument& e) {
        malformed(e.what());
    } catch (const std::out_of_range& e) {
        malformed(e.what());
    }
}

ReplicaId replica_from_json(const json& j) {
    auto id = ReplicaId::from_hex(j.get<std::string>());
    if (!id) malformed("bad replica id");
    return *id;
}

ChangeOp op_from_json(const json& j) {
    auto op = store::change_op_from_string(j.get<std::string>());
    if (!op) malformed("bad op");
    return *op;
}

const store::TableDef& require_table(const TableLookup& lookup, const std::string& table) {
    const auto* def = lookup(table);
    if (!def) malformed("unknown table " + table);
    return *def;
}

json conflict_to_json(const Conflict& c) {
    return {{"table", c.table}, {"pk", c.pk}, {"winner", c.winner.hex()},
            {"policy", to_string(c.policy)}};
}

Conflict conflict_from_json(const json& j) {
    Conflict c;
    c.table = j.at("table").get<std::string>();
    c.pk = j.at("pk").get<std::int64_t>();
    c.winner = replica_from_json(j.at("winner"));
    auto policy = conflict_policy_from_string(j.at("policy").get<std::string>());
    if (!policy) malformed("bad policy");
    c.policy = *policy;
    return c;
}

json rejection_to_json(const Rejection& r) {
    return {{"table", r.table}, {"pk", r.pk}, {"reason", to_string(r.reason)}, {"detail", r.detail}};
}

Rejection rejection_from_json(const json& j) {
    Rejection r;
    r.table = j.at("table").get<std::string>();
    r.pk = j.at("pk").get<std::int64_t>();
    auto code = error_code_from_string(j.at("reason").get<std::string>());
    if (!code) malformed("bad rejection reason");
    r.reason = *code;
    r.detail = j.value("detail", "");
    return r;
}

} // namespace

TableLookup lookup_in(const store::Store& store) {
    return [&store](std::string_view table) -> const store::TableDef* {
        return store.has_table(table) ? &store.table_def(table) : nullptr;
    };
}

json value_to_json(const Value& value) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Null>) return nullptr;
            else if constexpr (std::is_same_v<T, Decimal>) return v.to_string();
            else if constexpr (std::is_same_v<T, Timestamp>) return v.ms;
            else return v;
        },
        value);
}

Value value_from_json(const json& j, ColumnKind kind) {
    if (j.is_null()) return Null{};
    switch (kind) {
    case ColumnKind::Integer:
        if (j.is_number_integer()) return j.get<std::int64_t>();
        break;
    case ColumnKind::Decimal:
        if (j.is_string()) {
            if (auto d = Decimal::parse(j.get<std::string>())) return *d;
        } else if (j.is_number_integer()) {
            return Decimal::from_units(j.get<std::int64_t>());
        }
        break;
    case ColumnKind::Text:
        if (j.is_string()) return j.get<std::string>();
        break;
    case ColumnKind::Boolean:
        if (j.is_boolean()) return j.get<bool>();
        break;
    case ColumnKind::Timestamp:
        if (j.is_number_integer()) return Timestamp{j.get<std::int64_t>()};
        break;
    }
    malformed("value " + j.dump() + " is not " + std::string(store::to_string(kind)));
}

Value loose_value(const json& j) {
    if (j.is_null()) return Null{};
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

json tagged_value(const Value& value) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Null>) return json::array({"n"});
            else if constexpr (std::is_same_v<T, std::int64_t>) return json::array({"i", v});
            else if constexpr (std::is_same_v<T, Decimal>) return json::array({"d", v.scaled()});
            else if constexpr (std::is_same_v<T, std::string>) return json::array({"s", v});
            else if constexpr (std::is_same_v<T, bool>) return json::array({"b", v});
            else return json::array({"t", v.ms});
        },
        value);
}

Value untag_value(const json& j) {
    return decoding([&]() -> Value {
        auto tag = j.at(0).get<std::string>();
        if (tag == "n") return Null{};
        if (tag == "i") return j.at(1).get<std::int64_t>();
        if (tag == "d") return Decimal::from_scaled(j.at(1).get<std::int64_t>());
        if (tag == "s") return j.at(1).get<std::string>();
        if (tag == "b") return j.at(1).get<bool>();
        if (tag == "t") return Timestamp{j.at(1).get<std::int64_t>()};
        malformed("bad value tag " + tag);
    });
}

json to_json(const SyncAnchor& anchor) {
    json j = json::object();
    for (const auto& [replica, counter] : anchor.entries()) j[replica.hex()] = counter;
    return j;
}

SyncAnchor anchor_from_json(const json& j) {
    return decoding([&] {
        if (!j.is_object()) malformed("anchor must be an object");
        SyncAnchor anchor;
        for (const auto& [hex, counter] : j.items()) {
            auto id = ReplicaId::from_hex(hex);
            if (!id) malformed("bad replica id in anchor");
            anchor.advance(*id, counter.get<std::uint64_t>());
        }
        return anchor;
    });
}

json to_json(const ChangeRecord& record, const store::TableDef& def) {
    json j{{"table", record.table},
           {"pk", record.pk},
           {"op", store::to_string(record.op)},
           {"origin", record.version.origin.hex()},
           {"counter", record.version.counter},
           {"wall_time_ms", record.wall_time}};
    if (record.payload) {
        json payload = json::object();
        for (std::size_t i = 0; i < def.columns.size() && i < record.payload->values.size(); ++i) {
            payload[def.columns[i].name] = value_to_json(record.payload->values[i]);
        }
        j["payload"] = std::move(payload);
    }
    return j;
}

ChangeRecord record_from_json(const json& j, const TableLookup& lookup) {
    return decoding([&] {
        ChangeRecord r;
        const auto& def = require_table(lookup, j.at("table").get<std::string>());
        r.table = def.name;
        r.pk = j.at("pk").get<std::int64_t>();
        r.op = op_from_json(j.at("op"));
        r.version.origin = replica_from_json(j.at("origin"));
        r.version.counter = j.at("counter").get<std::uint64_t>();
        r.wall_time = j.at("wall_time_ms").get<std::int64_t>();
        if (r.op != ChangeOp::Delete) {
            const auto& payload = j.at("payload");
            if (!payload.is_object()) malformed("payload must be an object");
            Row row;
            for (const auto& col : def.columns) {
                auto it = payload.find(col.name);
                if (it == payload.end()) malformed("payload misses column " + col.name);
                row.values.push_back(value_from_json(*it, col.kind));
            }
            if (payload.size() != def.columns.size()) malformed("payload has unknown columns");
            if (row.values[def.pk_index()] != Value{r.pk}) malformed("payload key differs from pk");
            r.payload = std::move(row);
        }
        return r;
    });
}

json to_json(const ChangeSet& changes, const TableLookup& lookup) {
    json records = json::array();
    for (const auto& r : changes.records) {
        records.push_back(to_json(r, require_table(lookup, r.table)));
    }
    return {{"replica_id", changes.replica_id.hex()},
            {"basis_anchor", to_json(changes.basis_anchor)},
            {"records", std::move(records)}};
}

ChangeSet changeset_from_json(const json& j, const TableLookup& lookup) {
    return decoding([&] {
        ChangeSet cs;
        cs.replica_id = replica_from_json(j.at("replica_id"));
        cs.basis_anchor = anchor_from_json(j.at("basis_anchor"));
        for (const auto& r : j.at("records")) cs.records.push_back(record_from_json(r, lookup));
        return cs;
    });
}

json to_json(const PeerInfo& info) {
    return {{"replica_id", info.replica_id.hex()},
            {"format_version", info.format_version},
            {"schema_fingerprint", std::to_string(info.schema_fingerprint)}};
}

PeerInfo peer_info_from_json(const json& j) {
    return decoding([&] {
        PeerInfo info;
        info.replica_id = replica_from_json(j.at("replica_id"));
        info.format_version = j.at("format_version").get<std::uint16_t>();
        info.schema_fingerprint = std::stoull(j.at("schema_fingerprint").get<std::string>());
        return info;
    });
}

json to_json(const MergeRequest& request, const TableLookup& lookup) {
    return {{"changes", to_json(request.changes, lookup)},
            {"policy", to_string(request.policy)},
            {"schema_fingerprint", std::to_string(request.schema_fingerprint)}};
}

MergeRequest merge_request_from_json(const json& j, const TableLookup& lookup) {
    return decoding([&] {
        MergeRequest req;
        req.changes = changeset_from_json(j.at("changes"), lookup);
        auto policy = conflict_policy_from_string(j.at("policy").get<std::string>());
        if (!policy) malformed("bad policy");
        req.policy = *policy;
        req.schema_fingerprint = std::stoull(j.at("schema_fingerprint").get<std::string>());
        return req;
    });
}

json to_json(const MergeResponse& response, const TableLookup& lookup) {
    json conflicts = json::array();
    for (const auto& c : response.conflicts) conflicts.push_back(conflict_to_json(c));
    json rejected = json::array();
    for (const auto& r : response.rejected) rejected.push_back(rejection_to_json(r));
    return {{"changes", to_json(response.changes, lookup)},
            {"conflicts", std::move(conflicts)},
            {"applied", response.applied},
            {"rejected", std::move(rejected)}};
}

MergeResponse merge_response_from_json(const json& j, const TableLookup& lookup) {
    return decoding([&] {
        MergeResponse resp;
        resp.changes = changeset_from_json(j.at("changes"), lookup);
        for (const auto& c : j.at("conflicts")) resp.conflicts.push_back(conflict_from_json(c));
        resp.applied = j.at("applied").get<std::size_t>();
        for (const auto& r : j.at("rejected")) resp.rejected.push_back(rejection_from_json(r));
        return resp;
    });
}

json to_json(const PullRequest& request) {
    return {{"table", request.table}, {"query", request.query}};
}

PullRequest pull_request_from_json(const json& j) {
    return decoding([&] {
        PullRequest req;
        req.table = j.value("table", "");
        req.query = j.at("query").get<std::string>();
        return req;
    });
}

json to_json(const PullResponse& response) {
    json columns = json::array();
    for (const auto& c : response.columns) {
        columns.push_back({{"name", c.name},
                           {"kind", store::to_string(c.kind)},
                           {"nullable", c.nullable},
                           {"primary_key", c.primary_key}});
    }
    json rows = json::array();
    for (const auto& row : response.rows) {
        json cells = json::array();
        for (const auto& v : row.values) cells.push_back(value_to_json(v));
        rows.push_back(std::move(cells));
    }
    return {{"source_table", response.source_table}, {"columns", std::move(columns)},
            {"rows", std::move(rows)}};
}

PullResponse pull_response_from_json(const json& j) {
    return decoding([&] {
        PullResponse resp;
        resp.source_table = j.at("source_table").get<std::string>();
        for (const auto& c : j.at("columns")) {
            store::ColumnDef col;
            col.name = c.at("name").get<std::string>();
            auto kind = store::column_kind_from_string(c.at("kind").get<std::string>());
            if (!kind) malformed("bad column kind");
            col.kind = *kind;
            col.nullable = c.at("nullable").get<bool>();
            col.primary_key = c.at("primary_key").get<bool>();
            resp.columns.push_back(std::move(col));
        }
        for (const auto& cells : j.at("rows")) {
            if (cells.size() != resp.columns.size()) malformed("row width differs from columns");
            Row row;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                row.values.push_back(value_from_json(cells[i], resp.columns[i].kind));
            }
            resp.rows.push_back(std::move(row));
        }
        return resp;
    });
}

json to_json(const PushRequest& request) {
    json records = json::array();
    for (const auto& r : request.records) {
        json rec{{"pk", r.pk},
                 {"op", store::to_string(r.op)},
                 {"counter", r.version.counter},
                 {"wall_time_ms", r.wall_time}};
        if (r.payload) {
            json payload = json::object();
            for (std::size_t i = 0; i < request.columns.size() && i < r.payload->values.size(); ++i) {
                payload[request.columns[i]] = value_to_json(r.payload->values[i]);
            }
            rec["payload"] = std::move(payload);
        }
        records.push_back(std::move(rec));
    }
    return {{"table", request.table},
            {"replica_id", request.replica_id.hex()},
            {"columns", request.columns},
            {"records", std::move(records)}};
}

PushRequest push_request_from_json(const json& j, const TableLookup& lookup) {
    return decoding([&] {
        PushRequest req;
        req.table = j.at("table").get<std::string>();
        req.replica_id = replica_from_json(j.at("replica_id"));
        req.columns = j.at("columns").get<std::vector<std::string>>();
        const auto* def = lookup(req.table);
        for (const auto& rec : j.at("records")) {
            ChangeRecord r;
            r.table = req.table;
            r.pk = rec.at("pk").get<std::int64_t>();
            r.op = op_from_json(rec.at("op"));
            r.version = {req.replica_id, rec.at("counter").get<std::uint64_t>()};
            r.wall_time = rec.value("wall_time_ms", std::int64_t{0});
            if (auto it = rec.find("payload"); it != rec.end()) {
                Row row;
                for (const auto& name : req.columns) {
                    auto cell = it->find(name);
                    if (cell == it->end()) malformed("payload misses column " + name);
                    auto col = def ? def->find_column(name) : std::nullopt;
                    if (!col) {
                        row.values.push_back(loose_value(*cell));
                        continue;
                    }
                    try {
                        row.values.push_back(value_from_json(*cell, def->columns[*col].kind));
                    } catch (const Error&) {
                        row.values.push_back(loose_value(*cell));
                    }
                }
                r.payload = std::move(row);
            }
            req.records.push_back(std::move(r));
        }
        return req;
    });
}

json to_json(const PushResponse& response) {
    json errors = json::array();
    for (const auto& e : response.errors) {
        errors.push_back({{"table", e.table}, {"pk", e.pk}, {"reason", to_string(e.reason)},
                          {"detail", e.detail}});
    }
    return {{"applied", response.applied}, {"skipped", response.skipped}, {"errors", std::move(errors)}};
}

PushResponse push_response_from_json(const json& j) {
    return decoding([&] {
        PushResponse resp;
        resp.applied = j.at("applied").get<std::size_t>();
        resp.skipped = j.value("skipped", std::size_t{0});
        for (const auto& e : j.at("errors")) {
            PushError err;
            err.table = e.at("table").get<std::string>();
            err.pk = e.at("pk").get<std::int64_t>();
            auto reason = push_error_reason_from_string(e.at("reason").get<std::string>());
            if (!reason) malformed("bad push error reason");
            err.reason = *reason;
            err.detail = e.value("detail", "");
            resp.errors.push_back(std::move(err));
        }
        return resp;
    });
}

json error_to_json(const Error& error) {
    json j{{"error", to_string(error.code())}, {"detail", error.detail()}};
    if (error.position) j["position"] = *error.position;
    return j;
}

Error error_from_json(const json& j) {
    if (j.is_object() && j.contains("error") && j["error"].is_string()) {
        if (auto code = error_code_from_string(j["error"].get<std::string>())) {
            Error e(*code, j.value("detail", ""));
            if (j.contains("position") && j["position"].is_number_unsigned()) {
                e.position = j["position"].get<std::size_t>();
            }
            return e;
        }
    }
    return Error(ErrorCode::TransportFailure, "unexpected response: " + j.dump());
}

} // namespace shoplist::sync::wire
