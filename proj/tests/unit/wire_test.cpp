// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "generators.hpp"
#include "shoplist/error.hpp"
#include "shoplist/store/schema.hpp"
#include "shoplist/sync/endpoint.hpp"
#include "shoplist/sync/wire.hpp"

#include <gtest/gtest.h>

namespace shoplist::sync::wire {
namespace {

using store::ColumnKind;
using store::Decimal;
using store::Null;
using store::Timestamp;
using store::Value;
using testing::Rng;

TableLookup default_lookup() {
    auto schema = std::make_shared<std::vector<store::TableDef>>(store::default_schema());
    return [schema](std::string_view name) -> const store::TableDef* {
        for (const auto& def : *schema) {
            if (store::iequals(def.name, name)) return &def;
        }
        return nullptr;
    };
}

ErrorCode error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::IoFailure;
}

Value random_value(Rng& rng, ColumnKind kind, bool nullable) {
    if (nullable && testing::coin(rng, 0.2)) return Null{};
    switch (kind) {
    case ColumnKind::Integer: return testing::between(rng, -1'000'000, 1'000'000);
    case ColumnKind::Decimal: return Decimal::from_scaled(testing::between(rng, 0, 1'000'000'000));
    case ColumnKind::Text: return testing::random_text(rng);
    case ColumnKind::Boolean: return testing::coin(rng);
    case ColumnKind::Timestamp: return Timestamp{testing::between(rng, 0, 4'000'000'000'000)};
    }
    return Null{};
}

ChangeRecord random_record(Rng& rng, const TableLookup& lookup) {
    static const char* kTables[] = {"Categories", "Products", "List"};
    const auto& def = *lookup(kTables[testing::pick(rng, 3)]);
    ChangeRecord r;
    r.table = def.name;
    r.pk = testing::between(rng, 1, 100000);
    r.op = static_cast<ChangeOp>(1 + testing::pick(rng, 3));
    r.version = {store::ReplicaId::random(), static_cast<std::uint64_t>(testing::between(rng, 1, 1'000'000))};
    r.wall_time = testing::between(rng, 0, 4'000'000'000'000);
    if (r.op != ChangeOp::Delete) {
        store::Row row;
        for (const auto& col : def.columns) row.values.push_back(random_value(rng, col.kind, col.nullable));
        row.values[def.pk_index()] = r.pk;
        r.payload = row;
    }
    return r;
}

TEST(WireValueTest, EncodingsByKind) {
    EXPECT_EQ(value_to_json(Null{}), json(nullptr));
    EXPECT_EQ(value_to_json(*Decimal::parse("2.5")), json("2.5"));
    EXPECT_EQ(value_to_json(Timestamp{123}), json(123));
    EXPECT_EQ(value_to_json(true), json(true));
    EXPECT_EQ(value_from_json(json("2.5"), ColumnKind::Decimal), Value{*Decimal::parse("2.5")});
    EXPECT_EQ(value_from_json(json(3), ColumnKind::Decimal), Value{Decimal::from_units(3)});
    EXPECT_EQ(value_from_json(json(9), ColumnKind::Timestamp), Value{Timestamp{9}});
    EXPECT_EQ(error_of([] { value_from_json(json("x"), ColumnKind::Integer); }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(error_of([] { value_from_json(json("1.23456"), ColumnKind::Decimal); }), ErrorCode::MalformedChangeSet);
}

TEST(WireValueTest, TaggedValuesRoundTrip) {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        auto kind = static_cast<ColumnKind>(1 + testing::pick(rng, 5));
        auto v = random_value(rng, kind, true);
        EXPECT_EQ(untag_value(tagged_value(v)), v);
    }
}

TEST(WireMessageTest, ChangeSetRoundTrip) {
    Rng rng(17);
    auto lookup = default_lookup();
    for (int i = 0; i < 200; ++i) {
        ChangeSet cs;
        cs.replica_id = store::ReplicaId::random();
        cs.basis_anchor.advance(cs.replica_id, testing::pick(rng, 100));
        cs.basis_anchor.advance(store::ReplicaId::random(), testing::pick(rng, 100));
        auto n = testing::pick(rng, 8);
        for (std::size_t k = 0; k < n; ++k) cs.records.push_back(random_record(rng, lookup));
        auto text = to_json(cs, lookup).dump();
        EXPECT_EQ(changeset_from_json(json::parse(text), lookup), cs);
    }
}

TEST(WireMessageTest, RecordShape) {
    auto lookup = default_lookup();
    ChangeRecord r{"Products", 4, ChangeOp::Update, {store::ReplicaId{}, 9}, 1234,
                   store::Row{{std::int64_t{4}, Null{}, std::string("milk"), *Decimal::parse("2.5"), true}}};
    auto j = to_json(r, *lookup("Products"));
    EXPECT_EQ(j["table"], "Products");
    EXPECT_EQ(j["op"], "update");
    EXPECT_EQ(j["counter"], 9);
    EXPECT_EQ(j["wall_time_ms"], 1234);
    EXPECT_EQ(j["origin"], std::string(32, '0'));
    EXPECT_EQ(j["payload"]["Price"], "2.5");
    EXPECT_EQ(j["payload"]["Category_Id"], nullptr);

    auto tomb = r;
    tomb.op = ChangeOp::Delete;
    tomb.payload.reset();
    EXPECT_FALSE(to_json(tomb, *lookup("Products")).contains("payload"));
}

TEST(WireMessageTest, MalformedRecords) {
    auto lookup = default_lookup();
    ChangeRecord r{"Categories", 1, ChangeOp::Insert, {store::ReplicaId::random(), 1}, 5,
                   store::Row{{std::int64_t{1}, std::string("food")}}};
    auto good = to_json(r, *lookup("Categories"));
    auto broken = [&](auto mutate) {
        auto j = good;
        mutate(j);
        return error_of([&] { record_from_json(j, lookup); });
    };
    EXPECT_EQ(broken([](json& j) { j["table"] = "Nope"; }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(broken([](json& j) { j.erase("counter"); }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(broken([](json& j) { j["op"] = "merge"; }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(broken([](json& j) { j["origin"] = "xyz"; }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(broken([](json& j) { j["payload"].erase("Category_Name"); }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(broken([](json& j) { j["payload"]["Extra"] = 1; }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(broken([](json& j) { j["payload"]["Category_Id"] = 2; }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(broken([](json& j) { j["payload"]["Category_Name"] = 7; }), ErrorCode::MalformedChangeSet);
    EXPECT_EQ(error_of([&] { changeset_from_json(json::array(), lookup); }), ErrorCode::MalformedChangeSet);
}

TEST(WireMessageTest, PeerInfoAndMergeMessages) {
    PeerInfo info{store::ReplicaId::random(), 1, 0xfedcba9876543210ULL};
    auto j = to_json(info);
    EXPECT_EQ(j["schema_fingerprint"], "18364758544493064720");
    auto back = peer_info_from_json(j);
    EXPECT_EQ(back.replica_id, info.replica_id);
    EXPECT_EQ(back.format_version, 1);
    EXPECT_EQ(back.schema_fingerprint, info.schema_fingerprint);
    j["schema_fingerprint"] = "abc";
    EXPECT_EQ(error_of([&] { peer_info_from_json(j); }), ErrorCode::MalformedChangeSet);

    Rng rng(4);
    auto lookup = default_lookup();
    MergeRequest req;
    req.changes.replica_id = store::ReplicaId::random();
    req.changes.records.push_back(random_record(rng, lookup));
    req.policy = ConflictPolicy::ClientWins;
    req.schema_fingerprint = 77;
    auto req_back = merge_request_from_json(json::parse(to_json(req, lookup).dump()), lookup);
    EXPECT_EQ(req_back.changes, req.changes);
    EXPECT_EQ(req_back.policy, req.policy);
    EXPECT_EQ(req_back.schema_fingerprint, 77u);

    MergeResponse resp;
    resp.changes.replica_id = store::ReplicaId::random();
    resp.changes.records.push_back(random_record(rng, lookup));
    resp.conflicts.push_back({"List", 3, resp.changes.replica_id, ConflictPolicy::ServerWins});
    resp.applied = 4;
    resp.rejected.push_back({"Products", 2, ErrorCode::ForeignKeyViolation, "gone"});
    auto resp_back = merge_response_from_json(json::parse(to_json(resp, lookup).dump()), lookup);
    EXPECT_EQ(resp_back.changes, resp.changes);
    EXPECT_EQ(resp_back.conflicts, resp.conflicts);
    EXPECT_EQ(resp_back.applied, 4u);
    EXPECT_EQ(resp_back.rejected, resp.rejected);
}

TEST(WireMessageTest, RdaMessages) {
    PullRequest pull{"Products", "SELECT * FROM Products"};
    auto pull_back = pull_request_from_json(to_json(pull));
    EXPECT_EQ(pull_back.table, pull.table);
    EXPECT_EQ(pull_back.query, pull.query);

    PullResponse rows;
    rows.source_table = "Products";
    rows.columns = {{.name = "Product_Id", .kind = ColumnKind::Integer, .nullable = false, .primary_key = true},
                    {.name = "Price", .kind = ColumnKind::Decimal, .nullable = false}};
    rows.rows = {store::Row{{std::int64_t{1}, *Decimal::parse("0.5")}}};
    auto rows_back = pull_response_from_json(json::parse(to_json(rows).dump()));
    EXPECT_EQ(rows_back.source_table, "Products");
    EXPECT_EQ(rows_back.columns, rows.columns);
    EXPECT_EQ(rows_back.rows, rows.rows);

    Rng rng(9);
    auto lookup = default_lookup();
    PushRequest push;
    push.table = "Products";
    push.replica_id = store::ReplicaId::random();
    for (const auto& c : lookup("Products")->columns) push.columns.push_back(c.name);
    for (int i = 0; i < 5; ++i) {
        auto r = random_record(rng, lookup);
        while (r.table != "Products") r = random_record(rng, lookup);
        // Pushed records always originate at the pushing replica.
        r.version.origin = push.replica_id;
        push.records.push_back(r);
    }
    auto push_back = push_request_from_json(json::parse(to_json(push).dump()), lookup);
    EXPECT_EQ(push_back.table, push.table);
    EXPECT_EQ(push_back.replica_id, push.replica_id);
    EXPECT_EQ(push_back.columns, push.columns);
    EXPECT_EQ(push_back.records, push.records);

    PushResponse presp{3, 1, {{"Products", 9, PushErrorReason::RowMissingOnServer, "no row"}}};
    auto presp_back = push_response_from_json(to_json(presp));
    EXPECT_EQ(presp_back.applied, 3u);
    EXPECT_EQ(presp_back.skipped, 1u);
    EXPECT_EQ(presp_back.errors, presp.errors);
}

TEST(WireErrorTest, RoundTripsCodeDetailAndPosition) {
    Error e(ErrorCode::SyntaxError, "expected FROM");
    e.position = 9;
    auto j = error_to_json(e);
    EXPECT_EQ(j["error"], "SyntaxError");
    EXPECT_EQ(j["position"], 9);
    auto back = error_from_json(j);
    EXPECT_EQ(back.code(), ErrorCode::SyntaxError);
    EXPECT_EQ(back.detail(), "expected FROM");
    EXPECT_EQ(back.position, 9u);
    EXPECT_EQ(error_from_json(json{{"error", "NoSuchCode"}}).code(), ErrorCode::TransportFailure);
    EXPECT_EQ(error_from_json(json::array()).code(), ErrorCode::TransportFailure);
}

} // namespace
} // namespace shoplist::sync::wire
