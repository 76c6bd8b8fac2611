// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/server/http_endpoint.hpp"
#include "shoplist/server/server.hpp"
#include "shoplist/sync/rda.hpp"
#include "shoplist/sync/wire.hpp"
#include "sync_workload.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

namespace shoplist::server {
namespace {

using sync::wire::json;
using testing::FakeClock;
using testing::TempDir;

ErrorCode error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::IoFailure;
}

struct Reply {
    int status = 0;
    json body;
};

class ServerTest : public ::testing::Test {
protected:
    TempDir dir;
    FakeClock clock;
    std::unique_ptr<sync::Replica> replica = sync::Replica::create({dir.file("server.sdf"), ""},
                                                                   store::default_schema(), testing::options_with(clock));
    std::unique_ptr<Server> server;

    void start(ServerConfig config = {}) {
        config.any_port = true;
        server = std::make_unique<Server>(config, *replica);
        server->start();
    }
    void SetUp() override { start(); }

    Reply request(const std::string& method, const std::string& path, const std::optional<json>& body = std::nullopt,
                  const std::string& token = {}) {
        httplib::Client client("127.0.0.1", server->port());
        httplib::Headers headers;
        if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
        std::string text = body ? body->dump() : "";
        httplib::Result res;
        if (method == "GET") res = client.Get(path, headers);
        else if (method == "POST") res = client.Post(path, headers, text, "application/json");
        else res = client.Patch(path, headers, text, "application/json");
        if (!res) {
            ADD_FAILURE() << "no response for " << method << " " << path;
            return {};
        }
        return {res->status, json::parse(res->body, nullptr, false)};
    }
};

TEST(ServerConfigTest, Validation) {
    ServerConfig ok;
    EXPECT_NO_THROW(validate(ok));
    ServerConfig bad_port;
    bad_port.port = 0;
    EXPECT_EQ(error_of([&] { validate(bad_port); }), ErrorCode::InvalidConfig);
    bad_port.any_port = true;
    EXPECT_NO_THROW(validate(bad_port));
    ServerConfig small;
    small.max_request_bytes = kMinRequestLimit - 1;
    EXPECT_EQ(error_of([&] { validate(small); }), ErrorCode::InvalidConfig);
}

TEST(ServerConfigTest, StatusMapping) {
    EXPECT_EQ(http_status(ErrorCode::UnknownProduct), 404);
    EXPECT_EQ(http_status(ErrorCode::DuplicateCategory), 409);
    EXPECT_EQ(http_status(ErrorCode::ForeignKeyViolation), 409);
    EXPECT_EQ(http_status(ErrorCode::SchemaMismatch), 409);
    EXPECT_EQ(http_status(ErrorCode::SyntaxError), 422);
    EXPECT_EQ(http_status(ErrorCode::NotAQuery), 422);
    EXPECT_EQ(http_status(ErrorCode::MalformedChangeSet), 422);
    EXPECT_EQ(http_status(ErrorCode::Unauthorized), 401);
    EXPECT_EQ(http_status(ErrorCode::IoFailure), 500);
}

TEST_F(ServerTest, Health) {
    auto r = request("GET", "/api/health");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.body["status"], "ok");
    EXPECT_EQ(r.body["format_version"], 1);
    EXPECT_EQ(r.body["replica_id"], replica->tracker().replica_id().hex());
    EXPECT_EQ(r.body["schema_fingerprint"], std::to_string(replica->merge_fingerprint()));
}

TEST_F(ServerTest, CategoryEndpoints) {
    auto created = request("POST", "/api/categories", json{{"name", "food"}});
    EXPECT_EQ(created.status, 201);
    EXPECT_EQ(created.body, (json{{"id", 1}, {"name", "food"}}));
    auto dup = request("POST", "/api/categories", json{{"name", "Food"}});
    EXPECT_EQ(dup.status, 409);
    EXPECT_EQ(dup.body["error"], "DuplicateCategory");
    EXPECT_EQ(request("POST", "/api/categories", json{{"name", ""}}).status, 422);
    EXPECT_EQ(request("POST", "/api/categories", json::object()).status, 422);
    auto all = request("GET", "/api/categories");
    EXPECT_EQ(all.status, 200);
    EXPECT_EQ(all.body, json::array({json{{"id", 1}, {"name", "food"}}}));
}

TEST_F(ServerTest, ProductEndpoints) {
    request("POST", "/api/categories", json{{"name", "food"}});
    auto bread = request("POST", "/api/products", json{{"name", "bread"}, {"price", "1.20"}, {"category_id", 1}});
    EXPECT_EQ(bread.status, 201);
    EXPECT_EQ(bread.body["price"], "1.2");
    EXPECT_EQ(bread.body["category_id"], 1);
    EXPECT_EQ(bread.body["is_favorite"], false);
    auto card = request("POST", "/api/products", json{{"name", "gift card"}, {"price", 25}, {"favorite", true}});
    EXPECT_EQ(card.status, 201);
    EXPECT_EQ(card.body["category_id"], nullptr);
    EXPECT_EQ(request("POST", "/api/products", json{{"name", "x"}, {"price", "-1"}}).body["error"], "InvalidPrice");
    EXPECT_EQ(request("POST", "/api/products", json{{"name", "x"}, {"price", 1}, {"category_id", 9}}).status, 404);

    auto favorites = request("GET", "/api/products?favorites=true");
    ASSERT_EQ(favorites.body.size(), 1u);
    EXPECT_EQ(favorites.body[0]["name"], "gift card");
    EXPECT_EQ(request("GET", "/api/products").body.size(), 2u);
    EXPECT_EQ(request("GET", "/api/products?category=1").body.size(), 1u);

    auto fav = request("PATCH", "/api/products/1/favorite", json{{"favorite", true}});
    EXPECT_EQ(fav.status, 200);
    EXPECT_EQ(fav.body["is_favorite"], true);
    EXPECT_EQ(request("GET", "/api/products?favorites=true").body.size(), 2u);
    EXPECT_EQ(request("PATCH", "/api/products/99/favorite", json{{"favorite", true}}).status, 404);
}

TEST_F(ServerTest, ListEndpoints) {
    request("POST", "/api/products", json{{"name", "bread"}, {"price", "1"}});
    auto item = request("POST", "/api/list", json{{"product_id", 1}});
    EXPECT_EQ(item.status, 201);
    EXPECT_EQ(item.body["bought"], false);
    EXPECT_EQ(item.body["color"], "red");
    EXPECT_EQ(request("POST", "/api/list", json{{"product_id", 1}}).status, 409);
    EXPECT_EQ(request("POST", "/api/list", json{{"product_id", 5}}).status, 404);

    auto checked = request("PATCH", "/api/list/1/check");
    EXPECT_EQ(checked.body["bought"], true);
    EXPECT_EQ(checked.body["color"], "green");
    auto list = request("GET", "/api/list");
    ASSERT_EQ(list.body.size(), 1u);
    EXPECT_EQ(list.body[0]["product_name"], "bread");
    EXPECT_EQ(list.body[0]["color"], "green");
    EXPECT_EQ(request("PATCH", "/api/list/1/check").body["color"], "red");
    EXPECT_EQ(request("PATCH", "/api/list/7/check").status, 404);
    EXPECT_EQ(request("POST", "/api/list/new").body, (json{{"cleared", 1}}));
    EXPECT_TRUE(request("GET", "/api/list").body.empty());
}

TEST_F(ServerTest, SubmitEndpoint) {
    auto ok = request("POST", "/api/rda/submit", json{{"sql", "Insert into Products(Product_Name, Price) values ('x', 2.5)"}});
    EXPECT_EQ(ok.status, 200);
    EXPECT_EQ(ok.body, (json{{"affected", 1}}));
    auto select = request("POST", "/api/rda/submit", json{{"sql", "SELECT * FROM Products"}});
    EXPECT_EQ(select.status, 422);
    EXPECT_EQ(select.body["error"], "NotAQuery");
    auto fk = request("POST", "/api/rda/submit",
                      json{{"sql", "insert into Products(Category_Id, Product_Name, Price) values (4, 'y', 1)"}});
    EXPECT_EQ(fk.status, 409);
    EXPECT_EQ(fk.body["error"], "ForeignKeyViolation");
    EXPECT_EQ(replica->store().row_count("Products"), 1u);
}

TEST_F(ServerTest, PullEndpointIsReadOnly) {
    for (int i = 0; i < 3; ++i) {
        request("POST", "/api/categories", json{{"name", "c" + std::to_string(i)}});
    }
    auto before = testing::read_file(dir.file("server.sdf"));
    auto rows = request("POST", "/api/rda/pull", json{{"query", "select * from Categories"}});
    EXPECT_EQ(rows.status, 200);
    EXPECT_EQ(rows.body["rows"].size(), 3u);
    EXPECT_EQ(rows.body["source_table"], "Categories");
    EXPECT_EQ(testing::read_file(dir.file("server.sdf")), before);

    auto bad = request("POST", "/api/rda/pull", json{{"query", "select * form Categories"}});
    EXPECT_EQ(bad.status, 422);
    EXPECT_EQ(bad.body["error"], "SyntaxError");
    EXPECT_EQ(bad.body["position"], 9);
    EXPECT_EQ(request("POST", "/api/rda/pull", json{{"query", "select * from Nope"}}).status, 404);
}

TEST_F(ServerTest, MalformedBodies) {
    httplib::Client client("127.0.0.1", server->port());
    auto res = client.Post("/api/merge", "{not json", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
    EXPECT_EQ(json::parse(res->body)["error"], "MalformedChangeSet");
    EXPECT_EQ(request("POST", "/api/merge", json{{"changes", 1}}).status, 422);
    EXPECT_EQ(request("POST", "/api/sync/merge", json::object()).body["error"], "InvalidConfig");
}

TEST_F(ServerTest, EmptyMergeLeavesAnchorsUnchanged) {
    auto seen = replica->tracker().seen();
    sync::MergeRequest req;
    req.changes.replica_id = store::ReplicaId::random();
    req.schema_fingerprint = replica->merge_fingerprint();
    auto lookup = sync::wire::lookup_in(replica->store());
    auto r = request("POST", "/api/merge", sync::wire::to_json(req, lookup));
    EXPECT_EQ(r.status, 200);
    EXPECT_TRUE(r.body["changes"]["records"].empty());
    EXPECT_TRUE(r.body["conflicts"].empty());
    EXPECT_EQ(r.body["applied"], 0);
    EXPECT_EQ(replica->tracker().seen(), seen);

    req.schema_fingerprint += 1;
    auto mismatch = request("POST", "/api/merge", sync::wire::to_json(req, lookup));
    EXPECT_EQ(mismatch.status, 409);
    EXPECT_EQ(mismatch.body["error"], "SchemaMismatch");
}

TEST_F(ServerTest, BearerToken) {
    server.reset();
    ServerConfig config;
    config.bearer_token = "s3cret";
    start(config);
    auto denied = request("GET", "/api/health");
    EXPECT_EQ(denied.status, 401);
    EXPECT_EQ(denied.body["error"], "Unauthorized");
    EXPECT_EQ(request("GET", "/api/health", std::nullopt, "wrong").status, 401);
    EXPECT_EQ(request("GET", "/api/health", std::nullopt, "s3cret").status, 200);

    HttpEndpoint anonymous(server->url(), sync::wire::lookup_in(replica->store()));
    EXPECT_EQ(error_of([&] { anonymous.hello(); }), ErrorCode::Unauthorized);
    HttpEndpoint authorized(server->url(), sync::wire::lookup_in(replica->store()), "s3cret");
    EXPECT_EQ(authorized.hello().replica_id, replica->tracker().replica_id());
}

TEST_F(ServerTest, RequestSizeLimit) {
    server.reset();
    ServerConfig config;
    config.max_request_bytes = kMinRequestLimit;
    start(config);
    json big{{"name", std::string(kMinRequestLimit + 10, 'x')}};
    EXPECT_EQ(request("POST", "/api/categories", big).status, 413);
    EXPECT_EQ(replica->store().row_count("Categories"), 0u);
    EXPECT_EQ(request("POST", "/api/categories", json{{"name", "ok"}}).status, 201);
}

TEST_F(ServerTest, UnreachableServerIsATransportFailure) {
    auto url = server->url();
    server.reset();
    HttpEndpoint ep(url, sync::wire::lookup_in(replica->store()), {}, std::chrono::seconds(2));
    EXPECT_EQ(error_of([&] { ep.hello(); }), ErrorCode::TransportFailure);
    EXPECT_EQ(error_of([&] { sync::rda_submit_sql(ep, "delete from List"); }), ErrorCode::TransportFailure);
}

TEST_F(ServerTest, RdaOverHttp) {
    for (int i = 1; i <= 4; ++i) {
        request("POST", "/api/products", json{{"name", "p" + std::to_string(i)}, {"price", i}});
    }
    TempDir client_dir;
    auto client = sync::Replica::create({client_dir.file("c.sdf"), ""}, store::default_schema(), {}, false);
    HttpEndpoint ep(server->url(), sync::wire::lookup_in(client->store()));
    EXPECT_EQ(sync::rda_pull(*client, ep, "Remote", "SELECT * FROM Products"), 4u);
    EXPECT_EQ(client->store().scan("Remote"), replica->store().scan("Products"));

    store::Assignment set{"Price", store::Decimal::from_units(50)};
    client->store().update_row("Remote", 2, {&set, 1});
    client->store().delete_row("Remote", 3);
    client->store().insert_row("Remote", store::Row{{store::Null{}, store::Null{}, std::string("new"),
                                                     store::Decimal::from_units(5), true}});

    // Replaying the identical push request applies nothing new.
    sync::PushRequest req;
    req.table = "Products";
    req.replica_id = client->tracker().replica_id();
    for (const auto& c : client->store().table_def("Remote").columns) req.columns.push_back(c.name);
    req.records = client->tracker().records("Remote");
    auto first = request("POST", "/api/rda/push", sync::wire::to_json(req));
    EXPECT_EQ(first.body["applied"], 3);
    auto second = request("POST", "/api/rda/push", sync::wire::to_json(req));
    EXPECT_EQ(second.body["applied"], 0);
    EXPECT_EQ(second.body["skipped"], 3);

    auto result = sync::rda_push(*client, ep, "Remote");
    EXPECT_EQ(result.applied, 0u);
    EXPECT_TRUE(result.errors.empty());
    EXPECT_TRUE(client->tracker().records("Remote").empty());
    EXPECT_EQ(client->store().scan("Remote"), replica->store().scan("Products"));
}

TEST(ServerMergeTest, HttpMergeMatchesInProcessMerge) {
    testing::Rng rng(21);
    for (int scenario = 0; scenario < 4; ++scenario) {
        testing::Cluster cluster(2);
        for (std::size_t i = 0; i < 2; ++i) {
            testing::MutationGen gen(cluster[i], cluster.clocks[i], i, rng);
            for (int m = 0; m < 15; ++m) gen.step();
        }
        cluster.close_all();
        TempDir copies;
        for (std::size_t i = 0; i < 2; ++i) {
            std::filesystem::copy_file(cluster.file(i), copies.file("r" + std::to_string(i) + ".sdf"));
        }
        auto policy = static_cast<sync::ConflictPolicy>(testing::pick(rng, 3));

        cluster.reopen_all();
        sync::LocalEndpoint local(cluster[1]);
        auto in_process = sync::merge(cluster[0], local, policy);

        auto client = sync::Replica::open({copies.file("r0.sdf"), ""}, testing::options_with(cluster.clocks[0]));
        auto host = sync::Replica::open({copies.file("r1.sdf"), ""}, testing::options_with(cluster.clocks[1]));
        ServerConfig config;
        config.any_port = true;
        Server server(config, *host);
        server.start();
        HttpEndpoint remote(server.url(), sync::wire::lookup_in(client->store()));
        auto over_http = sync::merge(*client, remote, policy);
        server.stop();

        EXPECT_EQ(over_http.conflicts, in_process.conflicts);
        EXPECT_EQ(over_http.applied_local, in_process.applied_local);
        EXPECT_EQ(over_http.applied_remote, in_process.applied_remote);
        EXPECT_EQ(over_http.rejected_local, in_process.rejected_local);
        EXPECT_EQ(over_http.rejected_remote, in_process.rejected_remote);
        auto tables = testing::app_tables();
        EXPECT_EQ(testing::dump_tables(client->store(), tables), testing::dump_tables(cluster[0].store(), tables));
        EXPECT_EQ(testing::dump_tables(host->store(), tables), testing::dump_tables(cluster[1].store(), tables));
    }
}

TEST(ServerMergeTest, SyncEndpointMergesWithTheConfiguredRemote) {
    testing::Cluster cluster(2);
    cluster[0].store().insert_row("Categories", store::Row{{std::int64_t{100}, std::string("local")}});
    cluster[1].store().insert_row("Categories", store::Row{{std::int64_t{200}, std::string("remote")}});

    ServerConfig upstream_config;
    upstream_config.any_port = true;
    upstream_config.bearer_token = "up";
    Server upstream(upstream_config, cluster[1]);
    upstream.start();

    ServerConfig local_config;
    local_config.any_port = true;
    local_config.remote_url = upstream.url();
    local_config.remote_token = "up";
    Server daemon(local_config, cluster[0]);
    daemon.start();

    httplib::Client client("127.0.0.1", daemon.port());
    auto res = client.Post("/api/sync/merge", R"({"policy":"server"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    auto report = json::parse(res->body);
    EXPECT_EQ(report["applied_local"], 1);
    EXPECT_EQ(report["applied_remote"], 1);
    EXPECT_TRUE(report["conflicts"].empty());
    daemon.stop();
    upstream.stop();
    EXPECT_EQ(testing::dump_tables(cluster[0].store(), testing::app_tables()),
              testing::dump_tables(cluster[1].store(), testing::app_tables()));
}

} // namespace
} // namespace shoplist::server
