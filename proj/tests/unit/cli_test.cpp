// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/cli/cli.hpp"
#include "shoplist/server/server.hpp"
#include "shoplist/sync/merge.hpp"
#include "shoplist/sync/wire.hpp"
#include "sync_workload.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <csignal>
#include <cstdio>
#include <regex>
#include <sstream>

#include <sys/wait.h>

namespace shoplist::cli {
namespace {

using sync::wire::json;
using testing::TempDir;

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    TempDir dir;
    Environment env{std::nullopt, dir.path()};
    std::string db = dir.file("cli.sdf");

    Outcome run_args(std::vector<std::string> args) {
        std::ostringstream out, err;
        int code = run(args, out, err, env);
        return {code, out.str(), err.str()};
    }
    /// Runs with --db pointing at the test store.
    Outcome cmd(std::vector<std::string> args, bool as_json = false) {
        std::vector<std::string> full{"--db", db};
        if (as_json) full.push_back("--json");
        full.insert(full.end(), args.begin(), args.end());
        return run_args(full);
    }
    json cmd_json(std::vector<std::string> args) {
        auto r = cmd(std::move(args), true);
        EXPECT_EQ(r.code, kExitOk) << r.err;
        return json::parse(r.out);
    }
    void SetUp() override { ASSERT_EQ(cmd({"init"}).code, kExitOk); }
};

TEST(CliPathTest, ResolveOrder) {
    Environment env{std::string("/env/db.sdf"), "/opt/bin"};
    EXPECT_EQ(resolve_store_path(std::string("/flag.sdf"), env), "/flag.sdf");
    EXPECT_EQ(resolve_store_path(std::nullopt, env), "/env/db.sdf");
    env.shoplist_db.reset();
    EXPECT_EQ(resolve_store_path(std::nullopt, env), "/opt/bin/ShopList.sdf");
}

TEST_F(CliTest, InitRefusesToOverwrite) {
    auto r = cmd({"init"});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_NE(r.err.find("FileExists"), std::string::npos);
}

TEST_F(CliTest, DomainErrorsExitWithOne) {
    EXPECT_EQ(cmd({"category", "add", "food"}).code, kExitOk);
    auto dup = cmd({"category", "add", "FOOD"});
    EXPECT_EQ(dup.code, kExitDomain);
    EXPECT_NE(dup.err.find("DuplicateCategory"), std::string::npos);
    EXPECT_EQ(cmd({"product", "add", "x", "1.23456"}).code, kExitDomain);
    EXPECT_EQ(cmd({"list", "check", "4"}).code, kExitDomain);
    auto missing = run_args({"--db", dir.file("absent.sdf"), "category", "list"});
    EXPECT_EQ(missing.code, kExitDomain);
    EXPECT_NE(missing.err.find("IoFailure"), std::string::npos);
    auto bad_password = run_args({"--db", db, "--password", "pw", "category", "list"});
    EXPECT_EQ(bad_password.code, kExitDomain);
    EXPECT_NE(bad_password.err.find("BadPassword"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitWithTwo) {
    EXPECT_EQ(cmd({}).code, kExitUsage);
    EXPECT_EQ(cmd({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(cmd({"category", "add"}).code, kExitUsage);
    EXPECT_EQ(cmd({"product", "add", "x", "1", "--category", "abc"}).code, kExitUsage);
    EXPECT_EQ(cmd({"sync", "merge"}).code, kExitUsage);
    EXPECT_EQ(cmd({"sync", "merge", "--server", "http://127.0.0.1:1", "--policy", "newest"}).code, kExitUsage);
    EXPECT_EQ(cmd({"bench"}).code, kExitUsage);
    EXPECT_EQ(cmd({"--help"}).code, kExitOk);
}

TEST_F(CliTest, TransportErrorsExitWithThree) {
    auto before = testing::read_file(db);
    auto r = cmd({"sync", "merge", "--server", "http://127.0.0.1:1"});
    EXPECT_EQ(r.code, kExitTransport);
    EXPECT_NE(r.err.find("TransportFailure"), std::string::npos);
    EXPECT_EQ(cmd({"sync", "submit", "--server", "http://127.0.0.1:1", "delete from List"}).code, kExitTransport);
    EXPECT_EQ(testing::read_file(db), before);
}

TEST_F(CliTest, ShoppingWorkflowWithJsonOutput) {
    EXPECT_EQ(cmd_json({"category", "add", "dairy"}), (json{{"id", 1}, {"name", "dairy"}}));
    auto milk = cmd_json({"product", "add", "milk", "0.99", "--category", "1"});
    EXPECT_EQ(milk["price"], "0.99");
    EXPECT_EQ(milk["category_id"], 1);
    cmd_json({"product", "add", "tea", "3", "--favorite"});
    EXPECT_EQ(cmd_json({"product", "list", "--favorites"}).size(), 1u);
    EXPECT_EQ(cmd_json({"product", "favorite", "2", "--off"})["is_favorite"], false);

    EXPECT_EQ(cmd_json({"list", "add", "1"})["color"], "red");
    cmd_json({"list", "add", "2"});
    EXPECT_EQ(cmd_json({"list", "check", "2"})["color"], "green");
    auto shown = cmd_json({"list", "show"});
    ASSERT_EQ(shown.size(), 2u);
    EXPECT_EQ(shown[0]["product_name"], "milk");
    EXPECT_EQ(shown[1]["bought"], true);
    EXPECT_EQ(cmd_json({"list", "new"}), (json{{"cleared", 2}}));
    EXPECT_TRUE(cmd_json({"list", "show"}).empty());

    auto text = cmd({"product", "list"});
    EXPECT_EQ(text.out, "1\tmilk\t0.99\t1\n2\ttea\t3.0\t-\n");
}

TEST_F(CliTest, EnvAndBench) {
    auto env_out = cmd_json({"env"});
    EXPECT_EQ(env_out["current_directory"], std::filesystem::current_path().string());
    EXPECT_TRUE(env_out.contains("os_version"));

    auto bench = cmd({"bench", "category", "list"});
    EXPECT_EQ(bench.code, kExitOk);
    EXPECT_TRUE(std::regex_search(bench.out, std::regex(R"(^category list took: \d+ms\n$)")));

    auto bench_json = cmd({"bench", "category", "add", "x"}, true);
    auto j = json::parse(bench_json.out);
    EXPECT_EQ(j["exit_code"], 0);
    EXPECT_EQ(j["result"]["name"], "x");
    EXPECT_TRUE(std::regex_match(j["message"].get<std::string>(), std::regex(R"(category add x took: \d+ms)")));

    auto failing = cmd({"bench", "category", "add", "x"});
    EXPECT_EQ(failing.code, kExitDomain);
    EXPECT_NE(failing.err.find("DuplicateCategory"), std::string::npos);
}

TEST_F(CliTest, SyncCommandsAgainstAServer) {
    TempDir server_dir;
    auto host = sync::Replica::create({server_dir.file("s.sdf"), ""}, store::default_schema());
    host->store().insert_row("Categories", store::Row{{std::int64_t{50}, std::string("remote")}});
    server::ServerConfig config;
    config.any_port = true;
    config.bearer_token = "t";
    server::Server srv(config, *host);
    srv.start();
    auto url = srv.url();

    cmd({"category", "add", "local"});
    EXPECT_EQ(cmd({"sync", "merge", "--server", url}).code, kExitDomain);
    auto merged = cmd_json({"sync", "merge", "--server", url, "--token", "t", "--policy", "server"});
    EXPECT_EQ(merged["applied_local"], 1);
    EXPECT_EQ(merged["applied_remote"], 1);
    EXPECT_EQ(host->store().row_count("Categories"), 2u);

    auto pulled = cmd_json({"sync", "pull", "--server", url, "--token", "t", "Remote", "select * from Categories"});
    EXPECT_EQ(pulled["rows"], 2);
    EXPECT_EQ(cmd_json({"sync", "submit", "--server", url, "--token", "t",
                        "insert into Categories(Category_Name) values ('third')"})["affected"],
              1);
    auto pushed = cmd_json({"sync", "push", "--server", url, "--token", "t", "Remote"});
    EXPECT_EQ(pushed["applied"], 0);
    EXPECT_TRUE(pushed["errors"].empty());
    EXPECT_EQ(cmd_json({"sync", "gc"})["purged"], 0);
    srv.stop();
}

TEST(CliMergeTest, CliMergeMatchesInProcessMerge) {
    testing::Rng rng(5);
    testing::Cluster cluster(2);
    for (std::size_t i = 0; i < 2; ++i) {
        testing::MutationGen gen(cluster[i], cluster.clocks[i], i, rng);
        for (int m = 0; m < 25; ++m) gen.step();
    }
    cluster.close_all();
    TempDir copies;
    for (std::size_t i = 0; i < 2; ++i) {
        std::filesystem::copy_file(cluster.file(i), copies.file("r" + std::to_string(i) + ".sdf"));
    }
    cluster.reopen_all();
    sync::LocalEndpoint local(cluster[1]);
    auto expected = sync::merge(cluster[0], local, sync::ConflictPolicy::ClientWins);

    auto host = sync::Replica::open({copies.file("r1.sdf"), ""});
    server::ServerConfig config;
    config.any_port = true;
    server::Server srv(config, *host);
    srv.start();
    std::ostringstream out, err;
    Environment env{std::nullopt, copies.path()};
    int code = run({"--db", copies.file("r0.sdf"), "--json", "sync", "merge", "--server", srv.url(), "--policy",
                    "client"},
                   out, err, env);
    srv.stop();
    ASSERT_EQ(code, kExitOk) << err.str();
    auto report = json::parse(out.str());
    EXPECT_EQ(report["conflicts"].size(), expected.conflicts.size());
    EXPECT_EQ(report["applied_local"], expected.applied_local);
    EXPECT_EQ(report["applied_remote"], expected.applied_remote);

    auto client = sync::Replica::open({copies.file("r0.sdf"), ""});
    auto tables = testing::app_tables();
    EXPECT_EQ(testing::dump_tables(client->store(), tables), testing::dump_tables(cluster[0].store(), tables));
    EXPECT_EQ(testing::dump_tables(host->store(), tables), testing::dump_tables(cluster[1].store(), tables));
}

/// Output of a shell command and its exit status.
std::pair<int, std::string> shell(const std::string& command) {
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    char buf[256];
    while (pipe && fgets(buf, sizeof buf, pipe)) output += buf;
    int status = pipe ? pclose(pipe) : -1;
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

TEST(CliBinaryTest, DefaultStoreLivesNextToTheExecutable) {
    TempDir bin;
    auto exe = bin.file("shoplist");
    std::filesystem::copy_file(SHOPLIST_CLI_PATH, exe);
    std::filesystem::permissions(exe, std::filesystem::perms::owner_all);
    auto [code, out] = shell("cd / && env -u SHOPLIST_DB '" + exe + "' init");
    EXPECT_EQ(code, 0) << out;
    EXPECT_TRUE(std::filesystem::exists(bin.file("ShopList.sdf")));

    TempDir other;
    auto via_env = shell("SHOPLIST_DB='" + other.file("env.sdf") + "' '" + exe + "' init");
    EXPECT_EQ(via_env.first, 0);
    EXPECT_TRUE(std::filesystem::exists(other.file("env.sdf")));
    EXPECT_EQ(shell("'" + exe + "' nonsense 2>/dev/null").first, 2);
}

TEST(CliBinaryTest, ServeOnAFreePortUntilSignalled) {
    TempDir dir;
    auto db = dir.file("s.sdf");
    ASSERT_EQ(shell("'" SHOPLIST_CLI_PATH "' --db '" + db + "' init").first, 0);
    FILE* pipe = popen(("sh -c 'echo $$; exec \"" SHOPLIST_CLI_PATH "\" --db \"" + db +
                        "\" serve --bind 127.0.0.1:0'")
                           .c_str(),
                       "r");
    ASSERT_NE(pipe, nullptr);
    char line[256];
    ASSERT_NE(fgets(line, sizeof line, pipe), nullptr);
    pid_t pid = std::stoi(line);
    ASSERT_NE(fgets(line, sizeof line, pipe), nullptr);
    std::smatch m;
    std::string listening = line;
    ASSERT_TRUE(std::regex_search(listening, m, std::regex(R"(listening on http://127\.0\.0\.1:(\d+))")))
        << listening;
    int port = std::stoi(m[1]);
    EXPECT_GT(port, 0);

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/api/categories", R"({"name":"served"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);

    kill(pid, SIGTERM);
    int status = pclose(pipe);
    EXPECT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0);
    auto reopened = sync::Replica::open({db, ""});
    EXPECT_EQ(reopened->store().row_count("Categories"), 1u);
}

} // namespace
} // namespace shoplist::cli
