// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/cli/cli.hpp"

#include "shoplist/appcore/shoplist.hpp"
#include "shoplist/diag/diag.hpp"
#include "shoplist/error.hpp"
#include "shoplist/server/app_json.hpp"
#include "shoplist/server/http_endpoint.hpp"
#include "shoplist/server/server.hpp"
#include "shoplist/sync/merge.hpp"
#include "shoplist/sync/rda.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include <pthread.h>
#include <unistd.h>

namespace shoplist::cli {
namespace {

using server::json;

struct Options {
    std::optional<std::string> db;
    std::string password;
    bool json = false;

    std::string server_url;
    std::string token;
    std::string policy = "latest";

    std::string name;
    std::string price;
    std::optional<std::int64_t> category;
    bool favorite = false;
    bool favorites = false;
    bool off = false;
    std::int64_t id = 0;

    std::string table;
    std::string query;
    bool no_track = false;

    std::string bind = "127.0.0.1:8080";
    std::optional<std::string> remote;
};

/// Shared state for one invocation.
class Invocation {
public:
    Invocation(Options& opts, std::ostream& out, const Environment& env) : o_(opts), out_(out), env_(env) {}

    store::ConnectionSpec spec() const {
        return {resolve_store_path(o_.db, env_).string(), o_.password};
    }

    sync::Replica& replica() {
        if (!replica_) replica_ = sync::Replica::open(spec());
        return *replica_;
    }

    appcore::ShopList app() { return appcore::ShopList(replica().store()); }

    void finish() {
        if (replica_) replica_->close();
    }

    /// Prints `j` as JSON, or `text` otherwise.
    void emit(const json& j, const std::string& text) {
        if (o_.json) {
            out_ << j.dump() << "\n";
        } else if (!text.empty()) {
            out_ << text << (text.back() == '\n' ? "" : "\n");
        }
    }

    sync::ConflictPolicy policy() const {
        auto p = sync::conflict_policy_from_string(o_.policy);
        if (!p) throw CLI::ValidationError("--policy", "must be server, client or latest");
        return *p;
    }

    std::unique_ptr<server::HttpEndpoint> remote() {
        if (o_.server_url.empty()) throw CLI::RequiredError("--server");
        return std::make_unique<server::HttpEndpoint>(o_.server_url, sync::wire::lookup_in(replica().store()),
                                                      o_.token);
    }

    Options& o_;
    std::ostream& out_;
    const Environment& env_;
    std::unique_ptr<sync::Replica> replica_;
};

std::string product_line(const appcore::Product& p) {
    std::ostringstream s;
    s << p.id << "\t" << p.name << "\t" << p.price.to_string() << "\t"
      << (p.category_id ? std::to_string(*p.category_id) : "-") << (p.is_favorite ? "\t*" : "");
    return s.str();
}

std::string item_line(const appcore::ShopListItem& item) {
    return "item " + std::to_string(item.id) + " (product " + std::to_string(item.product_id) + ") " +
           (item.bought ? "bought" : "not bought") + ", " + std::string(appcore::to_string(item.display_color()));
}

void cmd_init(Invocation& inv) {
    auto spec = inv.spec();
    auto replica = sync::Replica::create(spec, store::default_schema());
    replica->close();
    inv.emit({{"path", spec.data_source}}, "created " + spec.data_source);
}

void cmd_category_add(Invocation& inv) {
    auto c = inv.app().add_category(inv.o_.name);
    inv.emit(server::to_json(c), "category " + std::to_string(c.id) + ": " + c.name);
}

void cmd_category_list(Invocation& inv) {
    json j = json::array();
    std::string text;
    for (const auto& c : inv.app().list_categories()) {
        j.push_back(server::to_json(c));
        text += std::to_string(c.id) + "\t" + c.name + "\n";
    }
    inv.emit(j, text);
}

void cmd_product_add(Invocation& inv) {
    auto price = store::Decimal::parse(inv.o_.price);
    if (!price) throw Error(ErrorCode::InvalidPrice, "price must be a decimal with at most 4 fraction digits");
    auto p = inv.app().add_product(inv.o_.category, inv.o_.name, *price, inv.o_.favorite);
    inv.emit(server::to_json(p), product_line(p));
}

void cmd_product_list(Invocation& inv) {
    json j = json::array();
    std::string text;
    for (const auto& p : inv.app().list_products(inv.o_.category, inv.o_.favorites)) {
        j.push_back(server::to_json(p));
        text += product_line(p) + "\n";
    }
    inv.emit(j, text);
}

void cmd_product_favorite(Invocation& inv) {
    auto p = inv.app().set_favorite(inv.o_.id, !inv.o_.off);
    inv.emit(server::to_json(p), product_line(p));
}

void cmd_list_new(Invocation& inv) {
    auto& store = inv.replica().store();
    store::Store::Transaction txn(store);
    auto cleared = inv.app().new_shoplist();
    txn.commit();
    inv.emit({{"cleared", cleared}}, "cleared " + std::to_string(cleared) + " items");
}

void cmd_list_add(Invocation& inv) {
    auto item = inv.app().add_to_list(inv.o_.id);
    inv.emit(server::to_json(item), item_line(item));
}

void cmd_list_check(Invocation& inv) {
    auto item = inv.app().check_item(inv.o_.id);
    inv.emit(server::to_json(item), item_line(item));
}

void cmd_list_show(Invocation& inv) {
    json j = json::array();
    std::string text;
    for (const auto& e : inv.app().current_list()) {
        j.push_back(server::to_json(e));
        text += std::to_string(e.item.id) + "\t" + (e.item.bought ? "[x]" : "[ ]") + "\t" + e.product_name +
                "\t" + e.price.to_string() + "\t" + std::string(appcore::to_string(e.item.display_color())) + "\n";
    }
    inv.emit(j, text);
}

void cmd_sync_merge(Invocation& inv) {
    auto remote = inv.remote();
    auto report = sync::merge(inv.replica(), *remote, inv.policy());
    std::ostringstream s;
    s << "applied local: " << report.applied_local << ", applied remote: " << report.applied_remote
      << ", conflicts: " << report.conflicts.size() << "\n";
    for (const auto& c : report.conflicts) {
        s << "conflict " << c.table << " " << c.pk << " winner " << c.winner.hex() << " ("
          << sync::to_string(c.policy) << ")\n";
    }
    for (const auto& r : report.rejected_local) {
        s << "rejected locally " << r.table << " " << r.pk << ": " << to_string(r.reason) << "\n";
    }
    for (const auto& r : report.rejected_remote) {
        s << "rejected remotely " << r.table << " " << r.pk << ": " << to_string(r.reason) << "\n";
    }
    inv.emit(server::to_json(report), s.str());
}

void cmd_sync_pull(Invocation& inv) {
    auto remote = inv.remote();
    auto rows = sync::rda_pull(inv.replica(), *remote, inv.o_.table, inv.o_.query, !inv.o_.no_track);
    inv.emit({{"table", inv.o_.table}, {"rows", rows}},
             "pulled " + std::to_string(rows) + " rows into " + inv.o_.table);
}

void cmd_sync_push(Invocation& inv) {
    auto remote = inv.remote();
    auto result = sync::rda_push(inv.replica(), *remote, inv.o_.table);
    std::string text = "pushed " + std::to_string(result.applied) + " changes\n";
    for (const auto& e : result.errors) {
        text += "error " + e.table + " " + std::to_string(e.pk) + ": " + std::string(sync::to_string(e.reason)) +
                "\n";
    }
    inv.emit(server::to_json(result), text);
}

void cmd_sync_submit(Invocation& inv) {
    auto remote = inv.remote();
    auto affected = sync::rda_submit_sql(*remote, inv.o_.query);
    inv.emit({{"affected", affected}}, std::to_string(affected) + " rows affected");
}

void cmd_sync_gc(Invocation& inv) {
    auto& tracker = inv.replica().tracker();
    std::vector<sync::SyncAnchor> acks;
    for (const auto& [peer, anchor] : tracker.peer_anchors()) acks.push_back(anchor);
    auto purged = tracker.gc_tombstones(acks);
    inv.emit({{"purged", purged}}, "purged " + std::to_string(purged) + " tombstones");
}

void cmd_serve(Invocation& inv, std::ostream& out) {
    server::ServerConfig config;
    auto colon = inv.o_.bind.rfind(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--bind", "expected HOST:PORT");
    config.bind_address = inv.o_.bind.substr(0, colon);
    try {
        config.port = std::stoi(inv.o_.bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--bind", "port is not a number");
    }
    // Port 0 asks the OS for a free port; the chosen one is printed.
    config.any_port = config.port == 0;
    config.default_policy = inv.policy();
    config.bearer_token = inv.o_.token;
    config.remote_url = inv.o_.remote;
    config.remote_token = inv.o_.token;

    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &stop_signals, &previous);

    server::Server srv(config, inv.replica());
    try {
        srv.start();
    } catch (...) {
        pthread_sigmask(SIG_SETMASK, &previous, nullptr);
        throw;
    }
    out << "listening on " << srv.url() << std::endl;
    int sig = 0;
    sigwait(&stop_signals, &sig);
    srv.stop();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
}

void cmd_env(Invocation& inv) {
    auto info = diag::environment_snapshot();
    inv.emit({{"current_directory", info.current_directory},
              {"machine_name", info.machine_name},
              {"user_name", info.user_name},
              {"os_version", info.os_version}},
             "current_directory: " + info.current_directory + "\nmachine_name: " + info.machine_name +
                 "\nuser_name: " + info.user_name + "\nos_version: " + info.os_version);
}

/// Index of a leading "bench" preceded only by global options.
std::optional<std::size_t> bench_split(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a == "bench") return i;
        if (a == "--db" || a == "--password") {
            ++i;
        } else if (a != "--json" && a.rfind("--db=", 0) != 0 && a.rfind("--password=", 0) != 0) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

int exit_code_for(const Error& e) {
    return e.code() == ErrorCode::TransportFailure ? kExitTransport : kExitDomain;
}

} // namespace

Environment Environment::from_process() {
    Environment env;
    if (const char* db = std::getenv("SHOPLIST_DB"); db && *db) env.shoplist_db = db;
    std::error_code ec;
    auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
    env.executable_dir = ec ? std::filesystem::current_path() : exe.parent_path();
    return env;
}

std::filesystem::path resolve_store_path(const std::optional<std::string>& db_flag, const Environment& env) {
    if (db_flag && !db_flag->empty()) return *db_flag;
    if (env.shoplist_db) return *env.shoplist_db;
    return store::default_store_path(env.executable_dir);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
    Options o;
    CLI::App app{"Offline-first shopping list with merge replication and remote data access", "shoplist"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--db", o.db, "Store file (default: $SHOPLIST_DB, then ShopList.sdf next to the executable)");
    app.add_option("--password", o.password, "Store password");
    app.add_flag("--json", o.json, "Machine-readable output");

    std::function<void(Invocation&)> action;
    auto on = [&](CLI::App* cmd, void (*fn)(Invocation&)) { cmd->callback([&action, fn] { action = fn; }); };

    on(app.add_subcommand("init", "Create a store with the shopping-list schema"), cmd_init);

    auto* category = app.add_subcommand("category", "Manage categories")->require_subcommand(1);
    auto* category_add = category->add_subcommand("add", "Add a category");
    category_add->add_option("name", o.name)->required();
    on(category_add, cmd_category_add);
    on(category->add_subcommand("list", "List categories"), cmd_category_list);

    auto* product = app.add_subcommand("product", "Manage products")->require_subcommand(1);
    auto* product_add = product->add_subcommand("add", "Add a product");
    product_add->add_option("name", o.name)->required();
    product_add->add_option("price", o.price)->required();
    product_add->add_option("--category", o.category, "Category id");
    product_add->add_flag("--favorite", o.favorite, "Mark as favorite");
    on(product_add, cmd_product_add);
    auto* product_list = product->add_subcommand("list", "List products");
    product_list->add_option("--category", o.category, "Only this category");
    product_list->add_flag("--favorites", o.favorites, "Only favorites");
    on(product_list, cmd_product_list);
    auto* product_favorite = product->add_subcommand("favorite", "Mark or unmark a favorite");
    product_favorite->add_option("id", o.id)->required();
    product_favorite->add_flag("--off", o.off, "Clear the favorite flag");
    on(product_favorite, cmd_product_favorite);

    auto* list = app.add_subcommand("list", "Work with the shopping list")->require_subcommand(1);
    on(list->add_subcommand("new", "Start a new, empty list"), cmd_list_new);
    auto* list_add = list->add_subcommand("add", "Put a product on the list");
    list_add->add_option("product_id", o.id)->required();
    on(list_add, cmd_list_add);
    auto* list_check = list->add_subcommand("check", "Toggle an item's bought flag");
    list_check->add_option("item_id", o.id)->required();
    on(list_check, cmd_list_check);
    on(list->add_subcommand("show", "Show the current list"), cmd_list_show);

    auto* sync_cmd = app.add_subcommand("sync", "Exchange data with a server")->require_subcommand(1);
    auto add_remote = [&](CLI::App* cmd) {
        cmd->add_option("--server", o.server_url, "Server base URL")->required();
        cmd->add_option("--token", o.token, "Bearer token");
    };
    auto* sync_merge = sync_cmd->add_subcommand("merge", "Two-way merge with the server");
    add_remote(sync_merge);
    sync_merge->add_option("--policy", o.policy, "server, client or latest")
        ->check(CLI::IsMember({"server", "client", "latest"}));
    on(sync_merge, cmd_sync_merge);
    auto* sync_pull = sync_cmd->add_subcommand("pull", "Copy a server query result into a local table");
    sync_pull->add_option("table", o.table, "Local table")->required();
    sync_pull->add_option("query", o.query, "SELECT statement")->required();
    sync_pull->add_flag("--no-track", o.no_track, "Do not track local edits");
    add_remote(sync_pull);
    on(sync_pull, cmd_sync_pull);
    auto* sync_push = sync_cmd->add_subcommand("push", "Send a pulled table's edits to the server");
    sync_push->add_option("table", o.table, "Local table")->required();
    add_remote(sync_push);
    on(sync_push, cmd_sync_push);
    auto* sync_submit = sync_cmd->add_subcommand("submit", "Run an INSERT, UPDATE or DELETE on the server");
    sync_submit->add_option("sql", o.query)->required();
    add_remote(sync_submit);
    on(sync_submit, cmd_sync_submit);
    on(sync_cmd->add_subcommand("gc", "Purge tombstones every known peer has seen"), cmd_sync_gc);

    auto* serve = app.add_subcommand("serve", "Serve the store over HTTP until interrupted");
    serve->add_option("--bind", o.bind, "HOST:PORT (port 0 picks a free port)");
    serve->add_option("--remote", o.remote, "Upstream server for POST /api/sync/merge");
    serve->add_option("--token", o.token, "Required bearer token");
    serve->add_option("--policy", o.policy, "Default merge policy")
        ->check(CLI::IsMember({"server", "client", "latest"}));
    bool serving = false;
    serve->callback([&] { serving = true; });

    on(app.add_subcommand("env", "Show environment information"), cmd_env);

    // Parsed by hand below; registered for --help only.
    app.add_subcommand("bench", "Run another command and report its duration")->allow_extras();

    if (auto split = bench_split(args)) {
        auto globals = std::vector<std::string>(args.begin(), args.begin() + *split);
        auto nested = std::vector<std::string>(args.begin() + *split + 1, args.end());
        if (nested.empty()) {
            err << "bench: missing command\n";
            return kExitUsage;
        }
        bool json_out = std::find(globals.begin(), globals.end(), "--json") != globals.end();
        std::vector<std::string> nested_args = globals;
        nested_args.insert(nested_args.end(), nested.begin(), nested.end());

        std::string label;
        for (const auto& w : nested) {
            if (w.rfind("-", 0) == 0) break;
            label += (label.empty() ? "" : " ") + w;
        }
        std::ostringstream captured;
        auto timer = diag::start_measure();
        int code = run(nested_args, captured, err, env);
        auto message = diag::display_measure_result(timer, label);
        if (json_out) {
            auto result = json::parse(captured.str(), nullptr, false);
            out << json{{"exit_code", code},
                        {"result", result.is_discarded() ? json(nullptr) : result},
                        {"ms", timer.time_taken()},
                        {"message", message}}
                       .dump()
                << "\n";
        } else {
            out << captured.str() << message << "\n";
        }
        return code;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Invocation inv(o, out, env);
    try {
        if (serving) {
            cmd_serve(inv, out);
        } else {
            action(inv);
        }
        inv.finish();
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.detail() << "\n";
        return exit_code_for(e);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

} // namespace shoplist::cli
