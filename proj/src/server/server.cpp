// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/server/server.hpp"

#include "shoplist/appcore/shoplist.hpp"
#include "shoplist/server/app_json.hpp"
#include "shoplist/server/http_endpoint.hpp"
#include "shoplist/sync/merge.hpp"
#include "shoplist/sync/rda.hpp"
#include "shoplist/sync/wire.hpp"

#include <httplib.h>

#include <mutex>
#include <shared_mutex>
#include <thread>

namespace shoplist::server {
namespace {

namespace wire = sync::wire;

enum class Access { Read, Write };

struct Reply {
    int status = 200;
    json body;
};

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::MalformedChangeSet, "request body must be a JSON object");
    }
    return j;
}

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

std::int64_t path_id(const httplib::Request& req) {
    return std::stoll(req.matches[1].str());
}

} // namespace

void validate(const ServerConfig& config) {
    if (!config.any_port && (config.port < 1 || config.port > 65535)) {
        throw Error(ErrorCode::InvalidConfig, "port must be in [1, 65535]");
    }
    if (config.max_request_bytes < kMinRequestLimit) {
        throw Error(ErrorCode::InvalidConfig, "request size limit must be at least 64 KiB");
    }
    if (config.bind_address.empty()) throw Error(ErrorCode::InvalidConfig, "empty bind address");
}

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownTable:
    case ErrorCode::UnknownColumn:
    case ErrorCode::UnknownCategory:
    case ErrorCode::UnknownProduct:
    case ErrorCode::UnknownItem:
        return 404;
    case ErrorCode::DuplicateCategory:
    case ErrorCode::DuplicateListItem:
    case ErrorCode::DuplicateKey:
    case ErrorCode::ForeignKeyViolation:
    case ErrorCode::UniqueViolation:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::TableExists:
    case ErrorCode::PendingChangesExist:
    case ErrorCode::TrackingModeConflict:
        return 409;
    case ErrorCode::InvalidName:
    case ErrorCode::InvalidPrice:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnsupportedStatement:
    case ErrorCode::NotAQuery:
    case ErrorCode::TypeMismatch:
    case ErrorCode::NullViolation:
    case ErrorCode::CheckViolation:
    case ErrorCode::MalformedChangeSet:
    case ErrorCode::MissingPrimaryKey:
    case ErrorCode::NotTracked:
    case ErrorCode::InvalidConfig:
        return 422;
    case ErrorCode::Unauthorized:
        return 401;
    case ErrorCode::TransportFailure:
        return 502;
    default:
        return 500;
    }
}

struct Server::Impl {
    ServerConfig config;
    sync::Replica& replica;
    httplib::Server http;
    std::shared_mutex lock;
    std::thread thread;
    int port = 0;
    bool running = false;

    Impl(ServerConfig c, sync::Replica& r) : config(std::move(c)), replica(r) {}

    wire::TableLookup lookup() { return wire::lookup_in(replica.store()); }

    /// Wraps a handler with locking, body parsing and error mapping.
    template <class F>
    httplib::Server::Handler route(Access access, F fn) {
        return [this, access, fn](const httplib::Request& req, httplib::Response& res) {
            try {
                Reply reply;
                if (access == Access::Write) {
                    std::unique_lock guard(lock);
                    reply = fn(req);
                } else {
                    std::shared_lock guard(lock);
                    reply = fn(req);
                }
                send(res, reply.status, reply.body);
            } catch (const Error& e) {
                send(res, http_status(e.code()), wire::error_to_json(e));
            } catch (const json::exception& e) {
                send(res, 422, wire::error_to_json(Error(ErrorCode::MalformedChangeSet, e.what())));
            } catch (const std::exception& e) {
                send(res, 500, wire::error_to_json(Error(ErrorCode::IoFailure, e.what())));
            }
        };
    }

    /// Runs a write inside one store transaction.
    template <class F>
    auto transact(F fn) {
        store::Store::Transaction txn(replica.store());
        auto out = fn();
        txn.commit();
        return out;
    }

    void install_routes();
};

void Server::Impl::install_routes() {
    http.set_payload_max_length(config.max_request_bytes);

    if (!config.bearer_token.empty()) {
        http.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
            if (req.get_header_value("Authorization") == "Bearer " + config.bearer_token) {
                return httplib::Server::HandlerResponse::Unhandled;
            }
            send(res, 401, wire::error_to_json(Error(ErrorCode::Unauthorized, "missing or wrong bearer token")));
            return httplib::Server::HandlerResponse::Handled;
        });
    }

    http.Get("/api/health", route(Access::Read, [this](const httplib::Request&) {
        auto body = wire::to_json(replica.info());
        body["status"] = "ok";
        return Reply{200, body};
    }));

    // ── exchange endpoints ──────────────────────────────────────

    http.Post("/api/merge", route(Access::Write, [this](const httplib::Request& req) {
        auto body = parse_body(req);
        if (!body.contains("policy")) body["policy"] = sync::to_string(config.default_policy);
        auto request = wire::merge_request_from_json(body, lookup());
        auto response = sync::serve_merge(replica, request);
        return Reply{200, wire::to_json(response, lookup())};
    }));

    http.Post("/api/rda/pull", route(Access::Read, [this](const httplib::Request& req) {
        auto request = wire::pull_request_from_json(parse_body(req));
        auto body = wire::to_json(sync::serve_pull(replica, request));
        body["anchor"] = wire::to_json(replica.tracker().seen());
        return Reply{200, body};
    }));

    http.Post("/api/rda/push", route(Access::Write, [this](const httplib::Request& req) {
        auto request = wire::push_request_from_json(parse_body(req), lookup());
        return Reply{200, wire::to_json(sync::serve_push(replica, request))};
    }));

    http.Post("/api/rda/submit", route(Access::Write, [this](const httplib::Request& req) {
        auto body = parse_body(req);
        auto affected = sync::serve_submit(replica, body.at("sql").get<std::string>());
        return Reply{200, json{{"affected", affected}}};
    }));

    http.Post("/api/sync/merge", route(Access::Write, [this](const httplib::Request& req) {
        if (!config.remote_url) throw Error(ErrorCode::InvalidConfig, "no remote server configured");
        auto body = parse_body(req);
        auto policy = config.default_policy;
        if (body.contains("policy")) {
            auto p = sync::conflict_policy_from_string(body["policy"].get<std::string>());
            if (!p) throw Error(ErrorCode::InvalidConfig, "policy must be server, client or latest");
            policy = *p;
        }
        HttpEndpoint remote(*config.remote_url, lookup(), config.remote_token);
        return Reply{200, to_json(sync::merge(replica, remote, policy))};
    }));

    // ── app endpoints ───────────────────────────────────────────

    http.Get("/api/categories", route(Access::Read, [this](const httplib::Request&) {
        json out = json::array();
        for (const auto& c : appcore::ShopList(replica.store()).list_categories()) out.push_back(to_json(c));
        return Reply{200, out};
    }));

    http.Post("/api/categories", route(Access::Write, [this](const httplib::Request& req) {
        auto body = parse_body(req);
        if (!body.contains("name") || !body["name"].is_string()) {
            throw Error(ErrorCode::InvalidName, "name is required");
        }
        auto name = body["name"].get<std::string>();
        auto category = transact([&] { return appcore::ShopList(replica.store()).add_category(name); });
        return Reply{201, to_json(category)};
    }));

    http.Get("/api/products", route(Access::Read, [this](const httplib::Request& req) {
        std::optional<std::int64_t> category;
        if (req.has_param("category")) category = std::stoll(req.get_param_value("category"));
        bool favorites = req.has_param("favorites") && req.get_param_value("favorites") == "true";
        json out = json::array();
        for (const auto& p : appcore::ShopList(replica.store()).list_products(category, favorites)) {
            out.push_back(to_json(p));
        }
        return Reply{200, out};
    }));

    http.Post("/api/products", route(Access::Write, [this](const httplib::Request& req) {
        auto body = parse_body(req);
        if (!body.contains("name") || !body["name"].is_string()) {
            throw Error(ErrorCode::InvalidName, "name is required");
        }
        if (!body.contains("price")) throw Error(ErrorCode::InvalidPrice, "price is required");
        std::optional<std::int64_t> category;
        if (body.contains("category_id") && !body["category_id"].is_null()) {
            category = body["category_id"].get<std::int64_t>();
        }
        auto name = body["name"].get<std::string>();
        auto price = price_from_json(body["price"]);
        bool favorite = body.value("favorite", body.value("is_favorite", false));
        auto product = transact(
            [&] { return appcore::ShopList(replica.store()).add_product(category, name, price, favorite); });
        return Reply{201, to_json(product)};
    }));

    http.Patch(R"(/api/products/(\d+)/favorite)", route(Access::Write, [this](const httplib::Request& req) {
        auto body = parse_body(req);
        bool favorite = body.value("favorite", body.value("is_favorite", true));
        auto id = path_id(req);
        auto product = transact([&] { return appcore::ShopList(replica.store()).set_favorite(id, favorite); });
        return Reply{200, to_json(product)};
    }));

    http.Get("/api/list", route(Access::Read, [this](const httplib::Request&) {
        json out = json::array();
        for (const auto& e : appcore::ShopList(replica.store()).current_list()) out.push_back(to_json(e));
        return Reply{200, out};
    }));

    http.Post("/api/list", route(Access::Write, [this](const httplib::Request& req) {
        auto body = parse_body(req);
        auto product = body.at("product_id").get<std::int64_t>();
        auto item = transact([&] { return appcore::ShopList(replica.store()).add_to_list(product); });
        return Reply{201, to_json(item)};
    }));

    http.Post("/api/list/new", route(Access::Write, [this](const httplib::Request&) {
        auto cleared = transact([&] { return appcore::ShopList(replica.store()).new_shoplist(); });
        return Reply{200, json{{"cleared", cleared}}};
    }));

    http.Patch(R"(/api/list/(\d+)/check)", route(Access::Write, [this](const httplib::Request& req) {
        auto id = path_id(req);
        auto item = transact([&] { return appcore::ShopList(replica.store()).check_item(id); });
        return Reply{200, to_json(item)};
    }));
}

Server::Server(ServerConfig config, sync::Replica& replica)
    : impl_(std::make_unique<Impl>(std::move(config), replica)) {}

Server::~Server() { stop(); }

void Server::start() {
    auto& im = *impl_;
    if (im.running) return;
    validate(im.config);
    im.install_routes();
    if (im.config.any_port) {
        im.port = im.http.bind_to_any_port(im.config.bind_address);
    } else {
        im.port = im.http.bind_to_port(im.config.bind_address, im.config.port) ? im.config.port : -1;
    }
    if (im.port <= 0) {
        throw Error(ErrorCode::IoFailure, "cannot bind " + im.config.bind_address + ":" +
                                              std::to_string(im.config.port));
    }
    im.running = true;
    im.thread = std::thread([&im] { im.http.listen_after_bind(); });
    im.http.wait_until_ready();
}

void Server::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

void Server::stop() {
    auto& im = *impl_;
    if (!im.running) return;
    im.http.stop();
    if (im.thread.joinable()) im.thread.join();
    im.running = false;
}

int Server::port() const { return impl_->port; }

std::string Server::url() const {
    return "http://" + impl_->config.bind_address + ":" + std::to_string(impl_->port);
}

} // namespace shoplist::server
