// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/server/http_endpoint.hpp"

#include "shoplist/error.hpp"

#include <httplib.h>

namespace shoplist::server {

using sync::wire::json;
namespace wire = sync::wire;

struct HttpEndpoint::Impl {
    std::string base_url;
    wire::TableLookup lookup;
    std::string token;
    httplib::Client client;

    Impl(std::string url, wire::TableLookup l, std::string t, std::chrono::seconds timeout)
        : base_url(std::move(url)), lookup(std::move(l)), token(std::move(t)), client(base_url) {
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        if (!client.is_valid()) throw Error(ErrorCode::TransportFailure, "bad server url " + base_url);
    }
};

HttpEndpoint::HttpEndpoint(std::string base_url, wire::TableLookup lookup, std::string bearer_token,
                           std::chrono::seconds timeout)
    : impl_(std::make_unique<Impl>(std::move(base_url), std::move(lookup), std::move(bearer_token), timeout)) {}

HttpEndpoint::~HttpEndpoint() = default;

json HttpEndpoint::call(const std::string& method, const std::string& path, const json* body) {
    auto& c = impl_->client;
    httplib::Headers headers;
    if (!impl_->token.empty()) headers.emplace("Authorization", "Bearer " + impl_->token);
    std::string payload = body ? body->dump() : std::string("{}");

    httplib::Result res;
    if (method == "GET") {
        res = c.Get(path, headers);
    } else if (method == "POST") {
        res = c.Post(path, headers, payload, "application/json");
    } else if (method == "PATCH") {
        res = c.Patch(path, headers, payload, "application/json");
    } else {
        throw Error(ErrorCode::TransportFailure, "unsupported method " + method);
    }
    if (!res) {
        throw Error(ErrorCode::TransportFailure,
                    impl_->base_url + path + ": " + httplib::to_string(res.error()));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (res->status >= 200 && res->status < 300) {
        if (reply.is_discarded()) throw Error(ErrorCode::TransportFailure, "reply is not JSON");
        return reply;
    }
    if (reply.is_discarded()) {
        throw Error(ErrorCode::TransportFailure, "HTTP " + std::to_string(res->status) + " from " + path);
    }
    throw wire::error_from_json(reply);
}

sync::PeerInfo HttpEndpoint::hello() {
    auto reply = call("GET", "/api/health");
    try {
        return wire::peer_info_from_json(reply);
    } catch (const Error& e) {
        throw Error(ErrorCode::TransportFailure, "bad health reply: " + e.detail());
    }
}

sync::MergeResponse HttpEndpoint::merge(const sync::MergeRequest& request) {
    auto body = wire::to_json(request, impl_->lookup);
    return wire::merge_response_from_json(call("POST", "/api/merge", &body), impl_->lookup);
}

sync::PullResponse HttpEndpoint::pull(const sync::PullRequest& request) {
    auto body = wire::to_json(request);
    return wire::pull_response_from_json(call("POST", "/api/rda/pull", &body));
}

sync::PushResponse HttpEndpoint::push(const sync::PushRequest& request) {
    auto body = wire::to_json(request);
    return wire::push_response_from_json(call("POST", "/api/rda/push", &body));
}

std::size_t HttpEndpoint::submit(std::string_view sql) {
    json body{{"sql", sql}};
    auto reply = call("POST", "/api/rda/submit", &body);
    if (!reply.contains("affected")) throw Error(ErrorCode::TransportFailure, "bad submit reply");
    return reply["affected"].get<std::size_t>();
}

} // namespace shoplist::server
