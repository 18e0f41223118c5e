#include "kacres/server.hpp"

#include <httplib.h>

#include "kacres/errors.hpp"

namespace kacres::service {

Reply dispatch(Api& api, const std::string& method, const std::string& path, const std::string& body)
{
    try {
        if (path == "/health") {
            if (method != "GET")
                return {405, dump(Json{{"schema_version", kSchemaVersion}, {"error", {{"kind", "method_not_allowed"}}}})};
            return {200, dump(api.health())};
        }
        using Handler = Json (*)(Api&, const Json&);
        static const std::pair<const char*, Handler> routes[] = {
            {"/api/diagram/parse", [](Api& a, const Json& r) { return a.parse_diagram(r); }},
            {"/api/resolve", [](Api& a, const Json& r) { return a.resolve(r); }},
            {"/api/functions", [](Api& a, const Json& r) { return a.functions(r); }},
            {"/api/moves/applicable", [](Api& a, const Json& r) { return a.moves_applicable(r); }},
            {"/api/moves/apply", [](Api& a, const Json& r) { return a.moves_apply(r); }},
            {"/api/series", [](Api& a, const Json& r) { return a.series(r); }},
            {"/api/step/plan", [](Api& a, const Json& r) { return a.step_plan(r); }},
            {"/api/step/custom", [](Api& a, const Json& r) { return a.step_custom(r); }},
        };
        for (const auto& [route, handler] : routes) {
            if (path != route)
                continue;
            if (method != "POST")
                return {405, dump(Json{{"schema_version", kSchemaVersion}, {"error", {{"kind", "method_not_allowed"}}}})};
            Json req;
            try {
                req = Json::parse(body);
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(std::string("body is not valid JSON: ") + e.what());
            }
            return {200, dump(handler(api, req))};
        }
        return {404, dump(Json{{"schema_version", kSchemaVersion},
                               {"error", {{"kind", "not_found"}, {"message", "no route " + path}}}})};
    } catch (const std::exception& e) {
        const auto c = classify_current_exception();
        return {c.http_status, dump(error_body(c, e.what()))};
    }
}

HttpService::HttpService(Api& api)
    : api_(api)
    , server_(std::make_unique<httplib::Server>())
{
    auto handle = [this](const httplib::Request& req, httplib::Response& res) {
        auto reply = dispatch(api_, req.method, req.path, req.body);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    };
    server_->Get(".*", handle);
    server_->Post(".*", handle);
    server_->Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Headers", "Content-Type"},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port)
{
    if (port == 0)
        return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpService::listen()
{
    return server_->listen_after_bind();
}

void HttpService::stop()
{
    server_->stop();
}

} // namespace kacres::service
