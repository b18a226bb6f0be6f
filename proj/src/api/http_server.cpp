#include "dengue/api/http_server.hpp"

#define CPPHTTPLIB_LISTEN_BACKLOG 256
#include <httplib.h>

#include <stdexcept>

namespace dengue::api {

namespace {

HttpRequest convert(const httplib::Request& req) {
    HttpRequest out;
    out.method = req.method;
    out.path = req.path;
    for (const auto& [key, value] : req.params) out.query.emplace(key, value);
    if (req.has_header("Authorization")) out.authorization = req.get_header_value("Authorization");
    out.body = req.body;
    return out;
}

}  // namespace

HttpServer::HttpServer(ApiService& service, ServerOptions options)
    : service_(service), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
    const auto threads = options_.worker_threads;
    server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    server_->set_keep_alive_max_count(100);
    server_->set_keep_alive_timeout(2);
    server_->set_payload_max_length(4 * 1024 * 1024);

    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        auto out = service_.handle(convert(req));
        res.status = out.status;
        if (out.status == 401) res.set_header("WWW-Authenticate", "Bearer");
        res.set_content(out.body, out.content_type);
    };
    const std::string pattern = std::string(kApiBase) + "/.*";
    server_->Get(pattern, handler);
    server_->Post(pattern, handler);
    server_->Patch(pattern, handler);
    server_->Put(pattern, handler);
    server_->Delete(pattern, handler);

    server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        const char* code = res.status == 404 ? "not_found" : res.status == 413 ? "payload_too_large" : "http_error";
        res.set_content(std::string(R"({"error":{"code":")") + code + R"(","message":")" +
                            httplib::status_message(res.status) + R"("}})",
                        "application/json");
    });

    if (!options_.web_root.empty() && !server_->set_mount_point("/", options_.web_root))
        throw std::runtime_error("web root '" + options_.web_root + "' is not a directory");
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    int port = options_.port;
    if (port == 0) {
        port = server_->bind_to_any_port(options_.host);
    } else if (!server_->bind_to_port(options_.host, port)) {
        port = -1;
    }
    if (port < 0) throw std::runtime_error("cannot listen on " + options_.host + ":" + std::to_string(options_.port));
    return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_ && server_->is_running()) server_->stop();
}

bool HttpServer::is_running() const { return server_->is_running(); }

}  // namespace dengue::api
