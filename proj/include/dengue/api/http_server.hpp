#pragma once

#include <memory>
#include <string>

#include "dengue/api/service.hpp"

namespace httplib {
class Server;
}

namespace dengue::api {

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::size_t worker_threads = 64;
    /// Optional directory served at "/" (the web dashboard build output).
    std::string web_root;
};

/// Binds an ApiService to a listening HTTP socket.
class HttpServer {
public:
    HttpServer(ApiService& service, ServerOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; returns the bound port. Throws std::runtime_error
    /// when the address is unavailable.
    int bind();

    /// Serves until stop() is called. bind() must have succeeded.
    void run();

    void stop();
    bool is_running() const;

private:
    ApiService& service_;
    ServerOptions options_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace dengue::api
