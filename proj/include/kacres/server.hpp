#pragma once

#include <memory>
#include <string>

#include "kacres/api.hpp"

namespace httplib {
class Server;
}

namespace kacres::service {

/// Result of routing one request without a socket in between.
struct Reply {
    int status = 200;
    std::string body;
};

/// Routes a POST/GET by path onto Api handlers and maps errors onto status
/// codes. HTTP and the tests share this entry point.
Reply dispatch(Api& api, const std::string& method, const std::string& path, const std::string& body);

/// HTTP front end over an Api. Handlers run on httplib's worker threads.
class HttpService {
public:
    explicit HttpService(Api& api);
    ~HttpService();

    /// Binds host:port (port 0 picks a free one) and returns the bound port,
    /// or -1 on failure.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called.
    bool listen();
    void stop();

private:
    Api& api_;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace kacres::service
