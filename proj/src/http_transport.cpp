#ifdef STORMCAST_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "stormcast/ingest.hpp"

namespace stormcast {

namespace {

// One short-lived client per request; keeps the transport trivially thread-safe.
class HttplibTransport : public HttpTransport {
public:
    std::optional<std::string> get(const std::string& url) override {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) return std::nullopt;
        const auto path_start = url.find('/', scheme_end + 3);
        const std::string origin =
            path_start == std::string::npos ? url : url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

#ifndef STORMCAST_HAVE_OPENSSL
        if (origin.rfind("https://", 0) == 0) return std::nullopt;
#endif
        httplib::Client client(origin);
        client.set_follow_location(true);
        client.set_connection_timeout(30);
        client.set_read_timeout(60);
        auto res = client.Get(path);
        if (!res || res->status != 200) return std::nullopt;
        return std::move(res->body);
    }
};

} // namespace

std::unique_ptr<HttpTransport> make_https_transport() {
    return std::make_unique<HttplibTransport>();
}

} // namespace stormcast
